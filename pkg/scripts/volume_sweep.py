#!/usr/bin/env python3
"""Convergence table for the spectral volume law on E(1, sqrt(2)).

Prints capacity(k)^2 / (2k) against a*b for a geometric sweep of k.
"""

import argparse
import math

from echkit.exactreal import ExactReal
from echkit.ellipsoid import Ellipsoid, capacities


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=200_000)
    args = ap.parse_args()

    e = Ellipsoid(ExactReal(1), ExactReal.sqrt(2))
    target = float(e.a * e.b)
    caps = capacities(e, args.kmax)
    print(f"target a*b = {target:.8f}")
    print(f"{'k':>8}  {'capacity':>12}  {'ratio':>10}  {'rel. error':>10}")
    k = 10
    while k <= args.kmax:
        c = float(caps[k])
        ratio = c * c / (2 * k)
        print(f"{k:>8}  {c:>12.4f}  {ratio:>10.6f}  "
              f"{abs(ratio - target) / target:>10.4%}")
        k *= 10 if k < 100 else 2
    if not math.isclose(float(caps[1]), min(float(e.a), float(e.b))):
        raise SystemExit("first positive capacity should be min(a, b)")


if __name__ == "__main__":
    main()
