#!/usr/bin/env python3
"""Density sweep over admissible orbit sets of a two-generator catalog.

Tabulates M^2 / |{admissible sets with action < M}| against twice the
product of the generator actions, and the shares of small elliptic
multiplicities and hyperbolic counts.
"""

import argparse
from fractions import Fraction

from echkit.ellipsoid import density_report, two_elliptic_catalog
from echkit.exactreal import parse_real


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="1")
    ap.add_argument("--b", default="7/5")
    ap.add_argument("--mmax", type=int, default=160)
    args = ap.parse_args()

    a, b = Fraction(args.a), Fraction(args.b)
    cat = two_elliptic_catalog(
        a, b, parse_real("sqrt(2)-1"), parse_real("sqrt(3)-1")
    )
    target = float(2 * a * b)
    print(f"target 2ab = {target:.6f}")
    print(f"{'M':>6}  {'|sets|':>8}  {'M^2/|sets|':>11}  "
          f"{'share E=1':>10}  {'share E in S':>12}")
    m = 20
    while m <= args.mmax:
        rep = density_report(cat, m, gamma_name="g1", e_values=(1,))
        ratio = m * m / rep.total if rep.total else float("nan")
        e1 = rep.e_ratios.get(1)
        print(f"{m:>6}  {rep.total:>8}  {ratio:>11.4f}  "
              f"{float(e1) if e1 is not None else float('nan'):>10.5f}  "
              f"{float(rep.s_union_ratio):>12.5f}")
        m *= 2


if __name__ == "__main__":
    main()
