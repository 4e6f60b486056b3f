#!/usr/bin/env python3
"""Error sweep for the lattice count below a line against T^2/(2*S1*S2).

The deviation is expected to grow linearly; the table reports the fitted
per-T constant over a geometric sweep so its stability can be eyeballed.
"""

import argparse

from echkit.exactreal import ExactReal
from echkit.ellipsoid import lattice_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tmax", type=int, default=10_000)
    args = ap.parse_args()

    s1, s2 = ExactReal(1), ExactReal.sqrt(2)
    area = 2 * float(s1) * float(s2)
    print(f"{'T':>8}  {'count':>12}  {'T^2/(2 S1 S2)':>14}  {'err/T':>8}")
    t = 100
    while t <= args.tmax:
        n = lattice_count(s1, s2, ExactReal(t))
        main_term = t * t / area
        print(f"{t:>8}  {n:>12}  {main_term:>14.1f}  "
              f"{abs(n - main_term) / t:>8.4f}")
        t = int(t * 1.5)


if __name__ == "__main__":
    main()
