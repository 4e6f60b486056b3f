"""Model geometry E(a, b): action spectrum, lattice-point grading, densities.

The two generators with actions a and b produce the multiset
{m*a + n*b : m, n >= 0}.  Sorting it gives the capacity sequence; counting
lattice points below a value gives the even grading; the ratio
capacity(k)^2 / (2k) approaches a*b, which is the desk-scale shadow of the
volume law for the spectrum.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .exactreal import ExactReal
from .index import OrbitCatalog, OrbitSet, action as orbit_action
from .partitions import s_theta


def _as_exact(x) -> ExactReal:
    if isinstance(x, ExactReal):
        return x
    return ExactReal.from_fraction(Fraction(x))


@dataclass(frozen=True)
class Ellipsoid:
    a: ExactReal
    b: ExactReal

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("ellipsoid parameters must be positive")

    @staticmethod
    def of(a, b) -> "Ellipsoid":
        return Ellipsoid(_as_exact(a), _as_exact(b))

    @property
    def irrational_ratio(self) -> bool:
        return (self.b / self.a).is_irrational


@dataclass(frozen=True)
class Generator:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("generator exponents must be nonnegative")


class _HeapItem:
    __slots__ = ("val", "m", "n")

    def __init__(self, val: ExactReal, m: int, n: int):
        self.val, self.m, self.n = val, m, n

    def __lt__(self, other: "_HeapItem") -> bool:
        return self.val < other.val


def capacities(e: Ellipsoid, kmax: int) -> list[ExactReal]:
    """The first kmax+1 values of the sorted multiset {m*a + n*b}.

    Frontier heap over lattice points; each (m, n) is pushed exactly once
    ((m, n+1) always, (m+1, 0) only from n == 0).  Comparisons are exact, so
    ties in the rational-ratio case keep their multiplicities.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    zero = ExactReal(0)
    heap = [_HeapItem(zero, 0, 0)]
    out: list[ExactReal] = []
    while len(out) <= kmax:
        item = heapq.heappop(heap)
        out.append(item.val)
        heapq.heappush(heap, _HeapItem(item.val + e.b, item.m, item.n + 1))
        if item.n == 0:
            heapq.heappush(heap, _HeapItem(item.val + e.a, item.m + 1, 0))
    return out


def capacity(e: Ellipsoid, k: int) -> ExactReal:
    """k-th smallest value (with multiplicity; index 0 is the value 0)."""
    return capacities(e, k)[k]


def gen_index(e: Ellipsoid, g: Generator) -> int:
    """2 * (number of lattice points with i*a + j*b <= m*a + n*b, minus one)."""
    if not e.irrational_ratio:
        raise ValueError("degenerate ellipsoid: rational action ratio has ties")
    v = e.a * g.m + e.b * g.n
    count = 0
    i = 0
    while e.a * i <= v:
        rem = v - e.a * i
        count += (rem / e.b).floor() + 1
        i += 1
    return 2 * (count - 1)


def volume_ratio(e: Ellipsoid, k: int) -> float:
    """capacity(k)^2 / (2k); approaches a*b as k grows."""
    if k < 1:
        raise ValueError("k must be positive")
    c = float(capacity(e, k))
    return c * c / (2 * k)


def _count_strictly_below(bound, step) -> int:
    """#{t >= 0 : t*step < bound} for positive step, exact for exact types."""
    x = bound / step
    if isinstance(x, ExactReal):
        if x._sign() <= 0:
            return 0
        return x.floor() + (0 if x.is_integer() else 1)
    if x <= 0:
        return 0
    fl = x.__floor__()
    return fl if x == fl else fl + 1


def lattice_count(s1, s2, t) -> int:
    """#{(t1, t2) in Z>=0^2 : t1*s1 + t2*s2 < t}; 0 when t <= 0."""
    s1 = s1 if isinstance(s1, ExactReal) else Fraction(s1)
    s2 = s2 if isinstance(s2, ExactReal) else Fraction(s2)
    t = t if isinstance(t, ExactReal) else Fraction(t)
    if s1 <= 0 or s2 <= 0:
        raise ValueError("steps must be positive")
    total = 0
    t1 = 0
    while True:
        rem = t - s1 * t1
        rows = _count_strictly_below(rem, s2)
        if rows == 0:
            break
        total += rows
        t1 += 1
    return total


# -- density of admissible orbit sets ----------------------------------------


@dataclass(frozen=True)
class DensityReport:
    """Counts over the admissible orbit sets with action below the bound.

    Ratios are None ("absent") when the underlying family is empty.
    """

    max_action: Fraction
    gamma_name: str | None
    total: int
    by_e: dict[int, int]
    by_h: dict[int, int]
    e_ratios: dict[int, Fraction | None]
    h_ratios: dict[int, Fraction | None]
    s_union_ratio: Fraction | None


def enumerate_admissible(
    catalog: OrbitCatalog, max_action: Fraction, gamma_class: tuple[int, ...]
):
    """All admissible orbit sets from the catalog with action < max_action
    and the given homology class (depth-first over the catalog orbits)."""
    if catalog.complete_below is not None and max_action > catalog.complete_below:
        raise ValueError(
            "catalog is only complete below action %s" % catalog.complete_below
        )
    if max_action <= 0:
        return []
    group = catalog.group
    orbits = catalog.orbits
    gamma_class = group.reduce(gamma_class)
    results: list[OrbitSet] = []

    def rec(i: int, budget: Fraction, cls, picked):
        if i == len(orbits):
            if cls == gamma_class:
                results.append(OrbitSet(tuple(picked), group))
            return
        o = orbits[i]
        rec(i + 1, budget, cls, picked)  # multiplicity 0
        top = int((budget / o.action).__floor__()) if o.is_elliptic else 1
        hom = group.reduce(o.homology)
        c = cls
        for m in range(1, top + 1):
            spent = m * o.action
            if spent >= budget:
                break
            c = group.add(c, hom)
            picked.append((o, m))
            rec(i + 1, budget - spent, c, picked)
            picked.pop()

    rec(0, Fraction(max_action), group.zero, [])
    return results


def density_report(
    catalog: OrbitCatalog,
    max_action,
    gamma_class=None,
    gamma_name: str | None = None,
    e_values: tuple[int, ...] = (),
    h_values: tuple[int, ...] = (),
) -> DensityReport:
    """Tabulate the admissible orbit sets with action below the bound.

    e-counts are taken at the designated elliptic orbit (inferred when the
    catalog has exactly one).  The final ratio pools the e-counts that land
    in the best-approximation set of that orbit's rotation number.
    """
    max_action = Fraction(max_action)
    group = catalog.group
    if gamma_class is None:
        gamma_class = group.zero
    gamma = None
    if gamma_name is not None:
        gamma = catalog.get(gamma_name)
    else:
        ell = catalog.elliptic_orbits()
        if len(ell) == 1:
            gamma = ell[0]
    sets = enumerate_admissible(catalog, max_action, gamma_class)
    by_e: dict[int, int] = {}
    by_h: dict[int, int] = {}
    for s in sets:
        e = s.multiplicity(gamma.name) if gamma is not None else 0
        h = sum(1 for o, _ in s.items if o.is_hyperbolic)
        by_e[e] = by_e.get(e, 0) + 1
        by_h[h] = by_h.get(h, 0) + 1
    total = len(sets)

    def ratio(cnt: int) -> Fraction | None:
        return Fraction(cnt, total) if total else None

    e_ratios = {n: ratio(by_e.get(n, 0)) for n in e_values}
    h_ratios = {m: ratio(by_h.get(m, 0)) for m in h_values}
    s_union = None
    if gamma is not None and gamma.is_elliptic and total:
        max_e = max(by_e) if by_e else 0
        members = (
            set(s_theta(gamma.rotation, max_e).members) if max_e >= 1 else set()
        )
        pooled = sum(c for e, c in by_e.items() if e in members)
        s_union = Fraction(pooled, total)
    return DensityReport(
        max_action=max_action,
        gamma_name=gamma.name if gamma is not None else None,
        total=total,
        by_e=by_e,
        by_h=by_h,
        e_ratios=e_ratios,
        h_ratios=h_ratios,
        s_union_ratio=s_union,
    )


def two_elliptic_catalog(a: Fraction, b: Fraction, theta1, theta2) -> OrbitCatalog:
    """Catalog with two elliptic orbits (trivial homology), actions a and b."""
    from .index import FiniteAbelianGroup, SimpleOrbit

    g = FiniteAbelianGroup(())
    return OrbitCatalog(
        g,
        (
            SimpleOrbit("g1", "elliptic", Fraction(a), rotation=theta1),
            SimpleOrbit("g2", "elliptic", Fraction(b), rotation=theta2),
        ),
        complete_below=None,
    )


def generator_orbit_set(e: Ellipsoid, cat: OrbitCatalog, g: Generator) -> OrbitSet:
    items = []
    if g.m:
        items.append((cat.get("g1"), g.m))
    if g.n:
        items.append((cat.get("g2"), g.n))
    return OrbitSet(tuple(items), cat.group)
