"""Model geometry: spectrum, grading, lattice counts, densities."""

from fractions import Fraction

import pytest

from echkit.ellipsoid import (
    Ellipsoid,
    Generator,
    capacities,
    capacity,
    density_report,
    enumerate_admissible,
    gen_index,
    generator_orbit_set,
    lattice_count,
    two_elliptic_catalog,
    volume_ratio,
)
from echkit.exactreal import ExactReal, parse_real
from echkit.index import FiniteAbelianGroup, OrbitCatalog, SimpleOrbit
from oracles import capacities_bruteforce, lattice_bruteforce

E_ROUND = Ellipsoid.of(1, 1)
E_IRR = Ellipsoid(ExactReal(1), ExactReal.sqrt(2))


class TestCapacities:
    def test_zeroth_is_zero(self):
        assert capacity(E_ROUND, 0) == ExactReal(0)
        assert capacity(E_IRR, 0) == ExactReal(0)

    def test_round_multiplicities(self):
        assert capacity(E_ROUND, 1) == ExactReal(1)
        assert [c for c in capacities(E_ROUND, 5)] == [
            ExactReal(0), ExactReal(1), ExactReal(1),
            ExactReal(2), ExactReal(2), ExactReal(2),
        ]

    def test_near_round(self):
        e = Ellipsoid.of(1, Fraction(11, 10))
        assert capacity(e, 2) == ExactReal.from_fraction(Fraction(11, 10))

    @pytest.mark.parametrize(
        "a,b",
        [(ExactReal(1), ExactReal(1)),
         (ExactReal(1), ExactReal.from_fraction(Fraction(11, 10))),
         (ExactReal(1), ExactReal.sqrt(2)),
         (ExactReal.from_fraction(Fraction(3, 2)), ExactReal.sqrt(5))],
    )
    def test_matches_bruteforce(self, a, b):
        e = Ellipsoid(a, b)
        assert capacities(e, 400) == capacities_bruteforce(a, b, 400)


class TestGenIndex:
    def test_origin(self):
        assert gen_index(E_IRR, Generator(0, 0)) == 0

    def test_first_two(self):
        assert gen_index(E_IRR, Generator(1, 0)) == 2
        assert gen_index(E_IRR, Generator(0, 1)) == 4

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            gen_index(E_ROUND, Generator(1, 0))

    def test_grading_orders_like_action(self):
        # the k-th capacity is realized by the generator of grading 2k,
        # sampled up to index 20000
        top = 20_000
        caps = capacities(E_IRR, top)
        seen = {}
        m = 0
        while E_IRR.a * m <= caps[top]:
            n = 0
            while E_IRR.a * m + E_IRR.b * n <= caps[top]:
                seen[(m, n)] = E_IRR.a * m + E_IRR.b * n
                n += 1
            m += 1
        by_action = sorted(seen, key=lambda g: seen[g])
        for k in range(0, top + 1, 499):
            assert gen_index(E_IRR, Generator(*by_action[k])) == 2 * k
        assert gen_index(E_IRR, Generator(*by_action[top])) == 2 * top


class TestVolumeRatio:
    def test_round_ellipsoid_converges(self):
        assert abs(volume_ratio(E_ROUND, 5000) - 1) < 0.03

    def test_exact_scaling(self):
        big = Ellipsoid(ExactReal(2), ExactReal(0, 2, 1, 2))  # 2*E(1, sqrt 2)
        caps_small = capacities(E_IRR, 50)
        caps_big = capacities(big, 50)
        for k in range(1, 51):
            assert caps_big[k] == caps_small[k] * 2
        assert volume_ratio(big, 37) == 4 * volume_ratio(E_IRR, 37)


class TestLatticeCount:
    def test_empty_for_nonpositive_bound(self):
        assert lattice_count(1, 1, 0) == 0
        assert lattice_count(1, 1, -3) == 0

    def test_small_triangle(self):
        assert lattice_count(1, 1, Fraction(5, 2)) == 6

    def test_strictness(self):
        assert lattice_count(1, 1, 2) == 3  # (0,0),(1,0),(0,1)

    @pytest.mark.parametrize("t", [Fraction(7, 3), 5, Fraction(49, 4)])
    def test_matches_enumeration_rational(self, t):
        s1, s2 = Fraction(1), Fraction(3, 2)
        assert lattice_count(s1, s2, t) == lattice_bruteforce(s1, s2, t)

    def test_matches_enumeration_surd(self):
        s1, s2 = ExactReal(1), ExactReal.sqrt(2)
        for t in (5, 12, 30):
            te = ExactReal(t)
            assert lattice_count(s1, s2, te) == lattice_bruteforce(s1, s2, te)


def make_single_orbit_catalog():
    return OrbitCatalog(
        FiniteAbelianGroup(()),
        (SimpleOrbit("gamma", "elliptic", Fraction(1),
                     rotation=parse_real("sqrt(2)-1")),),
    )


class TestDensityReport:
    def test_single_orbit_counts(self):
        cat = make_single_orbit_catalog()
        rep = density_report(cat, Fraction(21, 2), e_values=(0, 1, 2))
        # admissible sets with action < 10.5: multiplicities 0..10
        assert rep.total == 11
        for n in (0, 1, 2):
            assert rep.e_ratios[n] == Fraction(1, 11)

    def test_two_elliptic_equals_lattice_count(self):
        a, b = Fraction(1), Fraction(7, 5)
        cat = two_elliptic_catalog(a, b, parse_real("sqrt(2)-1"),
                                   parse_real("sqrt(3)-1"))
        for m in (10, 25):
            rep = density_report(cat, m, gamma_name="g1")
            assert rep.total == lattice_count(a, b, m)

    def test_empty_catalog_reports_absent(self):
        cat = OrbitCatalog(FiniteAbelianGroup(()), ())
        rep = density_report(cat, 0, e_values=(1,))
        assert rep.total == 0
        assert rep.e_ratios[1] is None
        assert rep.s_union_ratio is None

    def test_coverage_bound_enforced(self):
        cat = OrbitCatalog(
            FiniteAbelianGroup(()),
            (SimpleOrbit("gamma", "elliptic", Fraction(1),
                         rotation=parse_real("sqrt(2)-1")),),
            complete_below=Fraction(5),
        )
        with pytest.raises(ValueError, match="complete below"):
            density_report(cat, 6)

    def test_homology_class_filter(self):
        group = FiniteAbelianGroup((2,))
        cat = OrbitCatalog(
            group,
            (SimpleOrbit("gamma", "elliptic", Fraction(1),
                         rotation=parse_real("sqrt(2)-1"), homology=(1,)),),
        )
        sets = enumerate_admissible(cat, Fraction(6), (0,))
        # even multiplicities only (including the empty set)
        assert sorted(s.multiplicity("gamma") for s in sets) == [0, 2, 4]

    def test_generator_orbit_set(self):
        cat = two_elliptic_catalog(Fraction(1), Fraction(2),
                                   parse_real("sqrt(2)-1"),
                                   parse_real("sqrt(3)-1"))
        s = generator_orbit_set(E_IRR, cat, Generator(2, 1))
        assert s.multiplicity("g1") == 2 and s.multiplicity("g2") == 1
