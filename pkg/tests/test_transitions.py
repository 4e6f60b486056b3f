"""Transition profiles, pair compatibility tables, chains, and the grid map."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from echkit.linear import lin
from echkit.transitions import (
    ALLOWED_PAIRS,
    EXCLUDED_PAIRS,
    TYPES,
    chain_check,
    compatible,
    f_grid,
    mirror,
    pair_report,
    profile,
)

EXPECTED_ALLOWED = {
    ("b", "a"), ("a", "b'"), ("b", "b'"), ("c", "b'"), ("a'", "b'"),
    ("c", "a"), ("a", "c'"), ("b", "c'"), ("c", "c'"), ("a'", "c'"),
    ("b", "a'"), ("c", "a'"),
}


@pytest.fixture(scope="module")
def report():
    return pair_report()


@pytest.fixture(scope="module")
def chains():
    return chain_check()


class TestProfiles:
    def test_single_drop(self):
        p = profile("a")
        assert p.deltas == (lin({"P'": 1, "P": -1}), lin({"P'": 1}))
        assert p.etas == (lin({"P'": Fraction(1, 2)}),
                          lin({"P'": Fraction(1, 2), "P": Fraction(-1, 2)}))
        assert p.ratio is None
        assert p.largest_f == lin({"P'": 1})
        assert p.largest_f_multiplicity_lower_bound == 1
        assert p.side == "upper"

    def test_balanced_double_drop(self):
        p = profile("b")
        assert p.ratio == Fraction(3, 2)
        assert p.deltas == (lin({"P": Fraction(1, 2)}), lin({"P": Fraction(1, 2)}))
        assert p.etas == (lin({"P": Fraction(1, 2)}), lin({"P": Fraction(1, 4)}))
        assert p.largest_f == lin({"P": Fraction(1, 2)})
        assert p.largest_f_multiplicity_lower_bound == 2

    def test_mirrored_uneven_double_drop(self):
        p = profile("c'")
        assert p.ratio == Fraction(4, 3)
        assert p.base.set_tag == "q"
        assert p.side == "lower"
        assert p.deltas == (lin({"P": Fraction(2, 3)}), lin({"P": Fraction(1, 3)}))
        assert p.etas == (lin({"P": Fraction(1, 2)}), lin({"P": Fraction(1, 6)}))

    def test_every_value_sits_on_the_twelfth_grid(self):
        """After substituting the fixed ratio, every profile action is an
        integer multiple of P/12."""
        for t in TYPES:
            p = profile(t)
            for e in list(p.deltas) + list(p.etas) + [p.largest_f]:
                coeff = e.get("P", Fraction(0))
                if p.ratio is not None:
                    coeff += e.get("P'", Fraction(0)) * p.ratio
                    assert coeff.denominator in (1, 2, 3, 4, 6, 12)
                else:
                    for v in e.values():
                        assert v.denominator in (1, 2, 3, 4, 6, 12)

    def test_unknown_type_rejected(self):
        with pytest.raises(ValueError):
            profile("z")


class TestPairTable:
    def test_exactly_the_transcribed_exclusions(self, report):
        assert set(report.excluded) == set(EXCLUDED_PAIRS)
        assert len(report.excluded) == 24

    def test_exactly_twelve_allowed(self, report):
        assert set(report.allowed) == EXPECTED_ALLOWED
        assert set(ALLOWED_PAIRS) == EXPECTED_ALLOWED

    def test_no_deviations(self, report):
        assert report.deviations == []

    def test_mirror_symmetry_all_36(self, report):
        assert report.mirror_symmetric()
        for t1 in TYPES:
            for t2 in TYPES:
                v = report.verdicts[(t1, t2)]
                w = report.verdicts[(mirror(t2), mirror(t1))]
                assert v.feasible == w.feasible

    def test_prime_first_components_all_excluded(self, report):
        for t2 in TYPES:
            assert not report.verdicts[("b'", t2)].feasible
            assert not report.verdicts[("c'", t2)].feasible

    def test_successor_collision_certificate(self):
        v = compatible("a'", "a")
        assert not v.feasible
        assert v.certificate.rule == "cross_set"
        eq = v.certificate.equation
        assert set(eq) == {"q1n", "p2n"}  # the two successors forced equal

    def test_base_collision_certificate(self):
        v = compatible("b'", "b")
        assert not v.feasible
        assert v.certificate.rule == "cross_set"
        assert set(v.certificate.equation) == {"q1", "p2"}

    def test_allowed_pair_is_feasible_with_witness(self):
        v = compatible("b", "a")
        assert v.feasible
        assert v.sample is not None


class TestChains:
    def test_walk_count_matches_digraph(self, chains):
        starts = {}
        for a, b in chains.allowed_pairs:
            starts.setdefault(a, []).append(b)
        expected = sum(
            len(starts.get(b, ())) for (a, b) in chains.allowed_pairs
        )
        assert len(chains.rows) == expected == 8

    def test_no_chain_of_length_three(self, chains):
        assert chains.feasible_triples == []

    def test_primed_double_drops_never_continue(self, chains):
        assert all(t[0] not in ("b'", "c'") for t in chains.triples)

    def test_reference_triple_excluded(self, chains):
        verdicts = {r.triple: r.verdict for r in chains.rows}
        assert ("b", "a", "b'") in verdicts
        assert not verdicts[("b", "a", "b'")].feasible


class TestFGrid:
    R = Fraction(1)
    EPS = Fraction(1, 100)

    def test_exact_grid_point(self):
        assert f_grid(Fraction(1, 2), self.R, self.EPS) == Fraction(1, 2)

    def test_within_tolerance(self):
        x = Fraction(1, 2) + self.EPS / 2
        assert f_grid(x, self.R, self.EPS) == Fraction(1, 2)

    def test_midpoint_rejected(self):
        assert f_grid(Fraction(1, 24), self.R, self.EPS) is None

    def test_coarse_tolerance_rejected(self):
        with pytest.raises(ValueError, match="tolerance"):
            f_grid(Fraction(1, 2), self.R, Fraction(1, 24))

    @settings(max_examples=150)
    @given(st.fractions(min_value=0, max_value=10))
    def test_idempotent(self, x):
        g = f_grid(x, self.R, self.EPS)
        if g is not None:
            assert f_grid(g, self.R, self.EPS) == g
