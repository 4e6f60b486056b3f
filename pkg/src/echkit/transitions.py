"""Transition types of consecutive low-grading steps and their compatibility.

Each transition between consecutive generators drops the elliptic
multiplicity by a best-approximation denominator P (with successor P') and
pins the actions of the hyperbolic orbits it touches to small rational
multiples of P and P'.  Six types occur: (a), (b), (c) when the drop is
governed by the set tagged "p", and their mirror images (a'), (b'), (c') for
the set tagged "q".  Types b/b' force P' = 3P/2 and c/c' force P' = 4P/3.

Two consecutive transitions share a middle orbit set, and both prescribe the
grid values of its hyperbolic actions.  `compatible` builds the joint system
for the shared middle set - window inequalities for the elliptic
multiplicities, the fixed-ratio equations, order coherence inside one
approximation set, the rule that opposite sets meet only at 1, and (for the
pairs decided by value matching) the assignment of each pinned orbit to a
value slot of the other transition - and hands each scenario to the exact
engine.  A pair is Infeasible only when every scenario is.

The probe depth per ordered pair transcribes the source case analysis: the
24 excluded pairs are decided with the full value-matching probes, the 12
remaining pairs with the consistency skeleton only.  `chain_check` always
uses the full probes on both middle sets of a length-3 chain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .feasibility import (
    COUNT,
    Disequality,
    Feasible,
    Inequality,
    Infeasible,
    MEMBER,
    Relation,
    RelationSystem,
    SUCCESSOR,
    Sym,
    Verdict,
    solve,
)
from .linear import CONST, LinExpr, lin, sub_expr

TYPES = ("a", "a'", "b", "b'", "c", "c'")

# the pair table of the source case analysis: (earlier, later) transitions
# of a shared middle set that force a contradiction
EXCLUDED_PAIRS = frozenset(
    {
        ("a'", "a"), ("b'", "a'"), ("b'", "a"), ("b'", "b"), ("b'", "b'"),
        ("b'", "c"), ("b'", "c'"), ("c'", "a"), ("c'", "a'"), ("c'", "b'"),
        ("c'", "c"), ("c'", "c'"), ("a'", "b"), ("b", "b"), ("c'", "b"),
        ("c", "b"), ("a", "c"), ("b", "c"), ("c", "c"), ("a", "a"),
        ("a'", "a'"), ("a", "b"), ("a'", "c"), ("a", "a'"),
    }
)

ALLOWED_PAIRS = tuple(
    (t1, t2)
    for t1 in TYPES
    for t2 in TYPES
    if (t1, t2) not in EXCLUDED_PAIRS
)


def mirror(t: str) -> str:
    return t[:-1] if t.endswith("'") else t + "'"


def is_primed(t: str) -> bool:
    return t.endswith("'")


def set_tag(t: str) -> str:
    """Unprimed types are governed by the set tagged p, primed by q."""
    return "q" if is_primed(t) else "p"


def ratio(t: str) -> Fraction | None:
    base = t.rstrip("'")
    return {"a": None, "b": Fraction(3, 2), "c": Fraction(4, 3)}[base]


# -- profiles ----------------------------------------------------------------


@dataclass(frozen=True)
class TransitionProfile:
    """Action fingerprint of one transition type, over the symbols P, P'."""

    tag: str
    base: Sym
    side: str  # which of the two sets carries the larger elliptic multiplicity
    e_delta: str  # the elliptic multiplicity drop, always the base member P
    deltas: tuple[LinExpr, ...]  # pinned hyperbolic actions (delta_1, delta_2)
    etas: tuple[LinExpr, LinExpr]  # the two values allowed for every other orbit
    ratio: Fraction | None  # fixed P'/P when the type pins it
    largest_f: LinExpr
    largest_f_multiplicity_lower_bound: int


_P, _PN = "P", "P'"


def _shape(t: str) -> dict:
    base = t.rstrip("'")
    if base == "a":
        return {
            "upper_named": [lin({_PN: 1, _P: -1})],
            "lower_named": [lin({_PN: 1})],
            "etas": (lin({_PN: Fraction(1, 2)}),
                     lin({_PN: Fraction(1, 2), _P: Fraction(-1, 2)})),
            "largest": lin({_PN: 1}),
            "mult": 1,
        }
    if base == "b":
        return {
            "upper_named": [],
            "lower_named": [lin({_P: Fraction(1, 2)}), lin({_P: Fraction(1, 2)})],
            "etas": (lin({_P: Fraction(1, 2)}), lin({_P: Fraction(1, 4)})),
            "largest": lin({_P: Fraction(1, 2)}),
            "mult": 2,
        }
    return {
        "upper_named": [],
        "lower_named": [lin({_P: Fraction(2, 3)}), lin({_P: Fraction(1, 3)})],
        "etas": (lin({_P: Fraction(1, 2)}), lin({_P: Fraction(1, 6)})),
        "largest": lin({_P: Fraction(2, 3)}),
        "mult": 1,
    }


def profile(t: str) -> TransitionProfile:
    if t not in TYPES:
        raise ValueError(f"unknown transition type {t!r}")
    sh = _shape(t)
    primed = is_primed(t)
    named = sh["upper_named"] + sh["lower_named"]  # delta_1 then delta_2
    return TransitionProfile(
        tag=t,
        base=Sym("P", MEMBER, set_tag=set_tag(t), integer=True),
        side="lower" if primed else "upper",
        e_delta="P",
        deltas=tuple(named),
        etas=sh["etas"],
        ratio=ratio(t),
        largest_f=sh["largest"],
        largest_f_multiplicity_lower_bound=sh["mult"],
    )


# -- the grid map -------------------------------------------------------------


def f_grid(action: Fraction, r: Fraction, eps_prime: Fraction) -> Fraction | None:
    """Nearest point of (1/12)*r*Z when within eps_prime, else None.

    eps_prime < r/24 keeps the nearest grid point unique; the midpoint of a
    grid cell is then never within tolerance, so ties are always rejected.
    """
    action, r, eps_prime = Fraction(action), Fraction(r), Fraction(eps_prime)
    if r <= 0 or eps_prime <= 0:
        raise ValueError("grid unit and tolerance must be positive")
    if eps_prime >= r / 24:
        raise ValueError("tolerance too coarse: nearest grid point not unique")
    g = r / 12
    n = (action / g).__floor__()
    best = min((n * g, (n + 1) * g), key=lambda v: abs(action - v))
    return best if abs(action - best) <= eps_prime else None


# -- joint systems over shared middle sets ------------------------------------


@dataclass
class _SideView:
    """One transition's description of a shared middle orbit set."""

    t: str
    role: str  # "upper" | "lower": is the middle set the upper or lower one
    b: str
    bn: str
    m: str
    tag: str
    named: list[LinExpr]
    etas: tuple[LinExpr, LinExpr]
    e_expr: LinExpr
    ratio: Fraction | None

    @property
    def gap(self) -> LinExpr:
        return lin({self.bn: 1, self.b: -1})

    def members(self) -> list[LinExpr]:
        return [lin({self.b: 1}), lin({self.bn: 1})]


def _side_view(t: str, idx: int, role: str) -> _SideView:
    sh = _shape(t)
    tag = set_tag(t)
    b, bn, m = f"{tag}{idx}", f"{tag}{idx}n", f"M{idx}"

    def inst(e: LinExpr) -> LinExpr:
        return {
            {_P: b, _PN: bn}[k]: v for k, v in e.items()
        }

    # a primed type is the mirror image: what the unprimed shape pins on the
    # lower set, its mirror pins on the upper set, and the template elliptic
    # count M sits on the other side as well
    primed = is_primed(t)
    shape_role = role if not primed else ("lower" if role == "upper" else "upper")
    named = [inst(e) for e in (sh["upper_named"] if shape_role == "upper"
                               else sh["lower_named"])]
    etas = tuple(inst(e) for e in sh["etas"])
    if shape_role == "upper":
        e_expr = lin({m: 1})
    else:
        e_expr = lin({m: 1, b: -1})
    return _SideView(t=t, role=role, b=b, bn=bn, m=m, tag=tag, named=named,
                     etas=etas, e_expr=e_expr, ratio=ratio(t))


@dataclass
class _Pieces:
    relations: list[Relation] = field(default_factory=list)
    inequalities: list[Inequality] = field(default_factory=list)
    disequalities: list[Disequality] = field(default_factory=list)


def _side_base(view: _SideView, e_sym: str) -> _Pieces:
    p = _Pieces()
    if view.ratio is not None:
        p.relations.append(
            Relation(lin({view.bn: 1, view.b: -view.ratio}),
                     f"{view.b}:ratio")
        )
    # elliptic multiplicity window: B < M < B'; all three are integers and M
    # is an elliptic count that never sits in the approximation set
    p.inequalities.append(
        Inequality(lin({view.m: 1, view.b: -1, CONST: -1}),
                   label=f"{view.m}>{view.b}")
    )
    p.inequalities.append(
        Inequality(lin({view.bn: 1, view.m: -1, CONST: -1}),
                   label=f"{view.m}<{view.bn}")
    )
    p.relations.append(
        Relation(sub_expr(lin({e_sym: 1}), view.e_expr),
                 f"{view.b}:E-link")
    )
    return p


def _pair_rules(v1: _SideView, v2: _SideView) -> list[list[tuple]]:
    """Coherence branches between the member symbols of two side views.

    Returns a list of branches; each branch is a list of pieces ("rel" or
    "ineq" or "diseq", payload).  Same-set pairs branch on the order of the
    two bases with successor monotonicity; opposite-set pairs forbid member
    coincidences and split the gap-gap coincidence into "distinct" or
    "both equal to 1".
    """
    if v1.tag == v2.tag:
        eq = [
            ("rel", lin({v1.b: 1, v2.b: -1}), "bases-equal"),
            ("rel", lin({v1.bn: 1, v2.bn: -1}), "successors-equal"),
        ]
        lt = [
            ("ineq", lin({v2.b: 1, v1.b: -1, CONST: -1}), f"{v1.b}<{v2.b}"),
            ("ineq", lin({v2.b: 1, v1.bn: -1}), f"{v1.bn}<={v2.b}"),
        ]
        gt = [
            ("ineq", lin({v1.b: 1, v2.b: -1, CONST: -1}), f"{v2.b}<{v1.b}"),
            ("ineq", lin({v1.b: 1, v2.bn: -1}), f"{v2.bn}<={v1.b}"),
        ]
        order_branches = [eq, lt, gt]
        # gaps live in the opposite set; a gap can never equal a member >= 2
        gap_rules = []
        for gap, view in ((v1.gap, v2), (v2.gap, v1)):
            for memb in view.members():
                gap_rules.append(
                    ("diseq", sub_expr(gap, memb), "cross_set")
                )
        return [branch + gap_rules for branch in order_branches]
    # opposite sets: members never coincide (both exceed 1)
    base = [
        ("diseq", sub_expr(m1, m2), "cross_set")
        for m1 in v1.members()
        for m2 in v2.members()
    ]
    # the two gaps lie in opposite sets as well: distinct, or both equal 1
    distinct = base + [("diseq", sub_expr(v1.gap, v2.gap), "cross_set")]
    both_one = base + [
        ("rel", sub_expr(v1.gap, lin({CONST: 1})), "gap1=1"),
        ("rel", sub_expr(v2.gap, lin({CONST: 1})), "gap2=1"),
    ]
    return [distinct, both_one]


def _matching_branches(v1: _SideView, v2: _SideView) -> list[list[tuple]]:
    """Assign every pinned orbit of each view a value slot of the other.

    A pinned orbit of one transition is either one of the other transition's
    pinned orbits (values equal) or one of its eta slots.  At least one orbit
    of the middle set is pinned by neither side (it has more than four
    hyperbolic orbits), so some eta value of view 1 must also be an eta value
    of view 2.
    """
    n1, n2 = v1.named, v2.named
    branches = []
    idx2 = range(len(n2))
    for k in range(0, min(len(n1), len(n2)) + 1):
        for chosen1 in itertools.combinations(range(len(n1)), k):
            for chosen2 in itertools.permutations(idx2, k):
                pieces = [
                    ("rel", sub_expr(n1[i], n2[j]), f"match {i}-{j}")
                    for i, j in zip(chosen1, chosen2)
                ]
                free1 = [i for i in range(len(n1)) if i not in chosen1]
                free2 = [j for j in idx2 if j not in chosen2]
                # an unmatched pinned orbit must occupy an eta slot of the
                # other transition
                eta_opts1 = [
                    [("rel", sub_expr(n1[i], eta), f"named1[{i}]-eta")
                     for eta in v2.etas]
                    for i in free1
                ]
                eta_opts2 = [
                    [("rel", sub_expr(n2[j], eta), f"named2[{j}]-eta")
                     for eta in v1.etas]
                    for j in free2
                ]
                common = [
                    [("rel", sub_expr(o1, o2), "eta-common")]
                    for o1 in v1.etas
                    for o2 in v2.etas
                ]
                for combo in itertools.product(*eta_opts1, *eta_opts2, common):
                    flat = list(pieces)
                    for c in combo:
                        flat.extend(c if isinstance(c, list) else [c])
                    branches.append(flat)
    return branches


def _assemble(symbols: dict, base: list[_Pieces], extra: list[tuple],
              label: str) -> RelationSystem:
    sys = RelationSystem(symbols=dict(symbols), relations=[], label=label)
    for p in base:
        sys.relations.extend(p.relations)
        sys.inequalities.extend(p.inequalities)
        sys.disequalities.extend(p.disequalities)
    for kind, payload, tag in extra:
        if kind == "rel":
            sys.relations.append(Relation(payload, tag))
        elif kind == "ineq":
            sys.inequalities.append(Inequality(payload, label=tag))
        else:
            sys.disequalities.append(Disequality(payload, rule=tag, label=tag))
    return sys


def _middle_symbols(views: list[_SideView], e_syms: list[str]) -> dict:
    symbols: dict[str, Sym] = {}
    for v in views:
        symbols[v.b] = Sym(v.b, MEMBER, set_tag=v.tag, integer=True)
        symbols[v.bn] = Sym(v.bn, SUCCESSOR, base=v.b, set_tag=v.tag, integer=True)
        symbols[v.m] = Sym(v.m, COUNT, integer=True)
    for e in e_syms:
        symbols[e] = Sym(e, COUNT, integer=True)
    return symbols


def _e_floor(e_sym: str) -> Inequality:
    # every good elliptic count exceeds the first nontrivial denominators
    return Inequality(lin({e_sym: 1, CONST: -3}), label=f"{e_sym}>=3")


def joint_scenarios(t1: str, t2: str, full: bool) -> list[RelationSystem]:
    """Scenario systems for a shared middle set of transitions (t1, t2)."""
    v1 = _side_view(t1, 1, "upper")
    v2 = _side_view(t2, 2, "lower")
    symbols = _middle_symbols([v1, v2], ["Ek"])
    base = [_side_base(v1, "Ek"), _side_base(v2, "Ek")]
    base[0].inequalities.append(_e_floor("Ek"))
    pair_branches = _pair_rules(v1, v2)
    match_branches = _matching_branches(v1, v2) if full else [[]]
    out = []
    for i, pb in enumerate(pair_branches):
        for j, mb in enumerate(match_branches):
            out.append(
                _assemble(symbols, base, pb + mb, f"({t1},{t2})#{i}.{j}")
            )
    return out


# aggregation order for the representative certificate of a pair: structural
# rules first, bare arithmetic collapses last
_REPORT_PRIORITY = (
    "cross_set",
    "gap_equals_member",
    "successor_equal",
    "successor_not_greater",
    "member_zero",
    "member_nonpositive",
    "action_zero",
    "action_nonpositive",
    "incompatible_inequalities",
    "forced_disequality",
    "contradictory_equations",
)


def _best_infeasible(verdicts: list[Infeasible]) -> Infeasible:
    def rank(v: Infeasible):
        rule = v.certificate.rule
        try:
            return _REPORT_PRIORITY.index(rule)
        except ValueError:
            return len(_REPORT_PRIORITY)

    return min(verdicts, key=rank)


def compatible(t1: str, t2: str, full: bool | None = None) -> Verdict:
    """Joint verdict for consecutive transitions of types (t1, t2).

    With full=None the probe depth follows the transcription: full value
    matching on the pairs the source analysis excludes, the consistency
    skeleton on the rest.
    """
    if t1 not in TYPES or t2 not in TYPES:
        raise ValueError("unknown transition type")
    if full is None:
        full = (t1, t2) in EXCLUDED_PAIRS
    feasible: Verdict | None = None
    infeasible: list[Infeasible] = []
    for sys in joint_scenarios(t1, t2, full):
        v = solve(sys)
        if v.feasible:
            feasible = v
            break
        infeasible.append(v)
    return feasible if feasible is not None else _best_infeasible(infeasible)


@dataclass
class PairReport:
    verdicts: dict[tuple[str, str], Verdict]

    @property
    def allowed(self) -> list[tuple[str, str]]:
        return [p for p, v in sorted(self.verdicts.items()) if v.feasible]

    @property
    def excluded(self) -> list[tuple[str, str]]:
        return [p for p, v in sorted(self.verdicts.items()) if not v.feasible]

    @property
    def deviations(self) -> list[tuple[str, str]]:
        """Pairs whose computed verdict differs from the transcribed table."""
        out = []
        for p, v in sorted(self.verdicts.items()):
            if v.feasible != (p not in EXCLUDED_PAIRS):
                out.append(p)
        return out

    def mirror_symmetric(self) -> bool:
        return all(
            self.verdicts[(t1, t2)].feasible
            == self.verdicts[(mirror(t2), mirror(t1))].feasible
            for t1 in TYPES
            for t2 in TYPES
        )


def pair_report() -> PairReport:
    return PairReport(
        {(t1, t2): compatible(t1, t2) for t1 in TYPES for t2 in TYPES}
    )


def allowed_pairs() -> list[tuple[str, str]]:
    """The ordered pairs the engine cannot exclude (expected: exactly 12)."""
    return pair_report().allowed


# -- chains of length three ----------------------------------------------------


def _joint_chain_scenarios(t1: str, t2: str, t3: str) -> list[RelationSystem]:
    """Full joint systems over both middle sets of a chain t1 -> t2 -> t3."""
    v1 = _side_view(t1, 1, "upper")
    v2_low = _side_view(t2, 2, "lower")
    v2_up = _side_view(t2, 2, "upper")
    v3 = _side_view(t3, 3, "lower")
    symbols = _middle_symbols([v1, v2_low, v3], ["Ek", "Ek1"])
    base = [
        _side_base(v1, "Ek"),
        _side_base(v2_low, "Ek"),
        _side_base(v3, "Ek1"),
    ]
    # t2 seen from above: same member window, second elliptic count
    up = _Pieces()
    up.relations.append(
        Relation(sub_expr(lin({"Ek1": 1}), v2_up.e_expr), f"{v2_up.b}:E-link-up")
    )
    up.inequalities.append(_e_floor("Ek"))
    up.inequalities.append(_e_floor("Ek1"))
    base.append(up)
    branch_dims = [
        _pair_rules(v1, v2_low),
        _pair_rules(v2_low, v3),
        _pair_rules(v1, v3),
        _matching_branches(v1, v2_low),
        _matching_branches(v2_up, v3),
    ]
    out = []
    for i, parts in enumerate(itertools.product(*branch_dims)):
        extra = [piece for part in parts for piece in part]
        out.append(_assemble(symbols, base, extra, f"({t1},{t2},{t3})#{i}"))
    return out


@dataclass
class ChainRow:
    triple: tuple[str, str, str]
    verdict: Verdict
    decided_by: str  # "middle1" | "middle2" | "joint"


@dataclass
class ChainReport:
    rows: list[ChainRow]
    allowed_pairs: list[tuple[str, str]]

    @property
    def triples(self) -> list[tuple[str, str, str]]:
        return [r.triple for r in self.rows]

    @property
    def feasible_triples(self) -> list[ChainRow]:
        return [r for r in self.rows if r.verdict.feasible]


def chain_check() -> ChainReport:
    """Probe every chain of two engine-allowed pairs at full depth.

    A feasible triple is reported verbatim (it would mean the encoded
    constraints are too coarse to forbid a third consecutive step), never
    suppressed.
    """
    allowed = allowed_pairs()
    starts = {}
    for a, b in allowed:
        starts.setdefault(a, []).append(b)
    rows = []
    for (t1, t2) in allowed:
        for t3 in starts.get(t2, ()):
            verdict: Verdict | None = None
            decided = "joint"
            m1 = compatible(t1, t2, full=True)
            if not m1.feasible:
                verdict, decided = m1, "middle1"
            else:
                m2 = compatible(t2, t3, full=True)
                if not m2.feasible:
                    verdict, decided = m2, "middle2"
            if verdict is None:
                infeasible = []
                for sys in _joint_chain_scenarios(t1, t2, t3):
                    v = solve(sys)
                    if v.feasible:
                        verdict = v
                        break
                    infeasible.append(v)
                if verdict is None:
                    verdict = _best_infeasible(infeasible)
            rows.append(ChainRow((t1, t2, t3), verdict, decided))
    return ChainReport(rows, allowed)
