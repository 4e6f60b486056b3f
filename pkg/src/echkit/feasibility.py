"""Exact decision engine for systems of approximate linear relations.

Every input relation states |expression| < k*eps for a tolerance multiple k.
All target quantities are separated points of a discrete grid (integer
multiples of a fixed action unit, or small fractions of them), so for every
sufficiently small eps > 0 the relation forces the exact equation
expression = 0.  The engine therefore eliminates exactly over the rationals
and then checks the side constraints the symbols carry:

  * action symbols are strictly positive;
  * an s_member symbol P is a positive integer (> 1 where flagged);
  * its successor P' satisfies P' > P, and when P > 1 the gap P' - P can
    never equal P (gaps belong to the opposite approximation set, and the
    two sets meet only at 1);
  * symbols tagged with opposite approximation sets may only coincide at 1.

An Infeasible verdict carries a certificate: the forced equation, the exact
combination of input relations that produces it (so it can be replayed), and
the accumulated tolerance multiple, from which an explicit eps threshold can
be recovered.  A Feasible verdict expresses every symbol over the free ones
and lists integrality notes such as "3P/2 integral".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linear import (
    CONST,
    Eliminator,
    Ineq,
    LinExpr,
    Row,
    _eval,
    expr_str,
    fm_solve,
    lin,
    scale_expr,
    sub_expr,
)

ACTION = "action"
MEMBER = "s_member"
SUCCESSOR = "s_successor"
COUNT = "count"

_KIND_RANK = {ACTION: 0, COUNT: 1, SUCCESSOR: 2, MEMBER: 3}


@dataclass(frozen=True)
class Sym:
    name: str
    kind: str  # ACTION | MEMBER | SUCCESSOR | COUNT
    set_tag: str | None = None  # "p" / "q": which approximation set a member sits in
    base: str | None = None  # for SUCCESSOR: the member it follows
    greater_than_one: bool = True  # members: strictly above 1
    integer: bool = False  # sharpen strict orderings to gaps of one

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == SUCCESSOR and not self.base:
            raise ValueError("successor symbol needs a base member")


@dataclass(frozen=True)
class Relation:
    """|coeffs . syms| < eps_multiple * eps, read as an exact equation."""

    coeffs: LinExpr
    label: str
    eps_multiple: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("relation needs at least one nonzero coefficient")


@dataclass(frozen=True)
class Inequality:
    coeffs: LinExpr  # coeffs . syms >= 0  (or > 0 when strict)
    strict: bool = False
    label: str = ""


@dataclass(frozen=True)
class Disequality:
    coeffs: LinExpr  # coeffs . syms != 0
    rule: str
    label: str = ""


@dataclass
class RelationSystem:
    symbols: dict[str, Sym]
    relations: list[Relation]
    inequalities: list[Inequality] = field(default_factory=list)
    disequalities: list[Disequality] = field(default_factory=list)
    label: str = ""

    def validate(self):
        known = set(self.symbols) | {CONST}
        for r in self.relations:
            missing = set(r.coeffs) - known
            if missing:
                raise ValueError(f"relation {r.label} uses unknown symbols {missing}")


@dataclass
class Certificate:
    """A forced equation violating a side constraint.

    `equation` lies in the row space of the input relations; `combo` is the
    rational combination that produces it, and `eps_bound` the matching
    tolerance multiple (the derived |equation| < eps_bound * eps).
    """

    rule: str
    equation: LinExpr
    combo: dict
    eps_bound: Fraction | None
    human: str


@dataclass
class Infeasible:
    certificate: Certificate
    feasible: bool = False

    def __str__(self):
        return f"Infeasible[{self.certificate.rule}: {self.certificate.human}]"


@dataclass
class Feasible:
    solution: dict[str, LinExpr]  # pivoted symbol -> expression over free ones
    free: list[str]
    notes: list[str]
    sample: dict | None = None
    feasible: bool = True

    def __str__(self):
        parts = ", ".join(
            f"{s}={expr_str(e)}" for s, e in sorted(self.solution.items())
        )
        return f"Feasible[{parts}]"


Verdict = Infeasible | Feasible

_RULE_PRIORITY = [
    "contradictory_equations",
    "cross_set",
    "member_zero",
    "member_nonpositive",
    "action_zero",
    "action_nonpositive",
    "count_zero",
    "count_nonpositive",
    "gap_equals_member",
    "successor_equal",
    "successor_not_greater",
    "incompatible_inequalities",
    "forced_disequality",
]


def _rule_rank(rule: str) -> int:
    return _RULE_PRIORITY.index(rule) if rule in _RULE_PRIORITY else len(_RULE_PRIORITY)


def _elimination_order(symbols: dict[str, Sym]) -> list[str]:
    return sorted(symbols, key=lambda n: (_KIND_RANK[symbols[n].kind], n))


def _auto_inequalities(system: RelationSystem) -> list[Ineq]:
    out = []
    for name, s in system.symbols.items():
        if s.kind == ACTION:
            out.append(Ineq(lin({name: 1}), strict=True, label=f"{name}>0"))
        elif s.kind == MEMBER:
            if s.greater_than_one and s.integer:
                out.append(Ineq(lin({name: 1, CONST: -2}), label=f"{name}>=2"))
            elif s.greater_than_one:
                out.append(Ineq(lin({name: 1, CONST: -1}), strict=True, label=f"{name}>1"))
            else:
                out.append(Ineq(lin({name: 1}), strict=True, label=f"{name}>0"))
        elif s.kind == SUCCESSOR:
            if s.integer:
                out.append(Ineq(lin({name: 1, s.base: -1, CONST: -1}),
                                label=f"{name}>={s.base}+1"))
            else:
                out.append(Ineq(lin({name: 1, s.base: -1}), strict=True,
                                label=f"{name}>{s.base}"))
        elif s.kind == COUNT:
            if s.integer:
                out.append(Ineq(lin({name: 1, CONST: -1}), label=f"{name}>=1"))
            else:
                out.append(Ineq(lin({name: 1}), strict=True, label=f"{name}>0"))
    for iq in system.inequalities:
        out.append(Ineq(dict(iq.coeffs), iq.strict, iq.label))
    return out


def _auto_disequalities(system: RelationSystem) -> list[Disequality]:
    out = list(system.disequalities)
    for name, s in system.symbols.items():
        if s.kind == SUCCESSOR and system.symbols[s.base].greater_than_one:
            out.append(
                Disequality(
                    lin({name: 1, s.base: -2}),
                    rule="gap_equals_member",
                    label=f"gap({name},{s.base})!={s.base}",
                )
            )
    return out


def _member_facts(system: RelationSystem, elim: Eliminator) -> list[Ineq]:
    """Order facts on members/successors only, reduced by the pivots."""
    facts = []
    for name, s in system.symbols.items():
        if s.kind == MEMBER:
            low = lin({name: 1, CONST: -1}) if s.greater_than_one else lin({name: 1})
            facts.append(Ineq(elim.reduce_expr(low), strict=True))
        elif s.kind == SUCCESSOR:
            facts.append(
                Ineq(elim.reduce_expr(lin({name: 1, s.base: -1})), strict=True)
            )
    return [f for f in facts if f.expr]


def _forced_nonpositive(system, elim, reduced: LinExpr) -> bool:
    """True when reduced > 0 is impossible given member order facts alone."""
    kinds = {system.symbols[s].kind for s in reduced if s != CONST}
    if kinds & {ACTION, COUNT}:
        return False  # a free action/count leaves the sign undetermined
    ineqs = _member_facts(system, elim) + [Ineq(dict(reduced), strict=True)]
    variables = sorted({s for iq in ineqs for s in iq.expr if s != CONST})
    return not fm_solve(ineqs, variables).feasible


def solve(system: RelationSystem) -> Verdict:
    """Decide the eps->0 limit of the system exactly."""
    system.validate()
    order = _elimination_order(system.symbols)
    elim = Eliminator(order)
    for r in system.relations:
        elim.add(dict(r.coeffs), r.label)

    def derived(expr: LinExpr) -> tuple[LinExpr, LinExpr, dict]:
        """Reduce expr; return (reduced, equation-in-rowspace, combo)."""
        row = elim.reduce_row(Row(dict(expr), {}))
        equation = sub_expr(dict(expr), row.expr)
        combo = {k: -v for k, v in row.combo.items()}
        return row.expr, equation, combo

    def cert(rule, equation, combo, human) -> Infeasible:
        eps = sum(
            (abs(c) * next((r.eps_multiple for r in system.relations
                            if r.label == l), Fraction(0))
             for l, c in combo.items()),
            Fraction(0),
        )
        return Infeasible(Certificate(rule, equation, dict(combo), eps, human))

    if elim.inconsistent is not None:
        row = elim.inconsistent
        return Infeasible(
            Certificate(
                "contradictory_equations",
                row.expr,
                dict(row.combo),
                None,
                f"relations force {expr_str(row.expr)} = 0",
            )
        )

    diseqs = _auto_disequalities(system)
    found: list[Infeasible] = []

    for d in diseqs:
        reduced, equation, combo = derived(dict(d.coeffs))
        if not reduced:
            found.append(
                cert(d.rule, equation, combo,
                     f"relations force {expr_str(d.coeffs)} = 0")
            )

    for name in order:
        s = system.symbols[name]
        kind_rule = {ACTION: "action", MEMBER: "member",
                     SUCCESSOR: "member", COUNT: "count"}[s.kind]
        reduced, equation, combo = derived(lin({name: 1}))
        if not reduced:
            found.append(cert(f"{kind_rule}_zero", equation, combo,
                              f"{name} is forced to vanish"))
        elif _forced_nonpositive(system, elim, reduced):
            found.append(cert(f"{kind_rule}_nonpositive", equation, combo,
                              f"{name} = {expr_str(reduced)} cannot be positive"))
        if s.kind == SUCCESSOR:
            reduced, equation, combo = derived(lin({name: 1, s.base: -1}))
            if not reduced:
                found.append(cert("successor_equal", equation, combo,
                                  f"{name} = {s.base} is forced"))
            elif _forced_nonpositive(system, elim, reduced):
                found.append(
                    cert("successor_not_greater", equation, combo,
                         f"{name} - {s.base} = {expr_str(reduced)} "
                         "cannot be positive")
                )
    if found:
        found.sort(key=lambda v: _rule_rank(v.certificate.rule))
        return found[0]

    ineqs = [Ineq(elim.reduce_expr(iq.expr), iq.strict, iq.label)
             for iq in _auto_inequalities(system)]
    variables = [s for s in order if s not in elim.pivots]
    res = fm_solve(ineqs, variables)
    if not res.feasible:
        c = res.contradiction
        human = "side constraints admit no solution"
        if c is not None and c.label:
            human += f" (from {c.label})"
        return Infeasible(
            Certificate("incompatible_inequalities",
                        c.expr if c else {}, {}, None, human)
        )

    reduced_ds = [(d, elim.reduce_expr(dict(d.coeffs))) for d in diseqs]
    sample = res.sample
    if any(e and _eval(e, sample) == 0 for _, e in reduced_ds):
        sample = _avoid_disequalities(
            ineqs, variables, [e for _, e in reduced_ds if e]
        )
        if sample is None:
            d = next(d for d, e in reduced_ds if e and _eval(e, res.sample) == 0)
            return Infeasible(
                Certificate(
                    "forced_disequality", dict(d.coeffs), {}, None,
                    f"{expr_str(d.coeffs)} = 0 on the whole feasible region "
                    f"(rule {d.rule})",
                )
            )

    solution = {s: elim.solution_expr(s) for s in order if s in elim.pivots}
    free = [s for s in order if s not in elim.pivots]
    return Feasible(
        solution=solution,
        free=free,
        notes=_integrality_notes(system, solution),
        sample=sample,
    )


def _avoid_disequalities(ineqs, variables, dis_exprs, depth=0):
    """Sample point satisfying the inequalities and avoiding every hyperplane
    in dis_exprs, branching a violated disequality into its two strict sides."""
    res = fm_solve(ineqs, variables)
    if not res.feasible:
        return None
    sample = res.sample
    for e in dis_exprs:
        if _eval(e, sample) == 0:
            if depth > 10:
                return None
            for sign in (1, -1):
                branched = ineqs + [Ineq(scale_expr(e, sign), strict=True)]
                out = _avoid_disequalities(branched, variables, dis_exprs, depth + 1)
                if out is not None:
                    return out
            return None
    return sample


def _integrality_notes(system: RelationSystem, solution: dict) -> list[str]:
    """Members are integers, so fractional multiples impose divisibility."""
    notes = []
    for name in sorted(solution):
        if system.symbols[name].kind not in (MEMBER, SUCCESSOR):
            continue
        e = solution[name]
        if len(e) != 1:
            continue
        (dep, coeff), = e.items()
        if dep == CONST:
            continue
        dep_spec = system.symbols.get(dep)
        if (dep_spec and dep_spec.kind in (MEMBER, SUCCESSOR)
                and coeff.denominator > 1):
            notes.append(
                f"{name} = {coeff}*{dep} is integral, so "
                f"{coeff.denominator} divides {dep}"
            )
    return notes
