"""Registry of case-analysis fixtures and the runner that re-derives them.

Each fixture bundles a symbol table, base relations that always hold, and
one relation family per degeneration; a case tuple selects one relation from
each family.  The runner solves every case exactly and compares the result
against the expected survivor table (and, where recorded, the expected
solved actions).  A fixture with a `disjunction` family requires, case by
case, that at least one disjunct be consistent for the case to survive.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .feasibility import (
    Disequality,
    Feasible,
    Inequality,
    Relation,
    RelationSystem,
    Sym,
    Verdict,
    solve,
)
from .linear import CONST, LinExpr


def load_registry() -> dict:
    text = resources.files("echkit").joinpath("data/fixtures.json").read_text()
    return json.loads(text)


def fixture_names(registry: dict | None = None) -> list[str]:
    registry = registry or load_registry()
    return sorted(registry["fixtures"])


def _sym(name: str, d: dict) -> Sym:
    return Sym(
        name=name,
        kind=d["kind"],
        set_tag=d.get("set_tag"),
        base=d.get("base"),
        greater_than_one=d.get("greater_than_one", True),
        integer=d.get("integer", True),
    )


def _coeffs(d: dict) -> LinExpr:
    return {k: Fraction(v) for k, v in d.items()}


def _family(fx: dict, name: str) -> dict:
    fams = dict(fx.get("families", {}))
    fams.update(fx.get("extra_families", {}))
    return fams[name]


def build_case_system(
    fx: dict, case: tuple[int, ...], disjunct: int | None = None
) -> RelationSystem:
    """Relation system for one case tuple (1-based indices into each family)."""
    symbols = {n: _sym(n, d) for n, d in fx["symbols"].items()}
    relations = [
        Relation(_coeffs(r["coeffs"]), r["label"], Fraction(r.get("eps", 1)))
        for r in fx.get("base_relations", ())
    ]
    for fam_name, idx in zip(fx["case_families"], case):
        fam = _family(fx, fam_name)
        for r in fam["elements"][idx - 1]:
            relations.append(
                Relation(_coeffs(r["coeffs"]), f"{fam_name}:{r['label']}",
                         Fraction(r.get("eps", 1)))
            )
    if disjunct is not None:
        fam = _family(fx, fx["disjunction"])
        for r in fam["elements"][disjunct - 1]:
            relations.append(
                Relation(_coeffs(r["coeffs"]), f"disjunct:{r['label']}",
                         Fraction(r.get("eps", 1)))
            )
    return RelationSystem(symbols=symbols, relations=relations,
                          label=f"case {case}")


def case_tuples(fx: dict) -> list[tuple[int, ...]]:
    sizes = [len(_family(fx, f)["elements"]) for f in fx["case_families"]]
    return list(itertools.product(*[range(1, n + 1) for n in sizes]))


def case_display(fx: dict, case: tuple[int, ...]) -> str:
    return "(" + ",".join(str(i) for i in case) + ")"


def case_labels(fx: dict, case: tuple[int, ...]) -> str:
    parts = []
    for fam_name, idx in zip(fx["case_families"], case):
        labels = _family(fx, fam_name).get("labels")
        parts.append(labels[idx - 1] if labels else str(idx))
    return "[" + ",".join(parts) + "]"


def solve_case(fx: dict, case: tuple[int, ...]) -> tuple[Verdict, int | None]:
    """Verdict for one case; with a disjunction family the case is feasible
    iff some disjunct is, and the verdict of the first feasible one is kept."""
    if "disjunction" not in fx:
        return solve(build_case_system(fx, case)), None
    n = len(_family(fx, fx["disjunction"])["elements"])
    verdicts = []
    for d in range(1, n + 1):
        v = solve(build_case_system(fx, case, disjunct=d))
        if v.feasible:
            return v, d
        verdicts.append(v)
    return verdicts[0], None


@dataclass
class CaseRow:
    case: tuple[int, ...]
    display: str
    labels: str
    expected_feasible: bool
    verdict: Verdict
    disjunct: int | None
    match: bool
    solution_ok: bool | None  # None when no expected solution is recorded


@dataclass
class FixtureResult:
    name: str
    title: str
    rows: list[CaseRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.match and r.solution_ok is not False for r in self.rows)

    @property
    def survivors(self) -> list[tuple[int, ...]]:
        return [r.case for r in self.rows if r.verdict.feasible]


def _expected_solution_matches(expected: dict, verdict: Feasible) -> bool:
    for sym, coeffs in expected.items():
        want = {k: Fraction(v) for k, v in coeffs.items() if Fraction(v)}
        got = verdict.solution.get(sym)
        if got is None:
            got = {sym: Fraction(1)}  # free symbol stands for itself
        got = {k: v for k, v in got.items() if v}
        if got != want:
            return False
    return True


def run_fixture(name: str, registry: dict | None = None) -> FixtureResult:
    registry = registry or load_registry()
    try:
        fx = registry["fixtures"][name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None
    expected = fx["expected"]
    all_infeasible = expected.get("all_infeasible", False)
    survivors = {tuple(c) for c in expected.get("survivors", ())}
    solutions = expected.get("solutions", {})
    result = FixtureResult(name=name, title=fx.get("title", ""))
    for case in case_tuples(fx):
        verdict, disjunct = solve_case(fx, case)
        want_feasible = (not all_infeasible) and (case in survivors)
        sol_ok = None
        key = ",".join(str(i) for i in case)
        if verdict.feasible and key in solutions:
            sol_ok = _expected_solution_matches(solutions[key], verdict)
        result.rows.append(
            CaseRow(
                case=case,
                display=case_display(fx, case),
                labels=case_labels(fx, case),
                expected_feasible=want_feasible,
                verdict=verdict,
                disjunct=disjunct,
                match=verdict.feasible == want_feasible,
                solution_ok=sol_ok,
            )
        )
    return result


def run_all(registry: dict | None = None) -> dict[str, FixtureResult]:
    registry = registry or load_registry()
    return {name: run_fixture(name, registry) for name in fixture_names(registry)}
