"""Exact linear algebra over the rationals with provenance tracking.

Sparse linear expressions are dicts symbol -> Fraction; the key "1" holds the
constant term.  Gaussian elimination keeps, for every derived row, the
rational combination of input rows that produced it, so a contradiction can
be replayed against the original system.  A small Fourier-Motzkin layer
decides strict/nonstrict inequality systems and extracts a rational sample
point on success.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

CONST = "1"

LinExpr = dict  # symbol -> Fraction


def lin(pairs=None, **kw) -> LinExpr:
    out: LinExpr = {}
    items = list(pairs.items()) if pairs else []
    items += list(kw.items())
    for k, v in items:
        v = Fraction(v)
        if v:
            out[k] = out.get(k, Fraction(0)) + v
            if not out[k]:
                del out[k]
    return {k: Fraction(v) for k, v in out.items() if v}


def add_expr(a: LinExpr, b: LinExpr) -> LinExpr:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Fraction(0)) + v
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def scale_expr(a: LinExpr, c) -> LinExpr:
    c = Fraction(c)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def sub_expr(a: LinExpr, b: LinExpr) -> LinExpr:
    return add_expr(a, scale_expr(b, -1))


def expr_is_zero(a: LinExpr) -> bool:
    return not a


def expr_str(a: LinExpr) -> str:
    if not a:
        return "0"
    parts = []
    for k in sorted(a, key=lambda s: (s == CONST, s)):
        v = a[k]
        term = str(v) if k == CONST else (f"{v}*{k}" if abs(v) != 1 else ("-" + k if v < 0 else k))
        if parts and not term.startswith("-"):
            parts.append("+" + term)
        else:
            parts.append(term)
    return "".join(parts)


@dataclass
class Row:
    """A linear equation expr = 0 together with its provenance combination."""

    expr: LinExpr
    combo: dict = field(default_factory=dict)  # input label -> multiplier

    def scaled(self, c) -> "Row":
        return Row(scale_expr(self.expr, c), {k: v * c for k, v in self.combo.items()})

    def minus(self, other: "Row", c) -> "Row":
        combo = dict(self.combo)
        for k, v in other.combo.items():
            s = combo.get(k, Fraction(0)) - v * c
            if s:
                combo[k] = s
            elif k in combo:
                del combo[k]
        return Row(sub_expr(self.expr, scale_expr(other.expr, c)), combo)


class Eliminator:
    """Reduced row echelon over an ordered symbol list."""

    def __init__(self, order: list[str]):
        self.order = list(order)
        self.rank = {s: i for i, s in enumerate(order)}
        self.pivots: dict[str, Row] = {}
        self.inconsistent: Row | None = None

    def reduce_row(self, row: Row) -> Row:
        changed = True
        while changed:
            changed = False
            for sym in list(row.expr):
                if sym in self.pivots:
                    row = row.minus(self.pivots[sym], row.expr[sym])
                    changed = True
                    break
        return row

    def reduce_expr(self, e: LinExpr) -> LinExpr:
        return self.reduce_row(Row(dict(e), {})).expr

    def add(self, expr: LinExpr, label: str):
        row = self.reduce_row(Row(dict(expr), {label: Fraction(1)}))
        syms = [s for s in row.expr if s != CONST]
        if not syms:
            if row.expr:  # 0 = nonzero constant
                if self.inconsistent is None:
                    self.inconsistent = row
            return
        pivot = min(syms, key=lambda s: self.rank.get(s, len(self.order)))
        row = row.scaled(Fraction(1) / row.expr[pivot])
        # keep earlier pivots fully reduced
        for p, prow in list(self.pivots.items()):
            if pivot in prow.expr:
                self.pivots[p] = prow.minus(row, prow.expr[pivot])
        self.pivots[pivot] = row

    def solution_expr(self, sym: str) -> LinExpr:
        """sym rewritten over the free symbols (and the constant)."""
        if sym in self.pivots:
            row = self.pivots[sym]
            return scale_expr(sub_expr(row.expr, {sym: Fraction(1)}), -1)
        return {sym: Fraction(1)}

    def free_symbols(self, symbols) -> list[str]:
        return [s for s in symbols if s not in self.pivots]


# -- Fourier-Motzkin ---------------------------------------------------------


@dataclass
class Ineq:
    """expr >= 0, or expr > 0 when strict."""

    expr: LinExpr
    strict: bool = False
    label: str = ""

    def key(self):
        if not self.expr:
            return (self.strict,)
        norm = max(abs(v) for v in self.expr.values())
        return (self.strict, tuple(sorted((k, v / norm) for k, v in self.expr.items())))


def _eval(e: LinExpr, sample: dict) -> Fraction:
    total = Fraction(0)
    for k, v in e.items():
        total += v * (Fraction(1) if k == CONST else sample[k])
    return total


class FMResult:
    def __init__(self, feasible: bool, sample=None, contradiction: Ineq | None = None):
        self.feasible = feasible
        self.sample = sample
        self.contradiction = contradiction


def fm_solve(ineqs: list[Ineq], variables: list[str]) -> FMResult:
    """Decide a conjunction of rational linear inequalities exactly.

    On success returns a rational sample point for `variables`.
    """
    allowed = set(variables) | {CONST}
    for iq in ineqs:
        extra = set(iq.expr) - allowed
        if extra:
            raise ValueError(f"inequality mentions uneliminated symbols {extra}")
    rows = []
    seen = set()
    for iq in ineqs:
        k = iq.key()
        if k not in seen:
            seen.add(k)
            rows.append(iq)
    stack = []  # (var, lowers, uppers) for back-substitution
    current = rows
    for var in variables:
        lowers, uppers, rest = [], [], []
        for iq in current:
            c = iq.expr.get(var)
            if not c:
                rest.append(iq)
            elif c > 0:
                lowers.append(iq)
            else:
                uppers.append(iq)
        stack.append((var, lowers, uppers))
        new_rows = rest
        seen = {iq.key() for iq in new_rows}
        for lo in lowers:
            for up in uppers:
                cl = lo.expr[var]
                cu = -up.expr[var]
                combined = add_expr(
                    scale_expr({k: v for k, v in lo.expr.items() if k != var}, cu),
                    scale_expr({k: v for k, v in up.expr.items() if k != var}, cl),
                )
                iq = Ineq(combined, lo.strict or up.strict,
                          f"{lo.label}&{up.label}")
                k = iq.key()
                if k not in seen:
                    seen.add(k)
                    new_rows.append(iq)
        current = new_rows
    # everything left is constant
    for iq in current:
        val = iq.expr.get(CONST, Fraction(0))
        if val < 0 or (iq.strict and val == 0):
            return FMResult(False, contradiction=iq)
    # back-substitute a sample
    sample: dict = {}
    for var, lowers, uppers in reversed(stack):
        lo_val = lo_strict = None
        for iq in lowers:
            rest = {k: v for k, v in iq.expr.items() if k != var}
            bound = -_eval(rest, sample) / iq.expr[var]
            if lo_val is None or bound > lo_val or (bound == lo_val and iq.strict):
                lo_val, lo_strict = bound, iq.strict
        up_val = up_strict = None
        for iq in uppers:
            rest = {k: v for k, v in iq.expr.items() if k != var}
            bound = -_eval(rest, sample) / iq.expr[var]
            if up_val is None or bound < up_val or (bound == up_val and iq.strict):
                up_val, up_strict = bound, iq.strict
        if lo_val is None and up_val is None:
            sample[var] = Fraction(0)
        elif up_val is None:
            sample[var] = lo_val + 1
        elif lo_val is None:
            sample[var] = up_val - 1
        elif lo_val == up_val:
            sample[var] = lo_val
        else:
            sample[var] = (lo_val + up_val) / 2
    return FMResult(True, sample=sample)
