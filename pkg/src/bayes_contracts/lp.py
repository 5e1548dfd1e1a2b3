"""Exact dense simplex for small linear programs over the rationals.

Minimizes ``objective . x`` subject to linear constraints and ``x >= 0``.
Two-phase method with Bland's rule, so it terminates on degenerate problems
and the returned basic solution is a deterministic function of the input.
Pivoting runs on ``gmpy2.mpq``; inputs and outputs are Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from gmpy2 import mpq

from .model import as_rational

__all__ = ["LinearProgram", "LPSolution", "solve_lp", "GE", "LE", "EQ"]

GE, LE, EQ = ">=", "<=", "="
_RELATIONS = (GE, LE, EQ)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """``min objective . x  s.t.  coeffs . x (rel) rhs``,  ``x >= 0``."""

    objective: tuple
    constraints: tuple = ()

    def __post_init__(self):
        obj = tuple(as_rational(v) for v in self.objective)
        cons = []
        for coeffs, rel, rhs in self.constraints:
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
            coeffs = tuple(as_rational(v) for v in coeffs)
            if len(coeffs) != len(obj):
                raise ValueError(
                    f"constraint has {len(coeffs)} coefficients, expected {len(obj)}"
                )
            cons.append((coeffs, rel, as_rational(rhs)))
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(cons))

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x) -> bool:
        """Exact check of every constraint and of non-negativity."""
        if len(x) != self.num_variables or any(v < 0 for v in x):
            return False
        for coeffs, rel, rhs in self.constraints:
            lhs = sum((a * v for a, v in zip(coeffs, x)), Fraction(0))
            if rel == GE and lhs < rhs or rel == LE and lhs > rhs or rel == EQ and lhs != rhs:
                return False
        return True


@dataclass(frozen=True)
class LPSolution:
    status: str
    point: Optional[tuple] = None
    value: Optional[Fraction] = None


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    def __init__(self, rows, rhs, basis, num_cols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.num_cols = num_cols

    def pivot(self, i, j, obj, obj_val):
        row = self.rows[i]
        piv = row[j]
        if piv != 1:
            inv = 1 / piv
            self.rows[i] = row = [v * inv for v in row]
            self.rhs[i] *= inv
        for k, other in enumerate(self.rows):
            f = other[j]
            if k != i and f != 0:
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
                self.rhs[k] -= f * self.rhs[i]
        f = obj[j]
        if f != 0:
            obj = [a - f * b for a, b in zip(obj, row)]
            obj_val = obj_val - f * self.rhs[i]
        self.basis[i] = j
        return obj, obj_val

    def reduced_costs(self, cost):
        obj = list(cost)
        val = mpq(0)
        for i, j in enumerate(self.basis):
            cb = cost[j]
            if cb != 0:
                obj = [a - cb * b for a, b in zip(obj, self.rows[i])]
                val -= cb * self.rhs[i]
        return obj, val

    def run(self, cost, allowed):
        """Bland-rule primal simplex; returns ``(status, reduced_costs, -value)``."""
        obj, val = self.reduced_costs(cost)
        while True:
            entering = next((j for j in allowed if obj[j] < 0), None)
            if entering is None:
                return OPTIMAL, obj, val
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED, obj, val
            obj, val = self.pivot(best[1], entering, obj, val)


def solve_lp(lp: LinearProgram, lexicographic: bool = False) -> LPSolution:
    """Solve ``lp`` exactly.

    With ``lexicographic=True`` the optimal face is further minimized in
    ``x[0]``, then ``x[1]``, ...; the result is the lexicographically smallest
    optimal point, independent of how ties among optimal vertices fall.
    """
    n = lp.num_variables
    rows, rhs, kinds = [], [], []
    for coeffs, rel, b in lp.constraints:
        coeffs = [mpq(v.numerator, v.denominator) for v in coeffs]
        b = mpq(b.numerator, b.denominator)
        if b < 0:
            coeffs = [-v for v in coeffs]
            b = -b
            rel = {GE: LE, LE: GE, EQ: EQ}[rel]
        rows.append(coeffs)
        rhs.append(b)
        kinds.append(rel)

    # column layout: structural | slack/surplus | artificial
    num_slack = sum(1 for k in kinds if k != EQ)
    num_art = sum(1 for k in kinds if k != LE)
    num_cols = n + num_slack + num_art
    first_art = n + num_slack
    table, basis = [], []
    s_col, a_col = n, first_art
    zero = mpq(0)
    for coeffs, kind in zip(rows, kinds):
        row = coeffs + [zero] * (num_slack + num_art)
        if kind == LE:
            row[s_col] = mpq(1)
            basis.append(s_col)
            s_col += 1
        else:
            if kind == GE:
                row[s_col] = mpq(-1)
                s_col += 1
            row[a_col] = mpq(1)
            basis.append(a_col)
            a_col += 1
        table.append(row)

    tab = _Tableau(table, rhs, basis, num_cols)

    if num_art:
        phase1 = [zero] * first_art + [mpq(1)] * num_art
        _, _, val = tab.run(phase1, range(num_cols))
        if val != 0:
            return LPSolution(INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= first_art:
                j = next((j for j in range(first_art) if tab.rows[i][j] != 0), None)
                if j is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, j, [zero] * num_cols, zero)
            i += 1

    cost = [mpq(v.numerator, v.denominator) for v in lp.objective]
    cost += [zero] * (num_cols - n)
    status, obj, _ = tab.run(cost, range(first_art))
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED)
    if lexicographic:
        # pivots on zero-reduced-cost columns leave earlier objectives unchanged
        allowed = range(first_art)
        for k in range(n):
            allowed = [j for j in allowed if obj[j] == 0]
            unit = [zero] * num_cols
            unit[k] = mpq(1)
            _, obj, _ = tab.run(unit, allowed)

    x = [zero] * n
    for i, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.rhs[i]
    point = tuple(_to_fraction(v) for v in x)
    value = sum((c * v for c, v in zip(lp.objective, point)), Fraction(0))
    if not lp.is_feasible_point(point):
        raise AssertionError("simplex returned an infeasible point")
    return LPSolution(OPTIMAL, point, value)
