import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from bayes_contracts.lp import EQ, GE, LE, LinearProgram, solve_lp


def test_single_lower_bound():
    sol = solve_lp(LinearProgram([1], [([1], GE, Fraction(1, 2))]))
    assert (sol.status, sol.point, sol.value) == ("optimal", (Fraction(1, 2),), Fraction(1, 2))


def test_infeasible():
    assert solve_lp(LinearProgram([1], [([1], LE, -1)])).status == "infeasible"
    assert solve_lp(LinearProgram([1, 1], [([1, 1], EQ, 1), ([1, 1], GE, 2)])).status == "infeasible"


def test_unbounded():
    sol = solve_lp(LinearProgram([-1, 0], [([1, -1], LE, 1)]))
    assert sol.status == "unbounded" and sol.point is None and sol.value is None


def test_e1_profile_lp():
    # minimize p1 subject to p1 - p0 >= 1/2
    sol = solve_lp(LinearProgram([0, 1], [([-1, 1], GE, Fraction(1, 2))]))
    assert sol.point == (0, Fraction(1, 2)) and sol.value == Fraction(1, 2)


def test_equality_and_redundant_rows():
    lp = LinearProgram([1, 2], [([1, 1], EQ, 1), ([2, 2], EQ, 2), ([1, 0], LE, 1)])
    sol = solve_lp(lp)
    assert sol.point == (1, 0) and sol.value == 1


def test_degenerate_problem_terminates():
    # a classic cycling example for the largest-coefficient rule
    lp = LinearProgram(
        [Fraction(-3, 4), 150, Fraction(-1, 50), 6],
        [
            ([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0),
            ([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0),
            ([0, 0, 1, 0], LE, 1),
        ],
    )
    sol = solve_lp(lp)
    assert sol.status == "optimal" and sol.value == Fraction(-1, 20)


def test_lexicographic_tie_break():
    # every point of x0 + x1 = 1 is optimal; the lexicographic option picks (0, 1)
    lp = LinearProgram([1, 1], [([1, 1], GE, 1)])
    assert solve_lp(lp, lexicographic=True).point == (0, 1)


def test_rejects_malformed():
    with pytest.raises(ValueError):
        LinearProgram([1, 1], [([1], GE, 0)])
    with pytest.raises(ValueError):
        LinearProgram([1], [([1], "!=", 0)])


def vertex_oracle(c, A, b):
    """Minimum of c.x over {A x <= b, 0 <= x <= 1} by solving every square subsystem with sympy."""
    n = len(c)
    rows = [list(r) for r in A] + [[int(i == j) for j in range(n)] for i in range(n)]
    rhs = list(b) + [1] * n
    rows += [[-int(i == j) for j in range(n)] for i in range(n)]
    rhs += [0] * n
    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        M = sympy.Matrix([rows[i] for i in subset])
        if M.det() == 0:
            continue
        x = M.solve(sympy.Matrix([rhs[i] for i in subset]))
        x = [Fraction(int(v.p), int(v.q)) for v in x]
        if all(sum(r[j] * x[j] for j in range(n)) <= h for r, h in zip(rows, rhs)):
            val = sum(ci * xi for ci, xi in zip(c, x))
            best = val if best is None else min(best, val)
    return best


small = st.integers(-3, 3)


@settings(max_examples=40, deadline=None)
@given(
    c=st.lists(small, min_size=2, max_size=3),
    data=st.data(),
)
def test_matches_vertex_oracle(c, data):
    n = len(c)
    A = data.draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=1, max_size=3))
    b = data.draw(st.lists(small, min_size=len(A), max_size=len(A)))
    cons = [(row, LE, h) for row, h in zip(A, b)] + [([int(i == j) for j in range(n)], LE, 1) for i in range(n)]
    lp = LinearProgram(c, cons)
    sol = solve_lp(lp)
    expected = vertex_oracle(c, A, b)
    if expected is None:
        assert sol.status == "infeasible"
    else:
        assert sol.status == "optimal" and sol.value == expected
        assert lp.is_feasible_point(sol.point)
        lex = solve_lp(lp, lexicographic=True)
        assert lex.value == expected and lp.is_feasible_point(lex.point)
        assert lex.point <= sol.point
