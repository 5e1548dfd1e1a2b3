"""Exact optimal contracts.

Two independent exact algorithms are provided:

* :func:`solve_by_type_enumeration` solves the minimum-payment LP for every
  action profile (polynomial for a constant number of types);
* :func:`solve_by_outcome_enumeration` evaluates every vertex of the
  arrangement of IC-boundary and non-negativity hyperplanes (polynomial for a
  constant number of outcomes).

:func:`brute_force_grid` is a lower-bound oracle used to cross-check both.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .agent import (
    SolveResult,
    evaluate_many,
    evaluate_scaled,
    make_result,
    overall_utility,
)
from .exceptions import EnumerationCapExceeded, InvalidInstanceError
from .lp import GE, OPTIMAL, LinearProgram, solve_lp
from .model import Contract, Instance, validate_instance

__all__ = [
    "DEFAULT_CAP",
    "Hyperplane",
    "min_payment_lp",
    "min_payment_program",
    "solve_by_type_enumeration",
    "hyperplanes",
    "enumerate_candidate_vertices",
    "solve_by_outcome_enumeration",
    "brute_force_grid",
    "type_enumeration_size",
    "outcome_enumeration_size",
]

DEFAULT_CAP = 10**7
DEFAULT_GRID_BUDGET = 10**6


def _check_valid(inst: Instance) -> None:
    report = validate_instance(inst)
    if not report.ok:
        raise InvalidInstanceError(report)


def _better(cand, incumbent) -> bool:
    """Higher utility wins; equal utilities go to the lexicographically smaller contract."""
    if incumbent is None:
        return True
    return cand[0] > incumbent[0] or (cand[0] == incumbent[0] and cand[1] < incumbent[1])


def _reduce(items):
    best = None
    for item in items:
        if item is not None and _better(item, best):
            best = item
    return best


def _chunks(total: int, n_jobs: int):
    size = max(1, -(-total // (4 * n_jobs)))
    return [(s, min(total, s + size)) for s in range(0, total, size)]


def _run_chunks(worker, total, n_jobs, *args):
    if n_jobs in (None, 1) or total < 2:
        return worker(0, total, *args)
    parts = Parallel(n_jobs=n_jobs)(
        delayed(worker)(s, e, *args) for s, e in _chunks(total, n_jobs)
    )
    return _reduce(parts)


# -- minimum-payment LP -----------------------------------------------------


def min_payment_program(inst: Instance, profile) -> LinearProgram:
    """LP whose optimum is the cheapest contract implementing ``profile``.

    IC is imposed as a weak inequality against every other action of every
    type; IR follows from the zero-cost action.
    """
    choice = tuple(profile)
    if len(choice) != inst.num_types:
        raise ValueError(f"profile has length {len(choice)}, expected {inst.num_types}")
    if any(not 0 <= a < inst.num_actions for a in choice):
        raise ValueError(f"profile {choice} has an action outside [0, {inst.num_actions})")
    m = inst.num_outcomes
    objective = [Fraction(0)] * m
    constraints = []
    for t, at in enumerate(choice):
        target = inst.F[t][at]
        for w in range(m):
            objective[w] += inst.mu[t] * target[w]
        for a in range(inst.num_actions):
            if a == at:
                continue
            coeffs = tuple(x - y for x, y in zip(target, inst.F[t][a]))
            constraints.append((coeffs, GE, inst.c[t][at] - inst.c[t][a]))
    return LinearProgram(tuple(objective), tuple(constraints))


def min_payment_lp(inst: Instance, profile) -> Optional[tuple]:
    """``(contract, expected payment)`` of the cheapest contract implementing
    ``profile`` (ties in IC allowed), or ``None`` when no contract does.

    Among cheapest contracts the lexicographically smallest is returned.
    """
    sol = solve_lp(min_payment_program(inst, profile), lexicographic=True)
    if sol.status != OPTIMAL:
        return None
    return Contract(sol.point), sol.value


# -- enumeration over action profiles ---------------------------------------


def type_enumeration_size(inst: Instance) -> int:
    return inst.num_actions ** inst.num_types


def _profiles_worker(start, stop, inst):
    seen = {}
    best = None
    profiles = itertools.product(range(inst.num_actions), repeat=inst.num_types)
    for profile in itertools.islice(profiles, start, stop):
        found = min_payment_lp(inst, profile)
        if found is None:
            continue
        key = found[0].p
        if key not in seen:
            seen[key] = overall_utility(inst, found[0])
            cand = (seen[key], key)
            if _better(cand, best):
                best = cand
    return best


def solve_by_type_enumeration(
    inst: Instance, tuple_cap: int = DEFAULT_CAP, n_jobs: Optional[int] = None
) -> SolveResult:
    """Optimal contract via one minimum-payment LP per action profile.

    Each LP optimum is re-evaluated under the agent's real (tie-broken) best
    responses, which can only improve on the profile it was solved for.
    """
    _check_valid(inst)
    total = type_enumeration_size(inst)
    if total > tuple_cap:
        raise EnumerationCapExceeded("type enumeration", total, tuple_cap)
    best = _run_chunks(_profiles_worker, total, n_jobs, inst)
    return make_result(inst, Contract(best[1]))


# -- enumeration over hyperplane-arrangement vertices -----------------------


def _canonical(values) -> tuple:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{p : normal . p = offset}`` in canonical integer form."""

    normal: tuple
    offset: Fraction

    @classmethod
    def from_equation(cls, normal, offset) -> "Hyperplane":
        normal = tuple(Fraction(x) for x in normal)
        if not any(normal):
            raise ValueError("hyperplane normal must be nonzero")
        key = _canonical(normal + (Fraction(offset),))
        return cls(tuple(Fraction(x) for x in key[:-1]), Fraction(key[-1]))


def hyperplanes(inst: Instance) -> list:
    """Non-negativity facets, then every pairwise IC boundary, deduplicated."""
    m = inst.num_outcomes
    out, seen = [], set()

    def add(normal, offset):
        h = Hyperplane.from_equation(normal, offset)
        if h not in seen:
            seen.add(h)
            out.append(h)

    for w in range(m):
        add([1 if k == w else 0 for k in range(m)], 0)
    for t in range(inst.num_types):
        rows = inst.F[t]
        for a in range(inst.num_actions):
            for a2 in range(a + 1, inst.num_actions):
                normal = [x - y for x, y in zip(rows[a], rows[a2])]
                if any(normal):
                    add(normal, inst.c[t][a] - inst.c[t][a2])
    return out


def outcome_enumeration_size(inst: Instance) -> int:
    return math.comb(len(hyperplanes(inst)), inst.num_outcomes)


def _solve_integer_system(A, b):
    """Solve a square integer system by fraction-free elimination; None if singular."""
    m = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    prev = 1
    for k in range(m):
        piv = next((i for i in range(k, m) if M[i][k] != 0), None)
        if piv is None:
            return None
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        mk = M[k]
        for i in range(k + 1, m):
            mi = M[i]
            f = mi[k]
            for j in range(k + 1, m + 1):
                mi[j] = (mi[j] * mk[k] - f * mk[j]) // prev
            mi[k] = 0
        prev = mk[k]
    x = [Fraction(0)] * m
    for i in range(m - 1, -1, -1):
        s = Fraction(M[i][m]) - sum(M[i][j] * x[j] for j in range(i + 1, m))
        x[i] = s / M[i][i]
    return x


def _vertices_worker(start, stop, planes, m):
    A = [tuple(int(x) for x in h.normal) for h in planes]
    b = [int(h.offset) for h in planes]
    found = set()
    for subset in itertools.islice(itertools.combinations(range(len(planes)), m), start, stop):
        x = _solve_integer_system([A[i] for i in subset], [b[i] for i in subset])
        if x is not None and all(v >= 0 for v in x):
            found.add(tuple(x))
    return found


def enumerate_candidate_vertices(
    inst: Instance, subset_cap: int = DEFAULT_CAP, n_jobs: Optional[int] = None
) -> list:
    """Every non-negative point cut out by ``m`` of the arrangement's hyperplanes.

    Always contains the zero contract and an optimal contract.  Returned in
    lexicographic order.
    """
    _check_valid(inst)
    planes = hyperplanes(inst)
    m = inst.num_outcomes
    total = math.comb(len(planes), m)
    if total > subset_cap:
        raise EnumerationCapExceeded("outcome enumeration", total, subset_cap)
    if n_jobs in (None, 1) or total < 2:
        points = _vertices_worker(0, total, planes, m)
    else:
        parts = Parallel(n_jobs=n_jobs)(
            delayed(_vertices_worker)(s, e, planes, m) for s, e in _chunks(total, n_jobs)
        )
        points = set().union(*parts)
    points.add((Fraction(0),) * m)
    return [Contract(p) for p in sorted(points)]


def _argmax_contract(inst: Instance, contracts) -> tuple:
    utilities = evaluate_many(inst, contracts)
    best = None
    for c, u in zip(contracts, utilities):
        if _better((u, c.p), best):
            best = (u, c.p)
    return best


def solve_by_outcome_enumeration(
    inst: Instance, subset_cap: int = DEFAULT_CAP, n_jobs: Optional[int] = None
) -> SolveResult:
    """Optimal contract as the best vertex of the hyperplane arrangement."""
    candidates = enumerate_candidate_vertices(inst, subset_cap, n_jobs)
    utility, p = _argmax_contract(inst, candidates)
    result = make_result(inst, Contract(p))
    if result.utility != utility:
        raise AssertionError("batch and scalar evaluation disagree")
    return result


# -- grid oracle --------------------------------------------------------------


def brute_force_grid(
    inst: Instance, resolution: int, budget: int = DEFAULT_GRID_BUDGET
) -> tuple:
    """Best contract on the grid ``{0, 1/resolution, ..., 1}**m``.

    Returns ``(contract, utility)``; ``utility`` is a lower bound on OPT.
    Ties go to the lexicographically smallest grid point.
    """
    _check_valid(inst)
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    m = inst.num_outcomes
    total = (resolution + 1) ** m
    if total > budget:
        raise EnumerationCapExceeded("grid search", total, budget)
    # rows of np.indices in C order are the grid in lexicographic order
    grid = np.indices((resolution + 1,) * m).reshape(m, -1).T
    nums, den = evaluate_scaled(inst, grid, resolution)
    k = int(np.argmax(nums))
    contract = Contract(tuple(Fraction(int(x), resolution) for x in grid[k]))
    return contract, Fraction(int(nums[k]), den)
