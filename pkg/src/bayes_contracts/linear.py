"""Linear contracts: exact breakpoint sweep and the dyadic bi-approximation grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .agent import overall_utility
from .model import Contract, Instance, as_rational

__all__ = [
    "LinearContract",
    "LinearSweepResult",
    "to_contract",
    "indifference_alpha",
    "breakpoints",
    "optimize_linear",
    "grid_contracts",
    "best_grid_contract",
    "grid_additive_loss",
]


@dataclass(frozen=True, order=True)
class LinearContract:
    """Pay the fraction ``alpha`` of every outcome's reward."""

    alpha: Fraction

    def __post_init__(self):
        alpha = as_rational(self.alpha)
        if not 0 <= alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class LinearSweepResult:
    best_alpha: Fraction
    utility: Fraction
    candidates: tuple  # (alpha, utility) pairs, strictly increasing in alpha


def to_contract(lc, inst: Instance) -> Contract:
    alpha = lc.alpha if isinstance(lc, LinearContract) else LinearContract(lc).alpha
    return Contract(tuple(alpha * r for r in inst.r))


def indifference_alpha(inst: Instance, theta: int, a: int, a2: int) -> Optional[Fraction]:
    """The ``alpha`` in [0, 1] at which type ``theta`` is indifferent between
    ``a`` and ``a2`` under the linear contract, or ``None`` if there is none."""
    if a == a2:
        raise ValueError("indifference_alpha needs two distinct actions")
    R = inst.rewards[theta]
    dr = R[a] - R[a2]
    if dr == 0:
        return None
    alpha = (inst.c[theta][a] - inst.c[theta][a2]) / dr
    return alpha if 0 <= alpha <= 1 else None


def breakpoints(inst: Instance) -> list:
    points = {Fraction(0), Fraction(1)}
    n = inst.num_actions
    for t in range(inst.num_types):
        for a in range(n):
            for a2 in range(a + 1, n):
                alpha = indifference_alpha(inst, t, a, a2)
                if alpha is not None:
                    points.add(alpha)
    return sorted(points)


def optimize_linear(inst: Instance) -> LinearSweepResult:
    """Best linear contract, found exactly by sweeping the breakpoints.

    Between consecutive breakpoints every type's best response is fixed and
    the principal's utility decreases in ``alpha``; principal-favourable tie
    breaking at the left breakpoint makes that value the supremum.
    """
    candidates = tuple(
        (alpha, overall_utility(inst, to_contract(LinearContract(alpha), inst)))
        for alpha in breakpoints(inst)
    )
    best_alpha, best = candidates[0]
    for alpha, u in candidates[1:]:
        if u > best:
            best_alpha, best = alpha, u
    return LinearSweepResult(best_alpha=best_alpha, utility=best, candidates=candidates)


def _grid_size(rho: Fraction) -> int:
    return math.floor(rho / 2)


def grid_contracts(rho) -> list:
    """Linear contracts ``1 - 2**-i`` for ``i = 1 .. floor(rho / 2)``."""
    rho = as_rational(rho)
    if rho < 2:
        raise ValueError(f"grid_contracts needs rho >= 2, got {rho}")
    return [LinearContract(1 - Fraction(1, 2**i)) for i in range(1, _grid_size(rho) + 1)]


def grid_additive_loss(rho) -> Fraction:
    """Dyadic majorant ``2 * 2**-floor(rho/2)`` of the additive loss ``2**(1 - rho/2)``.

    For ``rho`` in [1, 2) the loss of the fallback contract ``alpha = 1/2`` is 1/2.
    """
    rho = as_rational(rho)
    if rho < 1:
        raise ValueError(f"rho must be >= 1, got {rho}")
    if rho < 2:
        return Fraction(1, 2)
    return Fraction(2, 2 ** _grid_size(rho))


def best_grid_contract(inst: Instance, rho) -> tuple:
    """Best contract of the dyadic grid for ``rho``; returns ``(contract, utility)``.

    Guarantees ``utility >= OPT / rho - grid_additive_loss(rho)``.
    """
    rho = as_rational(rho)
    if rho < 1:
        raise ValueError(f"rho must be >= 1, got {rho}")
    grid = [LinearContract(Fraction(1, 2))] if rho < 2 else grid_contracts(rho)
    best, best_u = None, None
    for lc in grid:
        u = overall_utility(inst, to_contract(lc, inst))
        if best_u is None or u > best_u:
            best, best_u = lc, u
    return best, best_u
