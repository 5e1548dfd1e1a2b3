"""Agent best responses, induced action profiles and principal utility."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InvalidInstanceError
from .model import Contract, Instance, ValidationReport, Violation, _payments, dot

__all__ = [
    "ActionProfile",
    "SolveResult",
    "best_response",
    "induced_profile",
    "overall_utility",
    "ic_slacks",
    "make_result",
    "evaluate_many",
    "evaluate_scaled",
]


@dataclass(frozen=True)
class ActionProfile:
    """One implemented action per agent type."""

    choice: tuple

    def __post_init__(self):
        object.__setattr__(self, "choice", tuple(int(a) for a in self.choice))

    def __len__(self):
        return len(self.choice)

    def __iter__(self):
        return iter(self.choice)

    def __getitem__(self, index):
        return self.choice[index]


@dataclass(frozen=True)
class SolveResult:
    """A contract with the profile it induces and a certificate of IC.

    ``ic_slacks[t][a]`` is the agent-utility advantage of the chosen action of
    type ``t`` over action ``a``; all entries are non-negative.
    """

    contract: Contract
    profile: ActionProfile
    utility: Fraction
    ic_slacks: tuple

    def check(self, inst: Instance) -> bool:
        """Recompute everything from the contract and compare."""
        return (
            induced_profile(inst, self.contract) == self.profile
            and overall_utility(inst, self.contract) == self.utility
            and ic_slacks(inst, self.contract, self.profile) == self.ic_slacks
            and all(s >= 0 for row in self.ic_slacks for s in row)
        )


def _require_zero_cost_action(inst: Instance) -> None:
    if not inst.zero_cost_actions:
        raise InvalidInstanceError(
            ValidationReport((Violation("assumption-1"),)),
            "instance has no action with zero cost for every type",
        )


def _check_type(inst: Instance, theta: int) -> None:
    if not 0 <= theta < inst.num_types:
        raise IndexError(f"type index {theta} out of range [0, {inst.num_types})")


def best_response(inst: Instance, contract, theta: int) -> int:
    """Action chosen by type ``theta`` under ``contract``.

    Maximizes agent utility; ties go to the action the principal prefers and
    then to the smallest index.
    """
    _require_zero_cost_action(inst)
    _check_type(inst, theta)
    p = _payments(inst, contract)
    best = None
    best_key = None
    for a, dist in enumerate(inst.F[theta]):
        pay = dot(dist, p)
        key = (pay - inst.c[theta][a], inst.rewards[theta][a] - pay)
        if best_key is None or key > best_key:
            best, best_key = a, key
    return best


def induced_profile(inst: Instance, contract) -> ActionProfile:
    return ActionProfile(best_response(inst, contract, t) for t in range(inst.num_types))


def overall_utility(inst: Instance, contract) -> Fraction:
    """Principal's expected utility, averaged over types by ``mu``."""
    p = _payments(inst, contract)
    total = Fraction(0)
    for t, a in enumerate(induced_profile(inst, contract)):
        total += inst.mu[t] * (inst.rewards[t][a] - dot(inst.F[t][a], p))
    return total


def ic_slacks(inst: Instance, contract, profile: ActionProfile) -> tuple:
    p = _payments(inst, contract)
    out = []
    for t, chosen in enumerate(profile):
        utils = [dot(dist, p) - inst.c[t][a] for a, dist in enumerate(inst.F[t])]
        out.append(tuple(utils[chosen] - u for u in utils))
    return tuple(out)


def make_result(inst: Instance, contract) -> SolveResult:
    contract = contract if isinstance(contract, Contract) else Contract(contract)
    profile = induced_profile(inst, contract)
    return SolveResult(
        contract=contract,
        profile=profile,
        utility=overall_utility(inst, contract),
        ic_slacks=ic_slacks(inst, contract, profile),
    )


def _lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for x in values:
        out = math.lcm(out, x.denominator)
    return out


def _scaled(values, scale: int) -> list:
    return [int(x * scale) for x in values]


_INT64_SAFE = 2**62


class _BatchEvaluator:
    """Integer-scaled, vectorized evaluation of many contracts at once.

    All instance and payment data are multiplied by common denominators so
    that comparisons and sums are exact integer operations; numpy ``int64``
    is used when a magnitude bound allows it, Python ints otherwise.
    """

    def __init__(self, inst: Instance, payment_den: int, max_payment_num: int):
        ell, n, m = inst.shape
        flat_F = [f for rows in inst.F for dist in rows for f in dist]
        dF = _lcm_of_denominators(flat_F)
        dc = _lcm_of_denominators(x for row in inst.c for x in row)
        dr = _lcm_of_denominators(inst.r)
        dmu = _lcm_of_denominators(inst.mu)
        dp = payment_den

        F_int = _scaled(flat_F, dF)
        r_int = _scaled(inst.r, dr)
        c_int = _scaled([x for row in inst.c for x in row], dc)
        mu_int = _scaled(inst.mu, dmu)

        # agent utility scaled by lu, principal utility scaled by lv
        lu = math.lcm(dF * dp, dc)
        su_pay, su_cost = lu // (dF * dp), lu // dc
        lv = dF * math.lcm(dr, dp)
        sv_rew, sv_pay = lv // (dF * dr), lv // (dF * dp)
        self.denominator = dmu * lv

        F_rows = [F_int[i * m:(i + 1) * m] for i in range(ell * n)]
        rew = [sum(f * x for f, x in zip(row, r_int)) for row in F_rows]

        fmax = max((abs(x) for x in F_int), default=0)
        pay_bound = m * fmax * max_payment_num
        u_bound = pay_bound * su_pay + max(c_int, default=0) * su_cost
        v_bound = max(rew, default=0) * sv_rew + pay_bound * sv_pay
        total_bound = ell * max(mu_int, default=0) * v_bound
        dtype = np.int64 if max(u_bound, total_bound) < _INT64_SAFE else object

        self.shape = (ell, n, m)
        self.dtype = dtype
        self.F = np.array(F_rows, dtype=dtype).reshape(ell * n, m)
        self.cost_term = np.array(c_int, dtype=dtype).reshape(ell, n) * su_cost
        self.rew_term = np.array(rew, dtype=dtype).reshape(ell, n) * sv_rew
        self.su_pay = su_pay
        self.sv_pay = sv_pay
        self.mu = np.array(mu_int, dtype=dtype)

    def numerators(self, P: np.ndarray) -> np.ndarray:
        ell, n, _ = self.shape
        pay = (P @ self.F.T).reshape(len(P), ell, n)
        U = pay * self.su_pay - self.cost_term
        V = self.rew_term - pay * self.sv_pay
        best_u = U.max(axis=2, keepdims=True)
        floor = V.min() - 1 if V.size else 0
        masked = np.where(U == best_u, V, floor)
        chosen = masked.argmax(axis=2)
        picked = np.take_along_axis(V, chosen[..., None], axis=2)[..., 0]
        return picked @ self.mu


def evaluate_scaled(inst: Instance, payments, denominator: int, chunk: int = 4096) -> tuple:
    """Vectorized utilities of integer payment rows ``payments / denominator``.

    Returns ``(numerators, common_denominator)`` where ``numerators`` is a
    numpy array aligned with the rows of ``payments``.
    """
    _require_zero_cost_action(inst)
    payments = np.asarray(payments, dtype=object).reshape(-1, inst.num_outcomes)
    pmax = int(max(payments.max(initial=0), -payments.min(initial=0)))
    ev = _BatchEvaluator(inst, int(denominator), pmax)
    payments = payments.astype(ev.dtype)
    parts = [ev.numerators(payments[s:s + chunk]) for s in range(0, len(payments), chunk)]
    nums = np.concatenate(parts) if parts else np.zeros(0, dtype=ev.dtype)
    return nums, ev.denominator


def evaluate_many(inst: Instance, contracts: Sequence) -> list:
    """Exact overall utility of every contract in ``contracts``.

    Equivalent to ``[overall_utility(inst, c) for c in contracts]`` but
    vectorized.  Accepts Contracts or payment sequences.
    """
    _require_zero_cost_action(inst)
    rows = [_payments(inst, c) for c in contracts]
    if not rows:
        return []
    dp = _lcm_of_denominators(x for row in rows for x in row)
    nums, den = evaluate_scaled(inst, [_scaled(row, dp) for row in rows], dp)
    return [Fraction(int(x), den) for x in nums]
