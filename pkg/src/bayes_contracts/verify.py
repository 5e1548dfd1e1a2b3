"""Regenerate an instance family and check its stated inequalities exactly."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .agent import make_result
from .exact import solve_by_outcome_enumeration, solve_by_type_enumeration
from .estimators import OptimalContract
from .generators import (
    Graph,
    LabelCoverInstance,
    Labeling,
    bi_approx_gamma,
    completeness_contract_independent_set,
    completeness_contract_label_cover,
    gen_bi_approx_gap,
    gen_from_graph,
    gen_from_label_cover,
    gen_linear_gap,
    greedy_maximal_independent_set,
    label_cover_gamma,
    label_cover_satisfying_action,
)
from .io import format_decimal
from .linear import best_grid_contract, grid_additive_loss, optimize_linear
from .model import Instance, agent_utility, as_rational

__all__ = [
    "Check",
    "Verification",
    "builtin_label_cover",
    "find_labeling",
    "verify_linear_gap",
    "verify_bi_approx_gap",
    "verify_is_complete",
    "verify_lc_complete",
    "verify_bi_approx",
]

_RELATIONS = {
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
}


@dataclass(frozen=True)
class Check:
    """``lhs (relation) rhs`` between exact rationals."""

    name: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    def render(self) -> str:
        status = "ok" if self.holds else "VIOLATED"
        return (
            f"{self.name}: {self.lhs} {self.relation} {self.rhs}"
            f"  [{format_decimal(self.lhs)} {self.relation} {format_decimal(self.rhs)}]"
            f"  {status}"
        )


@dataclass
class Verification:
    family: str
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def render(self) -> str:
        lines = [f"family: {self.family}"]
        lines += [f"  {c.render()}" for c in self.checks]
        lines += [f"  note: {n}" for n in self.notes]
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _two(k: int) -> Fraction:
    return Fraction(2) ** k


def verify_linear_gap(ell: int, n_jobs: Optional[int] = None) -> Verification:
    inst = gen_linear_gap(ell)
    N = sum(_two(2 * (k - ell)) for k in range(1, ell + 1))
    opt = solve_by_type_enumeration(inst, n_jobs=n_jobs).utility
    lin = optimize_linear(inst).utility
    v = Verification("thm1")
    v.checks.append(Check("OPT >= ell 2^(-2 ell)/N", opt, ">=", ell * _two(-2 * ell) / N))
    v.checks.append(Check("linear <= 2 * 2^(-2 ell)/N", lin, "<=", 2 * _two(-2 * ell) / N))
    v.checks.append(Check("OPT >= (ell/2) linear", opt, ">=", Fraction(ell, 2) * lin))
    v.notes.append(f"ell = {ell}, N = {N}")
    return v


def verify_bi_approx_gap(rho, n_jobs: Optional[int] = None) -> Verification:
    rho = as_rational(rho)
    inst = gen_bi_approx_gap(rho)
    g = bi_approx_gamma(rho)
    by_types = solve_by_type_enumeration(inst, n_jobs=n_jobs).utility
    by_outcomes = solve_by_outcome_enumeration(inst, n_jobs=n_jobs).utility
    lin = optimize_linear(inst).utility
    v = Verification("thm4")
    v.checks.append(Check("OPT (types) == OPT (outcomes)", by_types, "==", by_outcomes))
    lower = (g + 1) * _two(-g - 2)
    v.checks.append(Check("OPT >= (gamma+1) 2^(-gamma-2)", by_types, ">=", lower))
    v.checks.append(Check("OPT > 4 rho 2^(-gamma-2)", by_types, ">", 4 * rho * _two(-g - 2)))
    v.checks.append(Check("linear <= 2^(-gamma-1)", lin, "<=", _two(-g - 1)))
    v.notes.append(f"rho = {rho}, gamma = {g}")
    return v


def verify_is_complete(G: Graph, independent_set=None) -> Verification:
    """Completeness contract of the independent-set reduction on ``G``.

    Passes when the reported utility recomputes from the contract and every
    IC slack is non-negative.  Whether each type of the independent set
    prefers ``a_bar`` to every other action is printed with both sides.
    """
    vs = greedy_maximal_independent_set(G) if independent_set is None else tuple(independent_set)
    inst = gen_from_graph(G)
    contract = completeness_contract_independent_set(G, vs)
    result = make_result(inst, contract)
    ell = G.num_vertices
    v = Verification("is-complete")
    min_slack = min(s for row in result.ic_slacks for s in row)
    v.checks.append(Check("IC slack (minimum)", min_slack, ">=", Fraction(0)))
    recomputed = make_result(inst, result.contract).utility
    v.checks.append(Check("utility == recomputed utility", result.utility, "==", recomputed))
    predicted = Fraction(len(set(vs)), 2) * _two(-ell - 1)
    match = "equal" if result.utility == predicted else "differs"
    v.notes.append(f"independent set = {sorted(set(vs))}")
    v.notes.append(f"utility {result.utility}; (|V*|/2) 2^(-ell-1) = {predicted} ({match})")
    for t in sorted(set(vs)):
        bar = agent_utility(inst, contract, t, 0)
        other = max(agent_utility(inst, contract, t, a) for a in range(1, inst.num_actions))
        holds = "holds" if bar >= other else "fails"
        v.notes.append(
            f"type {t}: plays {inst.label('action', result.profile[t])}; "
            f"u(a_bar) = {bar} >= max other = {other} {holds}"
        )
    return v


def builtin_label_cover() -> tuple:
    """Two edges, two labels, one left vertex; satisfiable by ``left 0, right (0, 1)``."""
    lc = LabelCoverInstance(1, 2, ((0, 0), (0, 1)), 2, ((0, 1), (1, 0)))
    return lc, Labeling((0,), (0, 1))


def find_labeling(lc: LabelCoverInstance, cap: int = 10**6) -> Optional[Labeling]:
    """First satisfying labeling in lexicographic order, or None."""
    if lc.num_labels ** lc.num_vertices > cap:
        raise ValueError("too many labelings to search; supply one in the file")
    for labels in itertools.product(range(lc.num_labels), repeat=lc.num_vertices):
        cand = Labeling(labels[: lc.left], labels[lc.left:])
        if cand.satisfies(lc):
            return cand
    return None


def verify_lc_complete(
    rho, lc: Optional[LabelCoverInstance] = None, labeling: Optional[Labeling] = None
) -> Verification:
    rho = as_rational(rho)
    if lc is None:
        lc, labeling = builtin_label_cover()
    if labeling is None:
        labeling = find_labeling(lc)
        if labeling is None:
            raise ValueError("label-cover instance is not satisfiable")
    g = label_cover_gamma(rho)
    inst = gen_from_label_cover(lc, rho)
    result = make_result(inst, completeness_contract_label_cover(lc, labeling, rho))
    v = Verification("lc-complete")
    target = (g + 2) * _two(-g - 4)
    v.checks.append(Check("utility == (gamma+2) 2^(-gamma-4)", result.utility, "==", target))
    for t, (u, _) in enumerate(lc.edges):
        expected = label_cover_satisfying_action(lc, labeling.left[u])
        name = f"type {t} plays satisfying action {expected}"
        v.checks.append(Check(name, Fraction(result.profile[t]), "==", Fraction(expected)))
    v.notes.append(f"rho = {rho}, gamma = {g}")
    v.notes.append(f"labeling left={labeling.left} right={labeling.right}")
    return v


def verify_bi_approx(inst: Instance, rho, n_jobs: Optional[int] = None) -> Verification:
    rho = as_rational(rho)
    opt = OptimalContract(n_jobs=n_jobs).fit(inst).utility_
    lc, grid_u = best_grid_contract(inst, rho)
    loss = grid_additive_loss(rho)
    v = Verification("bi-approx")
    v.checks.append(Check("grid >= OPT/rho - additive loss", grid_u, ">=", opt / rho - loss))
    v.notes.append(f"rho = {rho}, OPT = {opt}, best grid alpha = {lc.alpha}, additive loss = {loss}")
    return v
