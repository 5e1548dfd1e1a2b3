"""Estimator-style wrappers around the solvers.

``fit`` takes an :class:`~bayes_contracts.model.Instance` (or its dict form)
and stores the fitted contract; ``predict`` maps type indices to the actions
they play under it; ``score`` is the principal's overall utility.
"""

from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .agent import best_response, make_result, overall_utility
from .exact import (
    DEFAULT_CAP,
    outcome_enumeration_size,
    solve_by_outcome_enumeration,
    solve_by_type_enumeration,
    type_enumeration_size,
)
from .linear import best_grid_contract, optimize_linear, to_contract
from .validation import check_contract, check_instance, check_rho, check_type_index

__all__ = ["OptimalContract", "LinearContractOptimizer", "GridLinearContract"]


class _ContractEstimator(BaseEstimator):
    def _set_fitted(self, inst, contract):
        self.instance_ = inst
        self.result_ = make_result(inst, contract)
        self.contract_ = self.result_.contract
        self.profile_ = self.result_.profile
        self.utility_ = self.result_.utility
        return self

    def _check_fitted(self):
        if not hasattr(self, "contract_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")

    def predict(self, types) -> list:
        """Action played by each type in ``types`` under the fitted contract."""
        self._check_fitted()
        return [
            best_response(self.instance_, self.contract_, check_type_index(self.instance_, t))
            for t in types
        ]

    def score(self, instance, y=None) -> Fraction:
        """Overall utility of the fitted contract on ``instance``."""
        self._check_fitted()
        inst = check_instance(instance)
        return overall_utility(inst, check_contract(inst, self.contract_))


class OptimalContract(_ContractEstimator):
    """Exact optimal contract.

    Parameters
    ----------
    method : {"auto", "types", "outcomes"}
        ``"auto"`` picks the enumeration with the smaller search space.
    cap : int
        Enumeration budget; larger searches raise ``EnumerationCapExceeded``.
    n_jobs : int or None
        Worker processes for the enumeration; results do not depend on it.
    """

    def __init__(self, method="auto", cap=DEFAULT_CAP, n_jobs=None):
        self.method = method
        self.cap = cap
        self.n_jobs = n_jobs

    def fit(self, instance, y=None):
        inst = check_instance(instance)
        method = self.method
        if method not in ("auto", "types", "outcomes"):
            raise ValueError(f"unknown method {method!r}")
        if method == "auto":
            cheaper = type_enumeration_size(inst) <= outcome_enumeration_size(inst)
            method = "types" if cheaper else "outcomes"
        solve = solve_by_type_enumeration if method == "types" else solve_by_outcome_enumeration
        result = solve(inst, self.cap, self.n_jobs)
        self.method_ = method
        return self._set_fitted(inst, result.contract)


class LinearContractOptimizer(_ContractEstimator):
    """Best linear contract, found by the exact breakpoint sweep."""

    def fit(self, instance, y=None):
        inst = check_instance(instance)
        sweep = optimize_linear(inst)
        self.alpha_ = sweep.best_alpha
        self.sweep_ = sweep
        return self._set_fitted(inst, to_contract(sweep.best_alpha, inst))


class GridLinearContract(_ContractEstimator):
    """Best contract ``alpha = 1 - 2**-i`` of the bi-approximation grid for ``rho``."""

    def __init__(self, rho=2):
        self.rho = rho

    def fit(self, instance, y=None):
        inst = check_instance(instance)
        lc, _ = best_grid_contract(inst, check_rho(self.rho))
        self.alpha_ = lc.alpha
        return self._set_fitted(inst, to_contract(lc, inst))
