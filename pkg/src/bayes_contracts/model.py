"""Bayesian principal-agent instances, contracts and expected values.

Every quantity is an exact :class:`fractions.Fraction`.  Inputs may be given
as ints, Fractions, ``"p/q"`` strings, decimal strings (``"0.25"``) or any
object exposing integer ``numerator``/``denominator`` (e.g. ``gmpy2.mpq``).
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Optional, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "Instance",
    "Contract",
    "Violation",
    "ValidationReport",
    "validate_instance",
    "expected_reward",
    "expected_payment",
    "agent_utility",
    "principal_utility_for_action",
    "welfare_bound",
]


def as_rational(value: Any) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Floats go through their shortest ``repr`` so ``0.1`` becomes ``1/10``
    rather than its binary expansion.  Booleans are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a rational") from exc
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _vector(values) -> tuple:
    return tuple(as_rational(v) for v in values)


@dataclass(frozen=True)
class Instance:
    """A Bayesian principal-agent instance.

    Parameters
    ----------
    mu : sequence of rationals, length ``num_types``
        Type distribution.
    F : nested sequence, shape ``(num_types, num_actions, num_outcomes)``
        Outcome distribution of each (type, action) pair.
    c : nested sequence, shape ``(num_types, num_actions)``
        Action costs.
    r : sequence of rationals, length ``num_outcomes``
        Principal rewards.
    labels : dict, optional
        Human-readable names under the keys ``"types"``, ``"actions"`` and
        ``"outcomes"``.

    Construction only coerces values; use :func:`validate_instance` to check
    the model constraints.
    """

    mu: tuple
    F: tuple
    c: tuple
    r: tuple
    labels: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mu", _vector(self.mu))
        object.__setattr__(
            self, "F", tuple(tuple(_vector(row) for row in rows) for rows in self.F)
        )
        object.__setattr__(self, "c", tuple(_vector(row) for row in self.c))
        object.__setattr__(self, "r", _vector(self.r))
        if self.labels is not None:
            labels = {k: tuple(str(x) for x in v) for k, v in dict(self.labels).items()}
            object.__setattr__(self, "labels", labels)

    @property
    def num_types(self) -> int:
        return len(self.F)

    @property
    def num_actions(self) -> int:
        return len(self.F[0]) if self.F else 0

    @property
    def num_outcomes(self) -> int:
        return len(self.r)

    @property
    def shape(self) -> tuple:
        return (self.num_types, self.num_actions, self.num_outcomes)

    @cached_property
    def zero_cost_actions(self) -> tuple:
        """Actions with zero cost for every type (witnesses that the instance has a free action)."""
        return tuple(
            a
            for a in range(self.num_actions)
            if all(len(row) > a and row[a] == 0 for row in self.c)
        )

    @cached_property
    def rewards(self) -> tuple:
        """Expected reward table ``R[theta][a]``."""
        return tuple(
            tuple(sum((f * r for f, r in zip(dist, self.r)), Fraction(0)) for dist in rows)
            for rows in self.F
        )

    def label(self, kind: str, index: int) -> str:
        """Name of type/action/outcome ``index``; falls back to ``"<kind>[i]"``."""
        names = (self.labels or {}).get(kind + "s")
        if names and index < len(names):
            return names[index]
        return f"{kind}[{index}]"


@dataclass(frozen=True)
class Contract:
    """Non-negative payment per outcome (limited liability)."""

    p: tuple

    def __post_init__(self):
        p = _vector(self.p)
        negative = [i for i, x in enumerate(p) if x < 0]
        if negative:
            raise ValueError(f"negative payment on outcome(s) {negative}")
        object.__setattr__(self, "p", p)

    def __len__(self):
        return len(self.p)

    def __iter__(self):
        return iter(self.p)

    def __getitem__(self, index):
        return self.p[index]

    @classmethod
    def zeros(cls, num_outcomes: int) -> "Contract":
        return cls((0,) * num_outcomes)


@dataclass(frozen=True)
class Violation:
    constraint: str
    location: Any = None
    observed: Any = None

    def __str__(self):
        parts = [self.constraint]
        if self.location is not None:
            parts.append(f"at {self.location}")
        if self.observed is not None:
            parts.append(f"observed {self.observed}")
        return " ".join(parts)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def names(self) -> list:
        return [v.constraint for v in self.violations]

    def render(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"  - {v}" for v in self.violations)


def _in_unit_interval(x: Fraction) -> bool:
    return 0 <= x <= 1


def validate_instance(inst: Instance) -> ValidationReport:
    """Report every violated model constraint of ``inst``.

    Violations are returned as data; nothing is raised.  Value checks are
    skipped when the arrays are ragged because indices are then ambiguous.
    """
    out = []
    ell, n, m = inst.num_types, inst.num_actions, inst.num_outcomes
    if ell == 0:
        out.append(Violation("shape", "types", 0))
    if n == 0:
        out.append(Violation("shape", "actions", 0))
    if m == 0:
        out.append(Violation("shape", "outcomes", 0))
    if len(inst.mu) != ell:
        out.append(Violation("shape", "mu", len(inst.mu)))
    if len(inst.c) != ell:
        out.append(Violation("shape", "c", len(inst.c)))
    for t in range(ell):
        if len(inst.F[t]) != n:
            out.append(Violation("shape", ("F", t), len(inst.F[t])))
        for a, dist in enumerate(inst.F[t]):
            if len(dist) != m:
                out.append(Violation("shape", ("F", t, a), len(dist)))
        if t < len(inst.c) and len(inst.c[t]) != n:
            out.append(Violation("shape", ("c", t), len(inst.c[t])))
    if out:
        return ValidationReport(tuple(out))

    for t, p in enumerate(inst.mu):
        if p < 0:
            out.append(Violation("type-probability-range", t, p))
    total = sum(inst.mu, Fraction(0))
    if total != 1:
        out.append(Violation("type-normalization", None, total))
    for t in range(ell):
        for a in range(n):
            dist = inst.F[t][a]
            for w, f in enumerate(dist):
                if f < 0:
                    out.append(Violation("probability-range", (t, a, w), f))
            s = sum(dist, Fraction(0))
            if s != 1:
                out.append(Violation("distribution-normalization", (t, a), s))
            if not _in_unit_interval(inst.c[t][a]):
                out.append(Violation("cost-range", (t, a), inst.c[t][a]))
    for w, x in enumerate(inst.r):
        if not _in_unit_interval(x):
            out.append(Violation("reward-range", w, x))
    if not inst.zero_cost_actions:
        out.append(Violation("assumption-1"))
    if inst.labels:
        for kind, size in (("types", ell), ("actions", n), ("outcomes", m)):
            names = inst.labels.get(kind)
            if names is not None and len(names) != size:
                out.append(Violation("shape", ("labels", kind), len(names)))
    return ValidationReport(tuple(out))


def _check_indices(inst: Instance, theta: int, a: int) -> None:
    if not 0 <= theta < inst.num_types:
        raise IndexError(f"type index {theta} out of range [0, {inst.num_types})")
    if not 0 <= a < inst.num_actions:
        raise IndexError(f"action index {a} out of range [0, {inst.num_actions})")


def _payments(inst: Instance, contract) -> tuple:
    p = contract.p if isinstance(contract, Contract) else Contract(contract).p
    if len(p) != inst.num_outcomes:
        raise ValueError(
            f"contract has {len(p)} payments but the instance has "
            f"{inst.num_outcomes} outcomes"
        )
    return p


def expected_reward(inst: Instance, theta: int, a: int) -> Fraction:
    """``R[theta, a] = sum_w F[theta, a, w] * r[w]``."""
    _check_indices(inst, theta, a)
    return inst.rewards[theta][a]


def expected_payment(inst: Instance, contract, theta: int, a: int) -> Fraction:
    """``P[theta, a] = sum_w F[theta, a, w] * p[w]``."""
    _check_indices(inst, theta, a)
    p = _payments(inst, contract)
    return sum((f * x for f, x in zip(inst.F[theta][a], p)), Fraction(0))


def agent_utility(inst: Instance, contract, theta: int, a: int) -> Fraction:
    return expected_payment(inst, contract, theta, a) - inst.c[theta][a]


def principal_utility_for_action(inst: Instance, contract, theta: int, a: int) -> Fraction:
    return expected_reward(inst, theta, a) - expected_payment(inst, contract, theta, a)


def welfare_bound(inst: Instance) -> Fraction:
    """Upper bound on the principal's utility under any contract.

    Each type contributes at most its best ``R - c`` because IR forces the
    expected payment to cover the cost of the implemented action.
    """
    total = Fraction(0)
    for t in range(inst.num_types):
        best = max(inst.rewards[t][a] - inst.c[t][a] for a in range(inst.num_actions))
        total += inst.mu[t] * best
    return total


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))
