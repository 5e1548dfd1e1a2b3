"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from fractions import Fraction

from .exceptions import InvalidInstanceError
from .model import Contract, Instance, as_rational, validate_instance

__all__ = ["check_instance", "check_contract", "check_type_index", "check_rho"]


def check_instance(obj) -> Instance:
    """Return ``obj`` as a validated Instance.

    Accepts an Instance or the dict structure of an instance file.
    """
    if isinstance(obj, dict):
        from .io import instance_from_dict

        obj = instance_from_dict(obj)
    if not isinstance(obj, Instance):
        raise TypeError(f"expected an Instance, got {type(obj).__name__}")
    report = validate_instance(obj)
    if not report.ok:
        raise InvalidInstanceError(report)
    return obj


def check_contract(inst: Instance, contract) -> Contract:
    if not isinstance(contract, Contract):
        contract = Contract(contract)
    if len(contract) != inst.num_outcomes:
        raise ValueError(
            f"contract has {len(contract)} payments, instance has {inst.num_outcomes} outcomes"
        )
    return contract


def check_type_index(inst: Instance, theta) -> int:
    if isinstance(theta, bool) or int(theta) != theta:
        raise TypeError(f"type index must be an integer, got {theta!r}")
    theta = int(theta)
    if not 0 <= theta < inst.num_types:
        raise IndexError(f"type index {theta} out of range [0, {inst.num_types})")
    return theta


def check_rho(rho, minimum=1) -> Fraction:
    rho = as_rational(rho)
    if rho < minimum:
        raise ValueError(f"rho must be >= {minimum}, got {rho}")
    return rho
