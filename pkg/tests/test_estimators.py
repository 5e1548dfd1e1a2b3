from fractions import Fraction

import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from bayes_contracts import GridLinearContract, LinearContractOptimizer, OptimalContract
from bayes_contracts.io import instance_to_dict


def test_params_and_clone():
    est = OptimalContract(method="outcomes", n_jobs=2)
    assert est.get_params() == {"method": "outcomes", "cap": 10**7, "n_jobs": 2}
    copy = clone(est.set_params(method="types"))
    assert copy.method == "types" and not hasattr(copy, "contract_")
    assert GridLinearContract(rho=6).get_params() == {"rho": 6}


@pytest.mark.parametrize("method", ["auto", "types", "outcomes"])
def test_optimal_contract(biapprox1, method):
    est = OptimalContract(method=method).fit(biapprox1)
    assert est.utility_ == Fraction(5, 64)
    assert est.contract_.p == (0, Fraction(27, 32), 0)
    assert est.predict([0]) == [0]
    assert est.score(biapprox1) == Fraction(5, 64)
    assert est.result_.check(biapprox1)


def test_linear_estimators(gap2):
    lin = LinearContractOptimizer().fit(gap2)
    assert (lin.alpha_, lin.utility_) == (Fraction(3, 4), Fraction(3, 40))
    grid = GridLinearContract(rho=2).fit(gap2)
    assert grid.alpha_ == Fraction(1, 2) and grid.utility_ == Fraction(1, 20)


def test_accepts_file_dict(e1):
    assert OptimalContract().fit(instance_to_dict(e1)).utility_ == Fraction(1, 2)


def test_errors(e1, gap2):
    with pytest.raises(NotFittedError):
        OptimalContract().predict([0])
    with pytest.raises(ValueError):
        OptimalContract(method="magic").fit(e1)
    with pytest.raises(TypeError):
        OptimalContract().fit([[1, 2]])
    est = OptimalContract().fit(e1)
    with pytest.raises(IndexError):
        est.predict([1])
    with pytest.raises(ValueError):
        est.score(gap2)
    with pytest.raises(ValueError):
        GridLinearContract(rho=Fraction(1, 2)).fit(e1)
