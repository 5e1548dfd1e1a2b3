import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bayes_contracts import (
    Contract,
    Instance,
    InvalidInstanceError,
    best_response,
    evaluate_many,
    gen_random,
    ic_slacks,
    induced_profile,
    make_result,
    overall_utility,
    welfare_bound,
)
from bayes_contracts.agent import evaluate_scaled
from bayes_contracts.model import agent_utility, principal_utility_for_action


def linear_gap_optimal_contract(ell):
    """Pay each type exactly its cost on its own outcome."""
    p = [Fraction(0)] * (ell + 1)
    for k in range(1, ell + 1):
        p[k - 1] = Fraction(1, 2**k) * (1 - Fraction(1, 2**k))
    return Contract(p)


def random_contract(rng, m, den=32):
    return Contract([Fraction(rng.randint(0, den), den) for _ in range(m)])


class TestBestResponse:
    def test_e1(self, e1):
        assert best_response(e1, Contract.zeros(2), 0) == 0
        # tie at agent utility 0; the principal prefers a1
        assert best_response(e1, [0, Fraction(1, 2)], 0) == 1

    def test_linear_gap(self, gap2):
        contract = linear_gap_optimal_contract(2)
        assert best_response(gap2, contract, 0) == 0
        assert induced_profile(gap2, contract).choice == (0, 0)

    def test_bi_approx_zero_contract_plays_free_action(self, biapprox1):
        assert induced_profile(biapprox1, Contract.zeros(3)).choice == (4,)

    def test_smallest_index_breaks_full_ties(self):
        inst = Instance(mu=[1], F=[[[1, 0], [1, 0], [0, 1]]], c=[[0, 0, 0]], r=[0, 0])
        assert best_response(inst, [0, 0], 0) == 0

    def test_requires_zero_cost_action(self):
        inst = Instance(mu=[1], F=[[[1, 0]]], c=[[Fraction(1, 2)]], r=[0, 1])
        with pytest.raises(InvalidInstanceError) as info:
            best_response(inst, [0, 0], 0)
        assert info.value.report.names() == ["assumption-1"]

    def test_type_out_of_range(self, e1):
        with pytest.raises(IndexError):
            best_response(e1, [0, 0], 1)


class TestOverallUtility:
    def test_examples(self, e1, gap2, biapprox1):
        assert overall_utility(e1, [0, Fraction(1, 2)]) == Fraction(1, 2)
        # ell 2^(-2 ell) / N with N = 5/4
        assert overall_utility(gap2, linear_gap_optimal_contract(2)) == Fraction(1, 10)
        assert overall_utility(biapprox1, [0, Fraction(27, 32), 0]) == Fraction(5, 64)

    def test_make_result_certificate(self, gap2):
        result = make_result(gap2, linear_gap_optimal_contract(2))
        assert result.check(gap2)
        assert all(s >= 0 for row in result.ic_slacks for s in row)

    def test_check_detects_tampering(self, e1):
        result = make_result(e1, [0, Fraction(1, 2)])
        forged = type(result)(result.contract, result.profile, Fraction(1), result.ic_slacks)
        assert not forged.check(e1)

    def test_permutation_invariance(self):
        inst = gen_random(3, 3, 3, 3)
        perm = [2, 0, 1]
        permuted = Instance(
            [inst.mu[i] for i in perm], [inst.F[i] for i in perm], [inst.c[i] for i in perm], inst.r
        )
        rng = random.Random(0)
        for _ in range(20):
            c = random_contract(rng, 3)
            assert overall_utility(inst, c) == overall_utility(permuted, c)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), cseed=st.integers(0, 10**6))
def test_best_response_properties(seed, cseed):
    inst = gen_random(seed, 2, 4, 3)
    contract = random_contract(random.Random(cseed), 3)
    for t in range(inst.num_types):
        chosen = best_response(inst, contract, t)
        assert chosen == best_response(inst, contract, t)
        u = agent_utility(inst, contract, t, chosen)
        assert u >= 0
        for a in range(inst.num_actions):
            other = agent_utility(inst, contract, t, a)
            assert u >= other
            if other == u:
                assert principal_utility_for_action(inst, contract, t, chosen) >= principal_utility_for_action(
                    inst, contract, t, a
                )
    profile = induced_profile(inst, contract)
    assert all(s >= 0 for row in ic_slacks(inst, contract, profile) for s in row)
    # overpaying can make this negative; only the upper bound holds for every contract
    assert overall_utility(inst, contract) <= welfare_bound(inst)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), cseed=st.integers(0, 10**6))
def test_batch_matches_scalar(seed, cseed):
    inst = gen_random(seed, 3, 3, 3)
    rng = random.Random(cseed)
    contracts = [random_contract(rng, 3, den=rng.choice([2, 7, 64])) for _ in range(25)]
    assert evaluate_many(inst, contracts) == [overall_utility(inst, c) for c in contracts]


def test_batch_handles_huge_denominators():
    inst = gen_random(1, 2, 3, 2)
    contracts = [Contract([Fraction(1, 3**40), Fraction(2**70 - 1, 2**71)]), Contract([0, 1])]
    assert evaluate_many(inst, contracts) == [overall_utility(inst, c) for c in contracts]


def test_batch_empty(e1):
    assert evaluate_many(e1, []) == []
    nums, den = evaluate_scaled(e1, [[0, 1]], 2)
    assert Fraction(int(nums[0]), den) == Fraction(1, 2)
