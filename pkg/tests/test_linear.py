from fractions import Fraction

import pytest

from bayes_contracts import (
    Instance,
    LinearContract,
    best_grid_contract,
    breakpoints,
    evaluate_many,
    grid_contracts,
    indifference_alpha,
    optimize_linear,
    overall_utility,
    to_contract,
)
from bayes_contracts.generators import gen_linear_gap, random_corpus
from bayes_contracts.linear import grid_additive_loss


def linear_gap_utility(ell, alpha):
    """Closed form: type k takes a_1 once alpha >= 1 - 2^-k and then yields (1 - alpha) 2^-k."""
    weights = [Fraction(4) ** (k - ell) for k in range(1, ell + 1)]
    N = sum(weights)
    return sum(
        w / N * (1 - alpha) / 2**k
        for k, w in zip(range(1, ell + 1), weights)
        if alpha >= 1 - Fraction(1, 2**k)
    )


class TestLinearContract:
    def test_range(self):
        with pytest.raises(ValueError):
            LinearContract(Fraction(3, 2))
        with pytest.raises(ValueError):
            LinearContract(-1)
        assert LinearContract("0.5").alpha == Fraction(1, 2)

    def test_to_contract(self, e1):
        assert to_contract(0, e1).p == (0, 0)
        assert to_contract(1, e1).p == e1.r
        inst = Instance([1], [[[1, 0, 0]]], [[0]], [Fraction(1, 2), Fraction(1, 4), 0])
        assert to_contract(LinearContract(Fraction(1, 2)), inst).p == (Fraction(1, 4), Fraction(1, 8), 0)

    def test_full_surplus_contract_leaves_principal_nothing(self):
        for _, inst in random_corpus(20, 2, 3, 3, seed=1):
            assert overall_utility(inst, to_contract(1, inst)) == 0


class TestIndifference:
    def test_e1(self, e1):
        assert indifference_alpha(e1, 0, 0, 1) == Fraction(1, 2)

    def test_linear_gap(self):
        inst = gen_linear_gap(3)
        for k in range(1, 4):
            assert indifference_alpha(inst, k - 1, 0, 1) == 1 - Fraction(1, 2**k)

    def test_no_crossing(self):
        inst = Instance([1], [[[1, 0], [1, 0]]], [[0, Fraction(1, 4)]], [0, 1])
        assert indifference_alpha(inst, 0, 0, 1) is None

    def test_outside_unit_interval(self):
        inst = Instance([1], [[[1, 0], [0, 1]]], [[0, 1]], [0, Fraction(1, 2)])
        assert indifference_alpha(inst, 0, 0, 1) is None

    def test_same_action(self, e1):
        with pytest.raises(ValueError):
            indifference_alpha(e1, 0, 1, 1)


class TestBreakpoints:
    def test_examples(self, e1, gap2):
        assert breakpoints(e1) == [0, Fraction(1, 2), 1]
        assert breakpoints(gap2) == [0, Fraction(1, 2), Fraction(3, 4), 1]
        shared = Instance([1], [[[Fraction(1, 2)] * 2] * 3], [[0, Fraction(1, 8), Fraction(1, 4)]], [0, 1])
        assert breakpoints(shared) == [0, 1]

    def test_size_bound(self):
        for _, inst in random_corpus(30, 3, 4, 3, seed=2):
            ell, n, _ = inst.shape
            points = breakpoints(inst)
            assert points == sorted(set(points))
            assert len(points) <= ell * n * (n - 1) // 2 + 2


class TestOptimizeLinear:
    def test_e1(self, e1):
        sweep = optimize_linear(e1)
        assert (sweep.best_alpha, sweep.utility) == (Fraction(1, 2), Fraction(1, 2))

    def test_linear_gap_matches_closed_form(self, gap2):
        sweep = optimize_linear(gap2)
        assert linear_gap_utility(2, Fraction(1, 2)) == Fraction(1, 20)
        assert linear_gap_utility(2, Fraction(3, 4)) == Fraction(3, 40)
        assert (sweep.best_alpha, sweep.utility) == (Fraction(3, 4), Fraction(3, 40))
        for alpha, u in sweep.candidates:
            assert u == linear_gap_utility(2, alpha)

    def test_bi_approx_gap(self, biapprox1):
        assert optimize_linear(biapprox1).utility <= Fraction(1, 32)

    def test_candidates_sorted_and_max(self):
        for _, inst in random_corpus(20, 3, 4, 3, seed=3):
            sweep = optimize_linear(inst)
            alphas = [a for a, _ in sweep.candidates]
            assert alphas == sorted(set(alphas))
            assert sweep.utility == max(u for _, u in sweep.candidates)

    def test_smallest_alpha_wins_ties(self):
        # all rewards zero: every alpha gives utility 0
        inst = Instance([1], [[[1, 0], [0, 1]]], [[0, 0]], [0, 0])
        assert optimize_linear(inst).best_alpha == 0

    def test_dominates_ten_thousand_point_grid(self):
        alphas = [Fraction(i, 10000) for i in range(10001)]
        for _, inst in random_corpus(8, 3, 4, 3, seed=4):
            best = optimize_linear(inst).utility
            assert max(evaluate_many(inst, [to_contract(a, inst) for a in alphas])) <= best


class TestGrid:
    def test_grid_contracts(self):
        assert [c.alpha for c in grid_contracts(2)] == [Fraction(1, 2)]
        assert [c.alpha for c in grid_contracts(6)] == [Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
        assert [c.alpha for c in grid_contracts(7)] == [Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
        assert [c.alpha for c in grid_contracts(Fraction(9, 2))] == [Fraction(1, 2), Fraction(3, 4)]
        with pytest.raises(ValueError):
            grid_contracts(Fraction(3, 2))

    def test_best_grid_contract(self, e1, gap2):
        lc, u = best_grid_contract(e1, 2)
        assert (lc.alpha, u) == (Fraction(1, 2), Fraction(1, 2))
        lc, u = best_grid_contract(gap2, 4)
        assert (lc.alpha, u) == (Fraction(3, 4), Fraction(3, 40))
        lc, _ = best_grid_contract(gap2, 1.5)
        assert lc.alpha == Fraction(1, 2)
        with pytest.raises(ValueError):
            best_grid_contract(e1, Fraction(1, 2))

    def test_additive_loss(self):
        assert grid_additive_loss(1) == Fraction(1, 2)
        assert grid_additive_loss(2) == 1
        assert grid_additive_loss(7) == Fraction(1, 4)
        # the dyadic majorant dominates 2^(1 - rho/2): compare squares to stay rational
        for rho in range(2, 21):
            assert grid_additive_loss(rho) ** 2 >= Fraction(2) ** (2 - rho)
