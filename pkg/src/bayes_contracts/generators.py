"""Instance families: linear-contract gap instances, the reductions from
independent set and label cover with their completeness contracts, and seeded
random instances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .model import Contract, Instance, as_rational

__all__ = [
    "Graph",
    "LabelCoverInstance",
    "Labeling",
    "gen_linear_gap",
    "gen_bi_approx_gap",
    "gen_from_graph",
    "greedy_maximal_independent_set",
    "completeness_contract_independent_set",
    "gen_from_label_cover",
    "label_cover_gamma",
    "label_cover_satisfying_action",
    "completeness_contract_label_cover",
    "gen_random",
    "random_corpus",
    "RANDOM_DENOMINATOR",
]

RANDOM_DENOMINATOR = 2**16


def _pow2(k: int) -> Fraction:
    return Fraction(2) ** k


# -- Linear-contract gap families --------------------------------------------


def gen_linear_gap(ell: int) -> Instance:
    """Two-action family on which every linear contract loses a factor ~ell/2.

    Type ``k`` (1-based) either produces outcome ``k`` (reward ``2**-k``) at
    cost ``2**-k (1 - 2**-k)`` or the zero-reward outcome for free.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    m = ell + 1
    r = [_pow2(-j) for j in range(1, m)] + [Fraction(0)]
    weights = [_pow2(2 * (k - ell)) for k in range(1, ell + 1)]
    N = sum(weights)
    mu = [w / N for w in weights]
    F, c = [], []
    for k in range(1, ell + 1):
        a1 = [Fraction(int(j == k - 1)) for j in range(m)]
        a2 = [Fraction(int(j == m - 1)) for j in range(m)]
        F.append([a1, a2])
        c.append([_pow2(-k) * (1 - _pow2(-k)), Fraction(0)])
    labels = {
        "types": [f"theta_{k}" for k in range(1, ell + 1)],
        "actions": ["a_1", "a_2"],
        "outcomes": [f"omega_{j}" for j in range(1, m + 1)],
    }
    return Instance(mu, F, c, r, labels)


def bi_approx_gamma(rho) -> int:
    return math.floor(4 * as_rational(rho))


def gen_bi_approx_gap(rho) -> Instance:
    """Single-type instance where linear contracts cannot reach a
    ``(rho, 2**(-4 rho - 2))`` bi-approximation.

    Actions ``a_1 .. a_gamma`` (``gamma = floor(4 rho)``) followed by the
    free action; outcomes ``(omega_1, omega_2, omega_3)`` with rewards ``(1, 0, 0)``.
    """
    rho = as_rational(rho)
    if rho < 1:
        raise ValueError("rho must be >= 1")
    g = bi_approx_gamma(rho)
    F, c = [], []
    for i in range(1, g + 1):
        if i == 1:
            F.append([Fraction(1, 2), Fraction(1, 2), Fraction(0)])
        else:
            F.append([_pow2(-i), Fraction(0), 1 - _pow2(-i)])
        c.append(_pow2(-i) - (g - i + 2) * _pow2(-g - 2))
    F.append([Fraction(0), Fraction(0), Fraction(1)])
    c.append(Fraction(0))
    labels = {
        "types": ["theta"],
        "actions": [f"a_{i}" for i in range(1, g + 1)] + ["a_bar"],
        "outcomes": ["omega_1", "omega_2", "omega_3"],
    }
    return Instance([1], [F], [c], [1, 0, 0], labels)


# -- Independent-set reduction -------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0 .. num_vertices - 1``."""

    num_vertices: int
    edges: frozenset

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        edges = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the graph")
            edges.add(frozenset((u, v)))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def edgeless(cls, n: int) -> "Graph":
        return cls(n, frozenset())

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset(frozenset((i, i + 1)) for i in range(n - 1)))

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable) -> "Graph":
        return cls(n, frozenset(frozenset(p) for p in pairs))

    def adjacent(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbours(self, v: int) -> list:
        return [u for u in range(self.num_vertices) if self.adjacent(u, v)]

    def sorted_edges(self) -> list:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def is_independent(self, vertices) -> bool:
        vs = sorted(set(vertices))
        return all(not self.adjacent(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])

    def is_maximal_independent(self, vertices) -> bool:
        vs = set(vertices)
        if not self.is_independent(vs):
            return False
        return all(
            v in vs or any(self.adjacent(v, u) for u in vs) for v in range(self.num_vertices)
        )


def greedy_maximal_independent_set(G: Graph) -> tuple:
    chosen = []
    for v in range(G.num_vertices):
        if all(not G.adjacent(v, u) for u in chosen):
            chosen.append(v)
    return tuple(chosen)


def graph_action_index(G: Graph, u: int, i: int) -> int:
    """Index of action ``a_{u i}`` (``i`` in ``1 .. ell - 1``) in :func:`gen_from_graph`."""
    return 1 + u * (G.num_vertices - 1) + (i - 1)


def gen_from_graph(G: Graph) -> Instance:
    """Instance of the reduction from independent set.

    Outcomes: ``omega_v`` (reward 1) for every vertex, then ``bar_omega_v``,
    then the auxiliary ``bar_omega``; all but the first block have reward 0.
    Actions: ``a_bar`` (index 0), ``a_{u i}`` in the order of
    :func:`graph_action_index`, and a final free action on ``bar_omega``.
    """
    ell = G.num_vertices
    if ell < 2:
        raise ValueError("the independent-set construction needs at least 2 vertices")
    m = 2 * ell + 1
    aux = 2 * ell
    x = ell * _pow2(-ell - 1)
    r = [Fraction(1)] * ell + [Fraction(0)] * (ell + 1)
    F, c = [], []
    for v in range(ell):
        rows, costs = [], []
        bar = [Fraction(0)] * m
        bar[v] = bar[ell + v] = Fraction(1, 2)
        rows.append(bar)
        costs.append(Fraction(1, 2) - x)
        for u in range(ell):
            for i in range(1, ell):
                q = _pow2(-i - 1)
                row = [Fraction(0)] * m
                row[v] = q
                if G.adjacent(v, u):
                    row[ell + v] += Fraction(2, 3) * q
                    row[ell + u] += Fraction(2, 3) * q
                    row[aux] = 1 - Fraction(7, 3) * q
                else:
                    row[aux] = 1 - q
                rows.append(row)
                costs.append(q - (ell - i) * _pow2(-ell - 1))
        free = [Fraction(0)] * m
        free[aux] = Fraction(1)
        rows.append(free)
        costs.append(Fraction(0))
        F.append(rows)
        c.append(costs)
    labels = {
        "types": [f"theta_{v}" for v in range(ell)],
        "actions": ["a_bar"]
        + [f"a_{u},{i}" for u in range(ell) for i in range(1, ell)]
        + ["a_free"],
        "outcomes": [f"omega_{v}" for v in range(ell)]
        + [f"bar_omega_{v}" for v in range(ell)]
        + ["bar_omega"],
    }
    return Instance([Fraction(1, ell)] * ell, F, c, r, labels)


def completeness_contract_independent_set(G: Graph, independent_set) -> Contract:
    """Contract that extracts utility from the types of a maximal independent set."""
    vs = set(int(v) for v in independent_set)
    if not G.is_independent(vs):
        raise ValueError(f"{sorted(vs)} is not an independent set")
    if not G.is_maximal_independent(vs):
        raise ValueError(f"{sorted(vs)} is not a maximal independent set")
    ell = G.num_vertices
    x = ell * _pow2(-ell - 1)
    p = [Fraction(0)] * (2 * ell + 1)
    for v in range(ell):
        if v in vs:
            p[ell + v] = 1 - x
        else:
            p[v] = (1 - x) / 3 + x
    return Contract(p)


# -- Label-cover reduction -----------------------------------------------------


@dataclass(frozen=True)
class LabelCoverInstance:
    """Bipartite label-cover instance.

    Left vertices ``0 .. left - 1`` and right vertices ``0 .. right - 1`` are
    indexed separately; ``edges[k] = (u, v)`` joins left ``u`` to right ``v``
    and ``constraints[k][s]`` is the right label required by left label ``s``.
    """

    left: int
    right: int
    edges: tuple
    num_labels: int
    constraints: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        cons = tuple(tuple(int(s) for s in table) for table in self.constraints)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "constraints", cons)
        if self.left < 1 or self.right < 1 or self.num_labels < 1:
            raise ValueError("label cover needs at least one vertex per side and one label")
        if not edges:
            raise ValueError("label cover needs at least one edge")
        if len(cons) != len(edges):
            raise ValueError(f"{len(cons)} constraint tables for {len(edges)} edges")
        for (u, v), table in zip(edges, cons):
            if not (0 <= u < self.left and 0 <= v < self.right):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the graph")
            if len(table) != self.num_labels or any(
                not 0 <= s < self.num_labels for s in table
            ):
                raise ValueError(f"constraint for edge ({u}, {v}) is not a total label map")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        degrees = {u: 0 for u in range(self.left)}
        for u, _ in edges:
            degrees[u] += 1
        if len(set(degrees.values())) != 1:
            raise ValueError("all left vertices must have the same degree")

    @property
    def num_vertices(self) -> int:
        return self.left + self.right


@dataclass(frozen=True)
class Labeling:
    left: tuple
    right: tuple

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(int(s) for s in self.left))
        object.__setattr__(self, "right", tuple(int(s) for s in self.right))

    def satisfies(self, lc: LabelCoverInstance) -> bool:
        if len(self.left) != lc.left or len(self.right) != lc.right:
            return False
        if any(not 0 <= s < lc.num_labels for s in self.left + self.right):
            return False
        return all(
            self.right[v] == table[self.left[u]]
            for (u, v), table in zip(lc.edges, lc.constraints)
        )


def label_cover_gamma(rho) -> int:
    return math.ceil(10 * as_rational(rho))


def _lc_outcome(lc: LabelCoverInstance, side: str, vertex: int, label: int) -> int:
    node = vertex if side == "left" else lc.left + vertex
    return node * lc.num_labels + label


def label_cover_satisfying_action(lc: LabelCoverInstance, label: int) -> int:
    """Index of action ``a_{s, Pi_e(s)}`` for left label ``s`` (same for every type)."""
    return label


def _lc_violating_action(lc: LabelCoverInstance, i: int, s: int, s2: int) -> int:
    k = lc.num_labels
    return k + (i - 1) * k * k + s * k + s2


def gen_from_label_cover(lc: LabelCoverInstance, rho) -> Instance:
    """Instance of the reduction from label cover with ``gamma = ceil(10 rho)``.

    Outcomes: ``omega_{x s}`` for every vertex ``x`` (left block first) and
    label ``s``, then ``omega_0`` (reward 0) and ``omega_1`` (reward 1).
    Actions are indexed identically for every type: first the satisfying
    actions ``a_{s, Pi_e(s)}`` by ``s``; then slot ``(i, s, s')`` for every
    ``i`` in ``1..gamma`` and label pair, holding ``a_{i s s'}`` when
    ``s' != Pi_e(s)`` and a free padding action on ``omega_0`` otherwise;
    finally one free action on ``omega_0`` shared by all types.
    """
    rho = as_rational(rho)
    if rho < 1:
        raise ValueError("rho must be >= 1")
    g = label_cover_gamma(rho)
    k = lc.num_labels
    m = lc.num_vertices * k + 2
    o0, o1 = m - 2, m - 1
    r = [Fraction(0)] * (m - 1) + [Fraction(1)]
    sat_cost = Fraction(1, 2) - (g + 2) * _pow2(-g - 3)

    def free():
        row = [Fraction(0)] * m
        row[o0] = Fraction(1)
        return row

    F, c = [], []
    for (u, v), table in zip(lc.edges, lc.constraints):
        rows, costs = [], []
        for s in range(k):
            row = [Fraction(0)] * m
            row[o1] = Fraction(1, 2)
            row[_lc_outcome(lc, "left", u, s)] += Fraction(1, 4)
            row[_lc_outcome(lc, "right", v, table[s])] += Fraction(1, 4)
            rows.append(row)
            costs.append(sat_cost)
        for i in range(1, g + 1):
            for s in range(k):
                for s2 in range(k):
                    if s2 == table[s]:
                        rows.append(free())
                        costs.append(Fraction(0))
                        continue
                    row = [Fraction(0)] * m
                    row[o1] = _pow2(-i - 1)
                    row[_lc_outcome(lc, "left", u, s)] += _pow2(-i - 2)
                    row[_lc_outcome(lc, "right", v, s2)] += _pow2(-i - 2)
                    row[o0] = 1 - _pow2(-i)
                    rows.append(row)
                    costs.append(_pow2(-i - 1) - (g - i + 2) * _pow2(-g - 3))
        rows.append(free())
        costs.append(Fraction(0))
        F.append(rows)
        c.append(costs)
    ell = len(lc.edges)
    labels = {
        "types": [f"theta_({u},{v})" for u, v in lc.edges],
        "actions": [f"a_sat_{s}" for s in range(k)]
        + [f"a_{i},{s},{s2}" for i in range(1, g + 1) for s in range(k) for s2 in range(k)]
        + ["a_free"],
        "outcomes": [f"omega_L{x},{s}" for x in range(lc.left) for s in range(k)]
        + [f"omega_R{x},{s}" for x in range(lc.right) for s in range(k)]
        + ["omega_0", "omega_1"],
    }
    return Instance([Fraction(1, ell)] * ell, F, c, r, labels)


def completeness_contract_label_cover(lc: LabelCoverInstance, labeling: Labeling, rho) -> Contract:
    """Pay ``1 - (gamma + 2) 2**(-gamma - 3)`` on ``omega_{x, pi(x)}`` for every vertex."""
    if not labeling.satisfies(lc):
        raise ValueError("labeling does not satisfy every edge constraint")
    g = label_cover_gamma(rho)
    m = lc.num_vertices * lc.num_labels + 2
    pay = 1 - (g + 2) * _pow2(-g - 3)
    p = [Fraction(0)] * m
    for u, s in enumerate(labeling.left):
        p[_lc_outcome(lc, "left", u, s)] = pay
    for v, s in enumerate(labeling.right):
        p[_lc_outcome(lc, "right", v, s)] = pay
    return Contract(p)


# -- Random instances ----------------------------------------------------------


def _random_simplex(rng: np.random.Generator, size: int) -> list:
    """``size`` non-negative multiples of ``1/RANDOM_DENOMINATOR`` summing to 1."""
    cuts = np.sort(rng.integers(0, RANDOM_DENOMINATOR + 1, size=size - 1))
    bounds = [0, *cuts.tolist(), RANDOM_DENOMINATOR]
    return [Fraction(b - a, RANDOM_DENOMINATOR) for a, b in zip(bounds, bounds[1:])]


def _random_unit(rng: np.random.Generator, size: int) -> list:
    values = rng.integers(0, RANDOM_DENOMINATOR + 1, size=size).tolist()
    return [Fraction(v, RANDOM_DENOMINATOR) for v in values]


def gen_random(seed: int, ell: int, n: int, m: int) -> Instance:
    """Seeded random instance with dyadic entries (denominator ``2**16``).

    Action 0 has zero cost for every type.  The cost of any other action is
    a random fraction of its reward advantage over action 0, rounded down
    to the dyadic grid, so that costly actions are often worth implementing.
    """
    if min(ell, n, m) < 1:
        raise ValueError("dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    mu = _random_simplex(rng, ell)
    r = _random_unit(rng, m)
    F = [[_random_simplex(rng, m) for _ in range(n)] for _ in range(ell)]
    c = []
    for rows in F:
        rewards = [sum(f * x for f, x in zip(dist, r)) for dist in rows]
        costs = [Fraction(0)]
        for a in range(1, n):
            share = int(rng.integers(0, RANDOM_DENOMINATOR + 1))
            gain = max(rewards[a] - rewards[0], Fraction(0))
            costs.append(Fraction(math.floor(share * gain), RANDOM_DENOMINATOR))
        c.append(costs)
    return Instance(mu, F, c, r)


def random_corpus(count: int, max_types: int, max_actions: int, max_outcomes: int, seed: int = 0):
    """``count`` random instances with dimensions drawn up to the given maxima.

    The number of types is drawn from ``1..max_types``; actions and outcomes
    from ``2..max`` (single-action or single-outcome instances are trivial).
    Yields ``(instance_seed, instance)``; fully determined by ``seed``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(count):
        ell = int(rng.integers(1, max_types + 1))
        n = int(rng.integers(min(2, max_actions), max_actions + 1))
        m = int(rng.integers(min(2, max_outcomes), max_outcomes + 1))
        s = int(rng.integers(0, 2**31))
        yield s, gen_random(s, ell, n, m)
