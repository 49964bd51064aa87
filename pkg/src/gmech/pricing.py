"""Exact price formation, returns, clearing and conversion for G-mechanisms.

Edge ``(i, j)`` of the graph is a market where commodity ``i`` is offered
for commodity ``j``.  For a strictly positive market state ``b`` the prices
``p`` balance every commodity::

    sum_i p_i b_ij = p_j sum_i b_ji

and an offer ``a`` returns ``r_i = (sum_j p_j a_ji) / p_i`` units of ``i``.
Everything is computed in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .errors import DomainError, InfeasibleError, InvalidQueryError
from .graphs import DirectedGraph, Edge, enumerate_itrees, require_connected, shortest_path
from .rational import format_edge_key


def _coerce_entries(graph: DirectedGraph, entries: Mapping) -> dict[Edge, Fraction]:
    out = {}
    for e, v in entries.items():
        e = (int(e[0]), int(e[1]))
        if not graph.has_edge(*e):
            raise DomainError(f"entry on non-edge {format_edge_key(e)} of {graph}")
        if isinstance(v, float):
            raise DomainError("floats are not accepted; use Fraction or int")
        out[e] = Fraction(v)
    return out


@dataclass(frozen=True)
class OfferVector:
    """Nonnegative offer at each market; missing edges count as zero."""

    graph: DirectedGraph
    entries: Mapping[Edge, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        entries = _coerce_entries(self.graph, self.entries)
        neg = [e for e, v in entries.items() if v < 0]
        if neg:
            raise DomainError(f"negative offer at {format_edge_key(neg[0])}")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, edge: Edge) -> Fraction:
        return self.entries.get(edge, Fraction(0))

    def aggregate(self) -> tuple[Fraction, ...]:
        """Total offered of each commodity (the bundle given up)."""
        out = [Fraction(0)] * self.graph.m
        for (i, _), v in self.entries.items():
            out[i - 1] += v
        return tuple(out)

    def scaled(self, t) -> "OfferVector":
        return OfferVector(self.graph, {e: v * t for e, v in self.entries.items()})

    def __add__(self, other: "OfferVector") -> "OfferVector":
        keys = set(self.entries) | set(other.entries)
        return OfferVector(self.graph, {e: self[e] + other[e] for e in keys})


@dataclass(frozen=True)
class MarketState:
    """Aggregate offers; strictly positive on every edge of the graph."""

    graph: DirectedGraph
    entries: Mapping[Edge, Fraction]

    def __post_init__(self):
        entries = _coerce_entries(self.graph, self.entries)
        for e in self.graph.edges:
            if e not in entries:
                raise DomainError(f"market state missing edge {format_edge_key(e)}")
            if entries[e] <= 0:
                raise DomainError(f"market state must be positive, edge {format_edge_key(e)} has {entries[e]}")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, edge: Edge) -> Fraction:
        return self.entries[edge]

    def scaled(self, t) -> "MarketState":
        return MarketState(self.graph, {e: v * t for e, v in self.entries.items()})

    def as_offer(self) -> OfferVector:
        return OfferVector(self.graph, self.entries)


def aggregate_offers(graph: DirectedGraph, offers: Sequence[OfferVector]) -> MarketState:
    """Sum of trader offers as a market state.

    Raises InfeasibleError naming the first edge where nobody offers.
    """
    total = {e: Fraction(0) for e in graph.edges}
    for a in offers:
        for e, v in a.entries.items():
            total[e] += v
    for e in graph.edges:
        if total[e] == 0:
            raise InfeasibleError(f"aggregate offer is zero at edge {format_edge_key(e)}")
    return MarketState(graph, total)


@dataclass(frozen=True)
class PriceRay:
    """Prices up to scale, normalized so commodity 1 costs exactly 1.

    Only the ratios ``p_i / p_j`` carry meaning.
    """

    prices: tuple[Fraction, ...]

    @classmethod
    def normalized(cls, values: Sequence) -> "PriceRay":
        values = [Fraction(v) for v in values]
        if any(v <= 0 for v in values):
            raise InfeasibleError("price vector is not strictly positive")
        return cls(tuple(v / values[0] for v in values))

    def __getitem__(self, commodity: int) -> Fraction:
        return self.prices[commodity - 1]

    def __len__(self):
        return len(self.prices)

    def ratio(self, i: int, j: int) -> Fraction:
        return self[i] / self[j]

    def value(self, bundle: Sequence) -> Fraction:
        return sum((p * x for p, x in zip(self.prices, bundle)), Fraction(0))


def tree_weights(g: DirectedGraph, b: MarketState) -> list[Fraction]:
    """``w_i``: sum over i-trees of the product of market entries on tree edges."""
    require_connected(g)
    out = []
    for root in range(1, g.m + 1):
        total = Fraction(0)
        for tree in enumerate_itrees(g, root):
            total += math.prod((b[e] for e in tree.edges), start=Fraction(1))
        out.append(total)
    return out


def price_by_trees(g: DirectedGraph, b: MarketState) -> PriceRay:
    return PriceRay.normalized(tree_weights(g, b))


def balance_matrix(g: DirectedGraph, b: MarketState) -> list[list[Fraction]]:
    """Row j: value chasing j minus value of j on offer, as a linear form in p."""
    m = g.m
    rows = [[Fraction(0)] * m for _ in range(m)]
    for (i, j), v in b.entries.items():
        rows[j - 1][i - 1] += v
        rows[i - 1][i - 1] -= v
    return rows


def price_by_solve(g: DirectedGraph, b: MarketState) -> PriceRay:
    """Solve the balance equations with the normalization row ``p_1 = 1``."""
    require_connected(g)
    rows = balance_matrix(g, b)
    if linalg.rank(rows) != g.m - 1:
        raise InfeasibleError("balance system does not have a one-dimensional solution space")
    pin = [Fraction(1)] + [Fraction(0)] * (g.m - 1)
    p = linalg.solve(rows + [pin], [Fraction(0)] * g.m + [Fraction(1)])
    return PriceRay.normalized(p)


prices = price_by_solve


def _check_offer(g: DirectedGraph, a: OfferVector, b: MarketState):
    if a.graph != g or b.graph != g:
        raise DomainError("offer, market state and graph disagree")


def return_vector(g: DirectedGraph, a: OfferVector, b: MarketState, p: PriceRay | None = None) -> tuple[Fraction, ...]:
    """Bundle returned for offer ``a`` at market state ``b``.

    ``a <= b`` is not required; the formula is linear in ``a``.
    """
    _check_offer(g, a, b)
    p = prices(g, b) if p is None else p
    value_in = [Fraction(0)] * g.m
    for (i, j), v in a.entries.items():
        value_in[j - 1] += p[i] * v
    return tuple(value_in[k] / p.prices[k] for k in range(g.m))


def net_trade(g: DirectedGraph, a: OfferVector, b: MarketState, p: PriceRay | None = None) -> tuple[Fraction, ...]:
    r = return_vector(g, a, b, p)
    return tuple(x - y for x, y in zip(r, a.aggregate()))


def clear(g: DirectedGraph, offers: Sequence[OfferVector]) -> list[tuple[Fraction, ...]]:
    """Returns to each trader when all offers meet in one market state."""
    for a in offers:
        if a.graph != g:
            raise DomainError("offer built on a different graph")
    b = aggregate_offers(g, offers)
    p = prices(g, b)
    return [return_vector(g, a, b, p) for a in offers]


@dataclass(frozen=True)
class StochasticDecomposition:
    """``M_b`` (returns per unit offer) and the column-stochastic ``N_b``.

    Columns follow ``edges``; rows are commodities ``1..m``.
    """

    edges: tuple[Edge, ...]
    prices: PriceRay
    Mb: tuple[tuple[Fraction, ...], ...]
    Nb: tuple[tuple[Fraction, ...], ...]

    def column(self, matrix: str, edge: Edge) -> tuple[Fraction, ...]:
        k = self.edges.index(edge)
        return tuple(row[k] for row in getattr(self, matrix))

    def is_column_stochastic(self) -> bool:
        return all(sum(col) == 1 and min(col) >= 0 for col in zip(*self.Nb))


def stochastic_decomposition(g: DirectedGraph, b: MarketState) -> StochasticDecomposition:
    """``M_b`` from unit offers, then ``N_b = D_p M_b E_p^{-1}``."""
    p = prices(g, b)
    edges = g.edges
    cols = [return_vector(g, OfferVector(g, {e: 1}), b, p) for e in edges]
    mb = tuple(tuple(col[r] for col in cols) for r in range(g.m))
    nb = tuple(
        tuple(p.prices[r] * mb[r][k] / p[edges[k][0]] for k in range(len(edges)))
        for r in range(g.m)
    )
    return StochasticDecomposition(edges, p, mb, nb)


@dataclass(frozen=True)
class ConversionPlan:
    """Single-edge offers chained along a path; each step offers what the last returned."""

    steps: tuple[tuple[Edge, Fraction], ...]
    final_amount: Fraction

    @property
    def path(self) -> list[int]:
        return [self.steps[0][0][0]] + [e[1] for e, _ in self.steps]


def convert_along(g: DirectedGraph, path: Sequence[int], b: MarketState, amount) -> ConversionPlan:
    """Walk ``amount`` of ``path[0]`` along the given vertex path at fixed ``b``."""
    p = prices(g, b)
    amount = Fraction(amount)
    steps = []
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise InvalidQueryError(f"{u}{v} is not an edge of {g}")
        steps.append(((u, v), amount))
        amount = return_vector(g, OfferVector(g, {(u, v): amount}), b, p)[v - 1]
    return ConversionPlan(tuple(steps), amount)


def convert(g: DirectedGraph, i: int, j: int, b: MarketState, amount) -> ConversionPlan:
    """Turn ``amount`` of ``i`` into ``j`` along the lexicographically smallest shortest path."""
    if i == j:
        raise InvalidQueryError("conversion needs distinct commodities")
    if Fraction(amount) <= 0:
        raise DomainError("conversion amount must be positive")
    require_connected(g)
    return convert_along(g, shortest_path(g, i, j), b, amount)
