"""Mechanisms as black boxes for the axiom harness.

A mechanism is described by its index sets ``K_1..K_m`` (offer labels per
commodity) and a clearing map from a list of trader offers to a list of
returned bundles.  Offers are dicts ``label -> Fraction``; missing labels
are zero.

Besides the G-mechanism adapter this module builds mechanisms from a
column-stochastic matrix ``N_b`` (one column per index), which is how the
planted-fault fixtures are made: each breaks exactly one condition while
keeping the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from . import linalg
from .errors import InfeasibleError
from .graphs import DirectedGraph, chorded_triangle, complete, cycle, star
from .pricing import MarketState, OfferVector, prices, return_vector

Offer = Mapping[Hashable, Fraction]
Bundle = tuple[Fraction, ...]


@dataclass
class MechanismUnderTest:
    """Index sets plus either a one-trader return map or a full clearing map.

    ``return_map(a, b)`` is the return to offer ``a`` when the aggregate of
    all offers is ``b``.  ``clearing`` overrides it for mechanisms whose
    returns depend on more than own offer and aggregate.  ``price_map`` is
    supplied by mechanisms that publish prices.
    """

    name: str
    index_sets: list[list[Hashable]]
    return_map: Callable[[Offer, Offer], Bundle] | None = None
    clearing: Callable[[Sequence[Offer]], list[Bundle]] | None = None
    price_map: Callable[[Offer], Sequence[Fraction]] | None = None
    target: str | None = None

    @property
    def m(self) -> int:
        return len(self.index_sets)

    @property
    def labels(self) -> list[Hashable]:
        return [h for ks in self.index_sets for h in ks]

    def source(self, label) -> int:
        for i, ks in enumerate(self.index_sets, start=1):
            if label in ks:
                return i
        raise KeyError(label)

    def aggregate(self, offer: Offer) -> Bundle:
        """Bundle given up: total offered of each commodity."""
        out = [Fraction(0)] * self.m
        for i, ks in enumerate(self.index_sets):
            out[i] = sum((Fraction(offer.get(h, 0)) for h in ks), Fraction(0))
        return tuple(out)

    def total(self, offers: Sequence[Offer]) -> dict:
        return {h: sum((Fraction(a.get(h, 0)) for a in offers), Fraction(0)) for h in self.labels}

    def clear(self, offers: Sequence[Offer]) -> list[Bundle]:
        if self.clearing is not None:
            return [tuple(r) for r in self.clearing(offers)]
        b = self.total(offers)
        return [tuple(self.return_map(a, b)) for a in offers]


def g_mechanism(g: DirectedGraph, name: str | None = None) -> MechanismUnderTest:
    index_sets = [[e for e in g.edges if e[0] == i] for i in range(1, g.m + 1)]

    def state(b: Offer) -> MarketState:
        return MarketState(g, {e: b.get(e, 0) for e in g.edges})

    def offer(a: Offer) -> OfferVector:
        return OfferVector(g, {e: v for e, v in a.items() if v})

    def clearing(offers):
        b = state({e: sum((Fraction(a.get(e, 0)) for a in offers), Fraction(0)) for e in g.edges})
        p = prices(g, b)
        return [return_vector(g, offer(a), b, p) for a in offers]

    return MechanismUnderTest(
        name=name or f"G{g}",
        index_sets=index_sets,
        return_map=lambda a, b: return_vector(g, offer(a), state(b)),
        clearing=clearing,
        price_map=lambda b: prices(g, state(b)).prices,
    )


def builtin_mechanisms() -> list[MechanismUnderTest]:
    """The named G-mechanisms with ``m <= 4`` shipped for verification runs."""
    graphs = [
        ("two-cycle", cycle(2)),
        ("cycle-3", cycle(3)),
        ("star-3", star(3)),
        ("complete-3", complete(3)),
        ("chorded-triangle", chorded_triangle()),
        ("cycle-4", cycle(4)),
        ("star-4", star(4)),
        ("complete-4", complete(4)),
    ]
    return [g_mechanism(g, name) for name, g in graphs]


# Column-stochastic construction -------------------------------------------


def column_prices(m: int, sources: Mapping, columns: Mapping, b: Offer) -> tuple[Fraction, ...]:
    """Prices solving ``C_b p = Delta_b p`` with ``C_b = N_b D_b A^t``."""
    c = [[Fraction(0)] * m for _ in range(m)]
    delta = [Fraction(0)] * m
    for h, s in sources.items():
        bh = Fraction(b[h])
        delta[s - 1] += bh
        for r in range(m):
            c[r][s - 1] += columns[h][r] * bh
    rows = [[c[r][s] - (delta[r] if r == s else 0) for s in range(m)] for r in range(m)]
    basis = linalg.nullspace(rows)
    if len(basis) != 1:
        raise InfeasibleError("price equation does not determine a unique ray")
    v = basis[0]
    if v[0] < 0:
        v = [-x for x in v]
    if any(x <= 0 for x in v):
        raise InfeasibleError("price ray is not strictly positive")
    return tuple(x / v[0] for x in v)


def column_mechanism(
    name: str,
    m: int,
    sources: Mapping[Hashable, int],
    column_map: Callable[[Offer], Mapping[Hashable, Sequence[Fraction]]],
    target: str | None = None,
) -> MechanismUnderTest:
    """Mechanism with returns ``M_b a`` where ``M_b = D_p^{-1} N_b E_p``."""
    index_sets = [[h for h, s in sources.items() if s == i] for i in range(1, m + 1)]

    def return_map(a: Offer, b: Offer) -> Bundle:
        cols = column_map(b)
        p = column_prices(m, sources, cols, b)
        out = [Fraction(0)] * m
        for h, v in a.items():
            if v:
                s = sources[h]
                for r in range(m):
                    out[r] += cols[h][r] * p[s - 1] * Fraction(v) / p[r]
        return tuple(out)

    return MechanismUnderTest(name, index_sets, return_map=return_map, target=target)


def _unit(m: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(r == j - 1)) for r in range(m))


# Planted faults ------------------------------------------------------------
#
# The switching faults share one index set on three commodities: every
# ordered pair has a pure market, and commodity 1 has an extra index "1>*"
# whose proceeds go to commodity 2 or 3 depending on a rule.

_SWITCH_SOURCES = {"1>2": 1, "1>3": 1, "1>*": 1, "2>1": 2, "2>3": 2, "3>1": 3, "3>2": 3}


def _switch_columns(star_target: int) -> dict:
    cols = {h: _unit(3, int(h[2])) for h in _SWITCH_SOURCES if h != "1>*"}
    cols["1>*"] = _unit(3, star_target)
    return cols


def _switch_mechanism(star_target: int) -> MechanismUnderTest:
    cols = _switch_columns(star_target)
    return column_mechanism(f"switch-{star_target}", 3, _SWITCH_SOURCES, lambda b: cols)


def wrong_price_fault() -> MechanismUnderTest:
    """Star on three goods trading at prices ``1 / (total offered of i)``.

    Value is conserved at those prices, so nobody is short-changed in
    value terms, but the prices do not clear the goods themselves.
    """
    g = star(3)
    index_sets = [[e for e in g.edges if e[0] == i] for i in range(1, 4)]

    def return_map(a, b):
        supply = [sum((Fraction(b[e]) for e in ks), Fraction(0)) for ks in index_sets]
        out = [Fraction(0)] * 3
        for (i, j), v in a.items():
            out[j - 1] += Fraction(v) / supply[i - 1] * supply[j - 1]
        return tuple(out)

    return MechanismUnderTest("wrong-prices", index_sets, return_map=return_map, target="conservation")


def trader_order_fault() -> MechanismUnderTest:
    """Routes index ``1>*`` by whether the first trader holds half of it."""
    x, y = _switch_mechanism(2), _switch_mechanism(3)

    def clearing(offers):
        b = x.total(offers)
        share = Fraction(offers[0].get("1>*", 0)) / b["1>*"]
        return (x if share >= Fraction(1, 2) else y).clear(offers)

    return MechanismUnderTest("first-trader-rule", x.index_sets, clearing=clearing, target="anonymity")


def trader_count_fault() -> MechanismUnderTest:
    """Routes index ``1>*`` by the parity of the number of traders."""
    x, y = _switch_mechanism(2), _switch_mechanism(3)

    def clearing(offers):
        return (x if len(offers) % 2 == 0 else y).clear(offers)

    return MechanismUnderTest("trader-count-rule", x.index_sets, clearing=clearing, target="aggregation")


def unit_dependent_fault() -> MechanismUnderTest:
    """Index ``1>*`` splits its proceeds by ``t = b/(1+b)``, which depends on units."""

    def column_map(b):
        cols = _switch_columns(2)
        t = Fraction(b["1>*"]) / (1 + Fraction(b["1>*"]))
        cols["1>*"] = (Fraction(0), t, 1 - t)
        return cols

    return column_mechanism("unit-dependent", 3, _SWITCH_SOURCES, column_map, target="invariance")


def half_refund_fault() -> MechanismUnderTest:
    """Two goods; index ``1>1`` hands back half, the other half tops up the 2->1 market."""
    index_sets = [["1>2", "1>1"], ["2>1"]]

    def return_map(a, b):
        y = Fraction(b["2>1"]) / Fraction(b["1>2"])
        u = (Fraction(b["1>2"]) + Fraction(b["1>1"]) / 2) / Fraction(b["2>1"])
        r1 = Fraction(a.get("1>1", 0)) / 2 + u * Fraction(a.get("2>1", 0))
        r2 = y * Fraction(a.get("1>2", 0))
        return (r1, r2)

    return MechanismUnderTest("half-refund", index_sets, return_map=return_map, target="nondissipation")


def bundled_fault() -> MechanismUnderTest:
    """Commodity 1 can only be offered for an even split of goods 2 and 3."""
    sources = {"1>23": 1, "2>1": 2, "2>3": 2, "3>1": 3, "3>2": 3}
    cols = {h: _unit(3, int(h[2])) for h in sources if h != "1>23"}
    cols["1>23"] = (Fraction(0), Fraction(1, 2), Fraction(1, 2))
    return column_mechanism("bundled", 3, sources, lambda b: cols, target="flexibility")


def planted_faults() -> list[MechanismUnderTest]:
    return [
        wrong_price_fault(),
        trader_order_fault(),
        trader_count_fault(),
        unit_dependent_fault(),
        half_refund_fault(),
        bundled_fault(),
    ]
