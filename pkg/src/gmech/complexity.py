"""Index, time and price complexity of G-mechanisms.

Prices are ratios of tree polynomials ``w_i`` (sums over i-trees of edge
monomials), so whether the exchange rate ``p_i/p_j`` depends on the market
entry at edge ``e`` is the polynomial identity question

    d(w_i)/dz_e * w_j  ==  w_i * d(w_j)/dz_e ?

All tree-polynomial coefficients are positive, so the identity holds on the
open positive orthant iff it holds as a polynomial identity.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InvalidQueryError
from .graphs import DirectedGraph, Edge, distance_matrix, edge_index, enumerate_itrees, require_connected
from .polynomials import Polynomial
from .pricing import MarketState, price_by_solve


@dataclass(frozen=True)
class TreePolynomial:
    """Sum of the edge monomials of all i-trees, each with coefficient 1."""

    root: int
    monomials: frozenset  # of edge bitmasks

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.from_edge_sets(self.monomials)


@lru_cache(maxsize=4096)
def _tree_polynomials(m: int, mask: int) -> tuple[TreePolynomial, ...]:
    g = DirectedGraph(m, mask)
    return tuple(
        TreePolynomial(root, frozenset(t.mask(m) for t in enumerate_itrees(g, root)))
        for root in range(1, m + 1)
    )


def tree_polynomials(g: DirectedGraph) -> tuple[TreePolynomial, ...]:
    """One TreePolynomial per root ``1..m``; variable ``k`` is edge ``edge_list(m)[k]``."""
    require_connected(g)
    return _tree_polynomials(g.m, g.mask)


def tree_balance_sides(g: DirectedGraph) -> tuple[list[Polynomial], list[Polynomial]]:
    """Both sides of ``Z w = Delta_Z w`` for ``Z = C_b``, the transposed edge-weight matrix.

    ``Z[r][s]`` is the variable of edge ``s -> r`` and ``Delta_Z`` holds the
    column sums of ``Z`` (total offered out of each vertex).  Row ``r`` reads
    ``sum_s z_sr w_s = (sum_s z_rs) w_r``.
    """
    index = edge_index(g.m)
    w = [t.polynomial for t in tree_polynomials(g)]
    lhs, rhs = [], []
    for r in range(1, g.m + 1):
        left = Polynomial()
        for s in g.in_neighbors(r):
            left = left + Polynomial.variable(index[(s, r)]) * w[s - 1]
        col_sum = Polynomial()
        for s in g.out_neighbors(r):
            col_sum = col_sum + Polynomial.variable(index[(r, s)])
        lhs.append(left)
        rhs.append(col_sum * w[r - 1])
    return lhs, rhs


def _depends(w_i: Polynomial, w_j: Polynomial, var: int) -> bool:
    """Decide ``d_e(w_i) w_j != w_i d_e(w_j)`` for tree polynomials.

    Tree polynomials are linear in each edge variable, so with
    ``w = A + z_e B`` the difference reduces to ``B_i A_j - A_i B_j``; the
    ``z_e B_i B_j`` terms cancel before being formed.
    """
    a_i, b_i = w_i.split(var)
    a_j, b_j = w_j.split(var)
    if not b_i and not b_j:
        return False
    if not b_i or not b_j:
        # positive coefficients: exactly one side of the identity vanishes
        return True
    return _product_terms(b_i, a_j) != _product_terms(a_i, b_j)


def _product_terms(p: Polynomial, q: Polynomial) -> dict:
    # inputs are multilinear, so packed exponents never exceed 2
    terms = defaultdict(int)
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            terms[m1 + m2] += c1 * c2
    return terms


def _check_pair(g: DirectedGraph, i: int, j: int):
    for v in (i, j):
        if not 1 <= v <= g.m:
            raise InvalidQueryError(f"commodity {v} outside 1..{g.m}")
    if i == j:
        raise InvalidQueryError("price complexity needs distinct commodities")


def influential_edges(g: DirectedGraph, i: int, j: int) -> frozenset:
    """Edges whose market entry the exchange rate ``p_i/p_j`` depends on."""
    _check_pair(g, i, j)
    w = tree_polynomials(g)
    wi, wj = w[i - 1].polynomial, w[j - 1].polynomial
    index = edge_index(g.m)
    return frozenset(e for e in g.edges if _depends(wi, wj, index[e]))


def pi_symbolic(g: DirectedGraph, i: int, j: int) -> int:
    return len(influential_edges(g, i, j))


def pi_matrix(g: DirectedGraph) -> list[list[int]]:
    """Symbolic price complexity for all pairs, 0-based, zero diagonal."""
    w = [t.polynomial for t in tree_polynomials(g)]
    index = edge_index(g.m)
    variables = [index[e] for e in g.edges]
    out = [[0] * g.m for _ in range(g.m)]
    for i in range(g.m):
        for j in range(i + 1, g.m):
            count = sum(_depends(w[i], w[j], v) for v in variables)
            out[i][j] = out[j][i] = count
    return out


def _random_positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3))


def influence_numeric(g: DirectedGraph, trials: int, seed: int) -> dict[tuple[int, int], set]:
    """Edges observed to move ``p_i/p_j`` under random single-entry perturbations.

    Uses the linear-solve price oracle only.  Each trial draws a random
    market state and, per edge, one perturbed copy; an edge is recorded for
    every pair whose exchange rate changed.
    """
    if trials < 1:
        raise InvalidQueryError("need at least one trial")
    require_connected(g)
    rng = random.Random(seed)
    found = {(i, j): set() for i in range(1, g.m + 1) for j in range(1, g.m + 1) if i != j}
    for _ in range(trials):
        base = {e: _random_positive(rng) for e in g.edges}
        p = price_by_solve(g, MarketState(g, base))
        for e in g.edges:
            moved = dict(base)
            while moved[e] == base[e]:
                moved[e] = _random_positive(rng)
            q = price_by_solve(g, MarketState(g, moved))
            for (i, j), hits in found.items():
                if p.ratio(i, j) != q.ratio(i, j):
                    hits.add(e)
    return found


def pi_numeric(g: DirectedGraph, i: int, j: int, trials: int = 8, seed: int = 0) -> int:
    """Randomized lower bound on the price complexity of pair ``(i, j)``."""
    _check_pair(g, i, j)
    return len(influence_numeric(g, trials, seed)[(i, j)])


def pi_numeric_matrix(g: DirectedGraph, trials: int = 8, seed: int = 0) -> list[list[int]]:
    """All pairs from one perturbation sweep; entry ``[i-1][j-1]`` equals ``pi_numeric(g, i, j, trials, seed)``."""
    found = influence_numeric(g, trials, seed)
    out = [[0] * g.m for _ in range(g.m)]
    for (i, j), hits in found.items():
        out[i - 1][j - 1] = len(hits)
    return out


def index_complexity(g: DirectedGraph) -> tuple[int, ...]:
    return tuple(g.out_degree(i) for i in range(1, g.m + 1))


def tau_matrix(g: DirectedGraph) -> list[list[int]]:
    """Shortest conversion chains for every pair, 0-based, zero diagonal."""
    require_connected(g)
    return [[int(d) for d in row] for row in distance_matrix(g)]


@dataclass(frozen=True)
class ComplexityProfile:
    tau: tuple[tuple[int, ...], ...]
    pi: tuple[tuple[int, ...], ...]
    k: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def tau_max(self) -> int:
        return max(self.tau[i][j] for i in range(self.m) for j in range(self.m) if i != j)

    @property
    def pi_max(self) -> int:
        return max(self.pi[i][j] for i in range(self.m) for j in range(self.m) if i != j)

    @property
    def k_total(self) -> int:
        return sum(self.k)

    def vector(self) -> tuple[int, ...]:
        """Off-diagonal tau, off-diagonal pi, then k; the coordinates compared by dominance."""
        off = [(i, j) for i in range(self.m) for j in range(self.m) if i != j]
        return tuple(self.tau[i][j] for i, j in off) + tuple(self.pi[i][j] for i, j in off) + self.k

    @classmethod
    def from_vector(cls, m: int, vec: Sequence[int]) -> "ComplexityProfile":
        off = [(i, j) for i in range(m) for j in range(m) if i != j]
        n = len(off)
        tau = [[0] * m for _ in range(m)]
        pi = [[0] * m for _ in range(m)]
        for k, (i, j) in enumerate(off):
            tau[i][j] = int(vec[k])
            pi[i][j] = int(vec[n + k])
        return cls(tuple(map(tuple, tau)), tuple(map(tuple, pi)), tuple(int(x) for x in vec[2 * n:]))

    def permuted(self, perm: Sequence[int]) -> "ComplexityProfile":
        """Profile of the relabeled graph; ``perm[i-1]`` is the new label of ``i``."""
        m = self.m
        inv = [0] * m
        for old, new in enumerate(perm):
            inv[new - 1] = old
        tau = tuple(tuple(self.tau[inv[a]][inv[b]] for b in range(m)) for a in range(m))
        pi = tuple(tuple(self.pi[inv[a]][inv[b]] for b in range(m)) for a in range(m))
        return ComplexityProfile(tau, pi, tuple(self.k[inv[a]] for a in range(m)))

    def to_dict(self) -> dict:
        return {
            "tau": [list(r) for r in self.tau],
            "pi": [list(r) for r in self.pi],
            "k": list(self.k),
            "tau_max": self.tau_max,
            "pi_max": self.pi_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComplexityProfile":
        return cls(tuple(map(tuple, d["tau"])), tuple(map(tuple, d["pi"])), tuple(d["k"]))


def profile(g: DirectedGraph) -> ComplexityProfile:
    return ComplexityProfile(tuple(map(tuple, tau_matrix(g))), tuple(map(tuple, pi_matrix(g))), index_complexity(g))
