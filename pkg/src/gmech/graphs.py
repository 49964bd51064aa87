"""Directed simple graphs on commodities ``1..m`` stored as edge bitmasks.

Edges of the complete graph on ``m`` vertices are numbered in
lexicographic order ``(1,2), (1,3), ..., (m, m-1)``; a graph is the integer
whose set bits are its edges.  Commodities are 1-based everywhere in the
public API.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import InfeasibleError, InvalidQueryError, MalformedInputError, ResourceLimitError

Edge = tuple[int, int]

CANONICAL_BOUND = 7
EXHAUSTIVE_BOUND = 5


@lru_cache(maxsize=None)
def edge_list(m: int) -> tuple[Edge, ...]:
    return tuple((i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i != j)


@lru_cache(maxsize=None)
def edge_index(m: int) -> dict[Edge, int]:
    return {e: k for k, e in enumerate(edge_list(m))}


@dataclass(frozen=True)
class DirectedGraph:
    """Loop-free directed graph; ``mask`` has one bit per edge of ``edge_list(m)``."""

    m: int
    mask: int

    def __post_init__(self):
        if self.m < 2:
            raise MalformedInputError(f"need at least 2 commodities, got m={self.m}")
        if self.mask < 0 or self.mask >> (self.m * (self.m - 1)):
            raise MalformedInputError("mask has bits outside the edge range")

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[Edge]) -> "DirectedGraph":
        index = edge_index(m) if m >= 2 else {}
        mask = 0
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise MalformedInputError(f"loop {i}{j} not allowed")
            if not (1 <= i <= m and 1 <= j <= m):
                raise MalformedInputError(f"edge {i}{j} outside 1..{m}")
            bit = 1 << index[(i, j)]
            if mask & bit:
                raise MalformedInputError(f"duplicate edge {i}{j}")
            mask |= bit
        return cls(m, mask)

    @property
    def edges(self) -> tuple[Edge, ...]:
        el = edge_list(self.m)
        return tuple(el[k] for k in range(len(el)) if self.mask >> k & 1)

    @property
    def n_edges(self) -> int:
        return bin(self.mask).count("1")

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return bool(self.mask >> edge_index(self.m)[(i, j)] & 1)

    def out_neighbors(self, i: int) -> list[int]:
        return [j for j in range(1, self.m + 1) if self.has_edge(i, j)]

    def in_neighbors(self, j: int) -> list[int]:
        return [i for i in range(1, self.m + 1) if self.has_edge(i, j)]

    def out_degree(self, i: int) -> int:
        return len(self.out_neighbors(i))

    def relabel(self, perm) -> "DirectedGraph":
        """Image under ``perm``, a mapping old label -> new label (1-based)."""
        perm = _as_perm(self.m, perm)
        return DirectedGraph.from_edges(self.m, [(perm[i], perm[j]) for i, j in self.edges])

    def with_edge(self, i: int, j: int) -> "DirectedGraph":
        return DirectedGraph(self.m, self.mask | 1 << edge_index(self.m)[(i, j)])

    def to_json(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "DirectedGraph":
        if not isinstance(obj, dict) or "m" not in obj or "edges" not in obj:
            raise MalformedInputError("graph JSON needs 'm' and 'edges'")
        m = obj["m"]
        if not isinstance(m, int) or isinstance(m, bool):
            raise MalformedInputError("'m' must be an integer")
        edges = obj["edges"]
        if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e) for e in edges
        ):
            raise MalformedInputError("'edges' must be a list of [i, j] integer pairs")
        return cls.from_edges(m, [tuple(e) for e in edges])

    def __str__(self):
        return "{" + ",".join(f"{i}{j}" if self.m < 10 else f"{i}-{j}" for i, j in self.edges) + "}"


def _as_perm(m: int, perm) -> dict[int, int]:
    if isinstance(perm, dict):
        mapping = dict(perm)
    else:
        mapping = {i + 1: int(v) for i, v in enumerate(perm)}
    if sorted(mapping) != list(range(1, m + 1)) or sorted(mapping.values()) != list(range(1, m + 1)):
        raise MalformedInputError(f"not a permutation of 1..{m}: {perm!r}")
    return mapping


def star(m: int, center: int | None = None) -> DirectedGraph:
    """Edges ``{ci, ic : i != c}``; the default center is commodity ``m``."""
    c = m if center is None else center
    return DirectedGraph.from_edges(m, [e for i in range(1, m + 1) if i != c for e in ((i, c), (c, i))])


def cycle(m: int) -> DirectedGraph:
    return DirectedGraph.from_edges(m, [(i, i % m + 1) for i in range(1, m + 1)])


def complete(m: int) -> DirectedGraph:
    return DirectedGraph(m, (1 << m * (m - 1)) - 1)


def chorded_triangle() -> DirectedGraph:
    """The 3-cycle 1->2->3->1 plus the reverse chord 3->2."""
    return DirectedGraph.from_edges(3, [(1, 2), (2, 3), (3, 1), (3, 2)])


def _check_vertex(g: DirectedGraph, v: int):
    if not 1 <= v <= g.m:
        raise InvalidQueryError(f"commodity {v} outside 1..{g.m}")


def _bfs(g: DirectedGraph, source: int, reverse: bool = False) -> list[float]:
    """Hop distances from ``source`` (to ``source`` if reverse), index 0 unused."""
    dist = [math.inf] * (g.m + 1)
    dist[source] = 0
    queue = deque([source])
    step = g.in_neighbors if reverse else g.out_neighbors
    while queue:
        v = queue.popleft()
        for w in step(v):
            if dist[w] == math.inf:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def is_connected(g: DirectedGraph) -> bool:
    """Strong connectivity: a directed path between every ordered pair."""
    return all(d < math.inf for d in _bfs(g, 1)[1:]) and all(d < math.inf for d in _bfs(g, 1, reverse=True)[1:])


def require_connected(g: DirectedGraph):
    if not is_connected(g):
        raise InfeasibleError(f"graph {g} is not strongly connected")


def shortest_path_length(g: DirectedGraph, i: int, j: int) -> float:
    """Number of edges on a shortest path ``i -> j``; ``math.inf`` if unreachable."""
    _check_vertex(g, i)
    _check_vertex(g, j)
    if i == j:
        raise InvalidQueryError("shortest path needs distinct endpoints")
    return _bfs(g, i)[j]


def distance_matrix(g: DirectedGraph) -> list[list[float]]:
    """All-pairs hop distances, 0-based rows/columns, zeros on the diagonal."""
    return [_bfs(g, i)[1:] for i in range(1, g.m + 1)]


def shortest_path(g: DirectedGraph, i: int, j: int) -> list[int]:
    """Lexicographically smallest vertex sequence among shortest ``i -> j`` paths."""
    d = shortest_path_length(g, i, j)
    if d == math.inf:
        raise InfeasibleError(f"no path from {i} to {j} in {g}")
    to_j = _bfs(g, j, reverse=True)
    path = [i]
    v = i
    while v != j:
        v = min(w for w in g.out_neighbors(v) if to_j[w] == to_j[v] - 1)
        path.append(v)
    return path


@dataclass(frozen=True)
class ITree:
    """Spanning in-arborescence: every vertex has a directed path to ``root``."""

    root: int
    edges: frozenset

    def mask(self, m: int) -> int:
        index = edge_index(m)
        return sum(1 << index[e] for e in self.edges)


def is_itree(m: int, root: int, edges) -> bool:
    """Direct check of the defining property, independent of the enumerator."""
    edges = set(edges)
    if len(edges) != m - 1:
        return False
    reached = {root}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            if b in reached and a not in reached:
                reached.add(a)
                changed = True
    return len(reached) == m


def enumerate_itrees(g: DirectedGraph, root: int) -> list[ITree]:
    """All spanning trees of ``g`` in which every vertex reaches ``root``.

    Each non-root vertex picks one outgoing edge as its parent link; a
    partial choice is abandoned as soon as following parent links from the
    newly assigned vertex revisits a vertex, i.e. closes a cycle.
    """
    _check_vertex(g, root)
    require_connected(g)
    others = [v for v in range(1, g.m + 1) if v != root]
    parent: dict[int, int] = {}
    trees = []

    def closes_cycle(v: int) -> bool:
        seen = {v}
        w = parent[v]
        while w != root and w in parent:
            if w in seen:
                return True
            seen.add(w)
            w = parent[w]
        return False

    def assign(k: int):
        if k == len(others):
            trees.append(ITree(root, frozenset((v, parent[v]) for v in others)))
            return
        v = others[k]
        for w in g.out_neighbors(v):
            parent[v] = w
            if not closes_cycle(v):
                assign(k + 1)
        del parent[v]

    assign(0)
    return trees


@dataclass(frozen=True, order=True)
class CanonicalForm:
    m: int
    bits: int


@lru_cache(maxsize=None)
def _edge_permutations(m: int) -> tuple[tuple[int, ...], ...]:
    """For each vertex permutation, the induced map on edge bit positions."""
    index = edge_index(m)
    out = []
    for p in itertools.permutations(range(1, m + 1)):
        out.append(tuple(index[(p[i - 1], p[j - 1])] for i, j in edge_list(m)))
    return tuple(out)


def _permute_mask(mask: int, edge_perm) -> int:
    out = 0
    k = 0
    while mask:
        if mask & 1:
            out |= 1 << edge_perm[k]
        mask >>= 1
        k += 1
    return out


def canonical_form(g: DirectedGraph, bound: int = CANONICAL_BOUND) -> CanonicalForm:
    """Smallest edge bitmask over all ``m!`` relabelings of ``g``."""
    if g.m > bound:
        raise ResourceLimitError(f"canonical form limited to m <= {bound}, got m={g.m}")
    return CanonicalForm(g.m, min(_permute_mask(g.mask, ep) for ep in _edge_permutations(g.m)))


def is_isomorphic(g: DirectedGraph, h: DirectedGraph) -> bool:
    return g.m == h.m and canonical_form(g) == canonical_form(h)


def classify(g: DirectedGraph) -> str:
    """One of ``star``, ``cycle``, ``complete``, ``chorded_triangle``, ``other``.

    At m=2 the single connected graph is a star, a cycle and complete at
    once; the first matching name in that order is returned.
    """
    if g.m <= CANONICAL_BOUND:
        same = lambda h: canonical_form(g) == canonical_form(h)  # noqa: E731
    else:
        same = lambda h: _brute_isomorphic(g, h)  # noqa: E731
    if g.m >= 2 and g.n_edges == 2 * (g.m - 1) and same(star(g.m)):
        return "star"
    if g.n_edges == g.m and same(cycle(g.m)):
        return "cycle"
    if g.mask == complete(g.m).mask:
        return "complete"
    if g.m == 3 and g.n_edges == 4 and same(chorded_triangle()):
        return "chorded_triangle"
    return "other"


def _brute_isomorphic(g: DirectedGraph, h: DirectedGraph) -> bool:
    if g.n_edges != h.n_edges:
        return False
    # Degree-sequence shortcut for special shapes at large m.
    dg = sorted((g.out_degree(v), len(g.in_neighbors(v))) for v in range(1, g.m + 1))
    dh = sorted((h.out_degree(v), len(h.in_neighbors(v))) for v in range(1, h.m + 1))
    if dg != dh:
        return False
    return any(g.relabel(p).mask == h.mask for p in itertools.permutations(range(1, g.m + 1)))


# Bulk operations over arrays of masks ------------------------------------


def _out_bitsets(m: int, masks: np.ndarray) -> list[np.ndarray]:
    index = edge_index(m)
    outs = []
    for v in range(m):
        acc = np.zeros_like(masks)
        for w in range(m):
            if v != w:
                acc |= ((masks >> np.uint64(index[(v + 1, w + 1)])) & np.uint64(1)) << np.uint64(w)
        outs.append(acc)
    return outs


def _reach_all(m: int, step: list[np.ndarray]) -> np.ndarray:
    full = np.uint64((1 << m) - 1)
    reach = np.ones_like(step[0])
    for _ in range(m - 1):
        new = reach.copy()
        for v in range(m):
            hit = (reach >> np.uint64(v)) & np.uint64(1)
            new |= np.where(hit.astype(bool), step[v], np.uint64(0))
        reach = new
    return reach == full


def strongly_connected_masks(m: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Ascending array of masks in ``[start, stop)`` whose graphs are strongly connected."""
    total = 1 << m * (m - 1)
    stop = total if stop is None else min(stop, total)
    masks = np.arange(start, stop, dtype=np.uint64)
    outs = _out_bitsets(m, masks)
    ins = []
    for w in range(m):
        acc = np.zeros_like(masks)
        for v in range(m):
            acc |= ((outs[v] >> np.uint64(w)) & np.uint64(1)) << np.uint64(v)
        ins.append(acc)
    keep = _reach_all(m, outs) & _reach_all(m, ins)
    return masks[keep]


def canonical_masks(m: int, masks: np.ndarray) -> np.ndarray:
    """Vectorized ``canonical_form(...).bits`` for every mask in the array."""
    n_bits = m * (m - 1)
    n_chunks = (n_bits + 7) // 8
    best = np.full(masks.shape, np.iinfo(np.uint64).max, dtype=np.uint64)
    chunks = [((masks >> np.uint64(8 * c)) & np.uint64(255)).astype(np.intp) for c in range(n_chunks)]
    for ep in _edge_permutations(m):
        image = np.zeros_like(masks)
        for c in range(n_chunks):
            table = np.zeros(256, dtype=np.uint64)
            for byte in range(256):
                table[byte] = _permute_mask(byte << 8 * c, ep) if (byte << 8 * c) >> n_bits == 0 else 0
            image |= table[chunks[c]]
        np.minimum(best, image, out=best)
    return best


def enumerate_connected_graphs(m: int, start: int = 0, stop: int | None = None) -> Iterator[DirectedGraph]:
    """Strongly connected labeled graphs on ``1..m`` in ascending mask order.

    ``start``/``stop`` restrict to a mask range so disjoint ranges can be
    generated by separate workers and concatenated in order.
    """
    if not 2 <= m <= EXHAUSTIVE_BOUND:
        raise ResourceLimitError(f"exhaustive enumeration needs 2 <= m <= {EXHAUSTIVE_BOUND}, got m={m}")
    for mask in strongly_connected_masks(m, start, stop):
        yield DirectedGraph(m, int(mask))
