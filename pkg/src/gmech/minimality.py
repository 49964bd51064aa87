"""Dominance orders over complexity profiles and exhaustive minimality search.

Profiles are computed once per isomorphism class and carried to every
labeled graph of the class by permuting rows and columns, so dominance is
still evaluated between labeled graphs on the same commodity set.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .complexity import ComplexityProfile, profile
from .errors import InvalidQueryError, MalformedInputError, ResourceLimitError
from .graphs import (
    EXHAUSTIVE_BOUND,
    DirectedGraph,
    _edge_permutations,
    _permute_mask,
    canonical_masks,
    classify,
    complete,
    cycle,
    star,
    strongly_connected_masks,
)

log = logging.getLogger(__name__)

CACHE_FORMAT_VERSION = 1
UNIVERSES = ("Mg", "Mstar", "Special")
ORDERS = ("componentwise", "worst_case")


@dataclass(frozen=True)
class DominanceVerdict:
    leq: bool
    strict: bool


def _same_m(p1: ComplexityProfile, p2: ComplexityProfile):
    if p1.m != p2.m:
        raise InvalidQueryError(f"cannot compare profiles with m={p1.m} and m={p2.m}")


def dominates(p1: ComplexityProfile, p2: ComplexityProfile) -> DominanceVerdict:
    """``p1`` no more complex than ``p2`` in every tau, pi and k coordinate."""
    _same_m(p1, p2)
    v1, v2 = p1.vector(), p2.vector()
    leq = all(x <= y for x, y in zip(v1, v2))
    geq = all(x >= y for x, y in zip(v1, v2))
    return DominanceVerdict(leq, leq and not geq)


def weak_dominates(p1: ComplexityProfile, p2: ComplexityProfile) -> DominanceVerdict:
    """Comparison of worst-case complexities ``(tau_max, pi_max)`` only."""
    _same_m(p1, p2)
    leq = p1.tau_max <= p2.tau_max and p1.pi_max <= p2.pi_max
    geq = p1.tau_max >= p2.tau_max and p1.pi_max >= p2.pi_max
    return DominanceVerdict(leq, leq and not geq)


@dataclass
class Universe:
    """Every strongly connected labeled graph on ``1..m`` with its profile.

    ``masks`` is ascending; row ``n`` of ``vectors`` is the profile vector of
    ``masks[n]`` and ``classes[n]`` the canonical mask of its isomorphism class.
    """

    m: int
    masks: np.ndarray
    classes: np.ndarray
    vectors: np.ndarray
    class_profiles: dict[int, ComplexityProfile]
    _minimal: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.masks)

    @property
    def tau_max(self) -> np.ndarray:
        n = self.m * (self.m - 1)
        return self.vectors[:, :n].max(axis=1)

    @property
    def pi_max(self) -> np.ndarray:
        n = self.m * (self.m - 1)
        return self.vectors[:, n:2 * n].max(axis=1)

    def profile_of(self, mask: int) -> ComplexityProfile:
        n = int(np.searchsorted(self.masks, mask))
        if n == len(self.masks) or int(self.masks[n]) != mask:
            raise KeyError(mask)
        return ComplexityProfile.from_vector(self.m, self.vectors[n])


def _check_range(m: int):
    if not 2 <= m <= EXHAUSTIVE_BOUND:
        raise ResourceLimitError(f"exhaustive search needs 2 <= m <= {EXHAUSTIVE_BOUND}, got m={m}")


def _profile_mask(args) -> tuple[int, ...]:
    m, mask = args
    return profile(DirectedGraph(m, mask)).vector()


def _class_profiles(m: int, reps: Sequence[int], workers: int) -> dict[int, ComplexityProfile]:
    jobs = [(m, int(r)) for r in reps]
    if workers > 1:
        with multiprocessing.get_context("spawn").Pool(workers) as pool:
            vectors = pool.map(_profile_mask, jobs, chunksize=max(1, len(jobs) // (8 * workers)))
    else:
        vectors = [_profile_mask(j) for j in jobs]
    return {int(r): ComplexityProfile.from_vector(m, v) for r, v in zip(reps, vectors)}


def _coordinate_maps(m: int) -> list[np.ndarray]:
    """Per vertex permutation, the gather index turning a vector into the relabeled one."""
    import itertools

    dim = 2 * m * (m - 1) + m
    ids = ComplexityProfile.from_vector(m, range(dim))
    return [np.array(ids.permuted(p).vector(), dtype=np.intp) for p in itertools.permutations(range(1, m + 1))]


def _expand(m: int, masks: np.ndarray, classes: np.ndarray, class_profiles: dict[int, ComplexityProfile]) -> np.ndarray:
    """Profile vectors of all labeled graphs from their class representatives."""
    dim = 2 * m * (m - 1) + m
    vectors = np.zeros((len(masks), dim), dtype=np.int16)
    done = np.zeros(len(masks), dtype=bool)
    reps = np.array(sorted(class_profiles), dtype=np.uint64)
    rep_vecs = np.array([class_profiles[int(r)].vector() for r in reps], dtype=np.int16)
    for edge_perm, coords in zip(_edge_permutations(m), _coordinate_maps(m)):
        images = np.array([_permute_mask(int(r), edge_perm) for r in reps], dtype=np.uint64)
        pos = np.searchsorted(masks, images)
        fresh = ~done[pos]
        vectors[pos[fresh]] = rep_vecs[fresh][:, coords]
        done[pos[fresh]] = True
    if not done.all():  # pragma: no cover - every graph is in some orbit
        raise AssertionError("orbit expansion missed labeled graphs")
    return vectors


def build_universe(m: int, workers: int = 1, cache_dir: str | Path | None = None) -> Universe:
    """Enumerate and profile all strongly connected graphs on ``m`` commodities.

    With ``cache_dir`` the per-class profiles are read from, or written to,
    ``universe-m{m}.jsonl`` there.  Worker count never changes the result.
    """
    _check_range(m)
    masks = strongly_connected_masks(m)
    classes = canonical_masks(m, masks)
    reps = np.unique(classes)
    class_profiles = None
    path = Path(cache_dir) / f"universe-m{m}.jsonl" if cache_dir is not None else None
    if path is not None and path.exists():
        class_profiles = _read_cache(path, m, reps)
    if class_profiles is None:
        log.info("profiling %d isomorphism classes for m=%d", len(reps), m)
        class_profiles = _class_profiles(m, reps, workers)
    vectors = _expand(m, masks, classes, class_profiles)
    uni = Universe(m, masks, classes, vectors, class_profiles)
    if path is not None and not path.exists():
        write_cache(path, uni)
    return uni


def _orbits(uni: Universe) -> tuple[np.ndarray, list[np.ndarray]]:
    """Class representatives and, for each, the row indices of its labeled members."""
    reps, inverse = np.unique(uni.classes, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    bounds = np.searchsorted(inverse[order], np.arange(len(reps) + 1))
    return reps, [order[bounds[k]:bounds[k + 1]] for k in range(len(reps))]


def componentwise_minimal_flags(uni: Universe) -> np.ndarray:
    """Boolean mask of labeled graphs not strictly dominated under the componentwise order.

    Classes are visited in order of increasing coordinate sum: a strict
    dominator always has a smaller sum, and if it is not minimal itself
    some earlier minimal graph strictly dominates both.  The result is
    memoized on the universe.
    """
    if uni._minimal is not None:
        return uni._minimal
    reps, members = _orbits(uni)
    first = np.array([rows[0] for rows in members])
    rep_vecs = uni.vectors[first]
    order = np.lexsort((reps, rep_vecs.sum(axis=1, dtype=np.int32)))
    # column-major store of minimal rows so each coordinate test is a contiguous scan
    seen = np.empty((uni.vectors.shape[1], len(uni)), dtype=uni.vectors.dtype)
    filled = 0
    flags = np.zeros(len(uni), dtype=bool)
    for idx in order:
        v = rep_vecs[idx]
        if filled and _dominated(seen[:, :filled], v):
            continue
        rows = members[idx]
        seen[:, filled:filled + len(rows)] = uni.vectors[rows].T
        filled += len(rows)
        flags[rows] = True
    uni._minimal = flags
    return flags


def _dominated(seen: np.ndarray, v: np.ndarray) -> bool:
    """Whether some column of ``seen`` is ``<= v`` everywhere and differs somewhere."""
    cand = np.flatnonzero(seen[0] <= v[0])
    for c in range(1, len(v)):
        if not len(cand):
            return False
        cand = cand[seen[c, cand] <= v[c]]
    if not len(cand):
        return False
    return bool((seen[:, cand] != v[:, None]).any(axis=0).any())


def worst_case_minimal_flags(uni: Universe, among: np.ndarray | None = None) -> np.ndarray:
    """Graphs of ``among`` whose ``(tau_max, pi_max)`` no graph of ``among`` strictly improves."""
    among = np.ones(len(uni), dtype=bool) if among is None else among
    tm, pm = uni.tau_max, uni.pi_max
    pts = {(int(t), int(p)) for t, p in zip(tm[among], pm[among])}
    front = [
        (t, p)
        for t, p in pts
        if not any(t2 <= t and p2 <= p and (t2, p2) != (t, p) for t2, p2 in pts)
    ]
    flags = np.zeros(len(uni), dtype=bool)
    for t, p in front:
        flags |= (tm == t) & (pm == p)
    return flags & among


@dataclass(frozen=True)
class MinimalEntry:
    graph: DirectedGraph
    profile: ComplexityProfile
    class_id: int
    orbit_size: int
    name: str


@dataclass
class MinimalReport:
    m: int
    order: str
    universe: str
    minimal_graphs: list[MinimalEntry]
    universe_size: int
    labeled_masks: np.ndarray = field(repr=False)

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.minimal_graphs]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "order": self.order,
            "universe": self.universe,
            "universe_size": self.universe_size,
            "labeled_minimal": int(len(self.labeled_masks)),
            "minimal_graphs": [
                {
                    "graph_id": e.class_id,
                    "name": e.name,
                    "edges": [list(x) for x in e.graph.edges],
                    "orbit_size": e.orbit_size,
                    "tau_max": e.profile.tau_max,
                    "pi_max": e.profile.pi_max,
                    "k_total": e.profile.k_total,
                }
                for e in self.minimal_graphs
            ],
        }


def _report(uni: Universe, flags: np.ndarray, order: str, universe: str, universe_size: int) -> MinimalReport:
    entries = []
    classes, counts = np.unique(uni.classes[flags], return_counts=True)
    for cls, orbit in zip(classes, counts):
        cls = int(cls)
        g = DirectedGraph(uni.m, cls)
        entries.append(MinimalEntry(g, uni.class_profiles[cls], cls, int(orbit), classify(g)))
    return MinimalReport(uni.m, order, universe, entries, universe_size, uni.masks[flags])


def minimal_set(m: int, universe: Universe | None = None, workers: int = 1, cache_dir=None) -> MinimalReport:
    """Componentwise-minimal G-mechanisms on ``m`` commodities."""
    uni = universe if universe is not None else build_universe(m, workers, cache_dir)
    flags = componentwise_minimal_flags(uni)
    return _report(uni, flags, "componentwise", "Mg", len(uni))


def strongly_minimal_set(m: int, universe: str = "Mg", uni: Universe | None = None, workers: int = 1, cache_dir=None) -> MinimalReport:
    """Worst-case minimal elements of all G-mechanisms (``Mg``) or of the componentwise-minimal ones (``Mstar``)."""
    if universe not in ("Mg", "Mstar"):
        raise InvalidQueryError(f"universe must be Mg or Mstar, got {universe!r}")
    uni = uni if uni is not None else build_universe(m, workers, cache_dir)
    among = componentwise_minimal_flags(uni) if universe == "Mstar" else np.ones(len(uni), dtype=bool)
    flags = worst_case_minimal_flags(uni, among)
    return _report(uni, flags, "worst_case", universe, int(among.sum()))


def special_complexities(m: int) -> dict[str, tuple[int, int]]:
    """``(pi, tau)`` of the star, cycle and complete mechanisms from the closed forms."""
    if m < 3:
        raise InvalidQueryError("the closed forms need m >= 3")
    return {"star": (4, 2), "cycle": (2, m - 1), "complete": (m * (m - 1), 1)}


def scalarized_best(m: int, lam, mu, universe: str = "Special", uni: Universe | None = None, workers: int = 1, cache_dir=None) -> list[tuple[DirectedGraph, Fraction]]:
    """All graphs minimizing ``lam * pi_max + mu * tau_max``, ties kept, sorted by mask."""
    lam, mu = Fraction(lam), Fraction(mu)
    if lam <= 0 or mu <= 0:
        raise InvalidQueryError("lambda and mu must be strictly positive")
    if universe == "Special":
        table = special_complexities(m)
        builders = {"star": star, "cycle": cycle, "complete": complete}
        scored = [(builders[name](m), lam * pi + mu * tau) for name, (pi, tau) in table.items()]
    elif universe in ("Mg", "Mstar"):
        uni = uni if uni is not None else build_universe(m, workers, cache_dir)
        flags = componentwise_minimal_flags(uni) if universe == "Mstar" else np.ones(len(uni), dtype=bool)
        scored = []
        for cls in np.unique(uni.classes[flags]):
            p = uni.class_profiles[int(cls)]
            scored.append((DirectedGraph(m, int(cls)), lam * p.pi_max + mu * p.tau_max))
    else:
        raise InvalidQueryError(f"unknown universe {universe!r}")
    best = min(s for _, s in scored)
    return sorted(((g, s) for g, s in scored if s == best), key=lambda gs: gs[0].mask)


# Cache --------------------------------------------------------------------


def write_cache(path: Path, uni: Universe):
    """One JSON line per isomorphism class, preceded by a header line."""
    minimal = componentwise_minimal_flags(uni)
    strong = worst_case_minimal_flags(uni)
    reps, members = _orbits(uni)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        fh.write(json.dumps({"format_version": CACHE_FORMAT_VERSION, "code_version": __version__, "m": uni.m}) + "\n")
        for cls, rows in zip(reps, members):
            cls = int(cls)
            record = {
                "graph_id": cls,
                "edges": [list(e) for e in DirectedGraph(uni.m, cls).edges],
                "orbit_size": len(rows),
                "profile": uni.class_profiles[cls].to_dict(),
                "minimal": bool(minimal[rows[0]]),
                "strongly_minimal": bool(strong[rows[0]]),
            }
            fh.write(json.dumps(record) + "\n")
    tmp.replace(path)


def _read_cache(path: Path, m: int, reps: np.ndarray) -> dict[int, ComplexityProfile] | None:
    with open(path) as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"corrupt cache header in {path}") from exc
        if header.get("format_version") != CACHE_FORMAT_VERSION or header.get("code_version") != __version__ or header.get("m") != m:
            log.info("stale cache %s ignored", path)
            path.unlink()
            return None
        out = {}
        for line in fh:
            rec = json.loads(line)
            out[int(rec["graph_id"])] = ComplexityProfile.from_dict(rec["profile"])
    if sorted(out) != [int(r) for r in reps]:
        log.info("cache %s does not cover the class list; recomputing", path)
        path.unlink()
        return None
    return out
