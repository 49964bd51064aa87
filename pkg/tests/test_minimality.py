import json
from fractions import Fraction

import numpy as np
import pytest

from gmech.complexity import ComplexityProfile, profile
from gmech.errors import InvalidQueryError, MalformedInputError, ResourceLimitError
from gmech.graphs import DirectedGraph, canonical_form, complete, cycle, star
from gmech.minimality import (
    DominanceVerdict,
    build_universe,
    componentwise_minimal_flags,
    dominates,
    minimal_set,
    scalarized_best,
    special_complexities,
    strongly_minimal_set,
    weak_dominates,
    worst_case_minimal_flags,
)


def raised(p: ComplexityProfile) -> ComplexityProfile:
    tau = [list(r) for r in p.tau]
    tau[0][1] += 1
    return ComplexityProfile(tuple(map(tuple, tau)), p.pi, p.k)


# dominance -------------------------------------------------------------------


def test_dominates_examples():
    p = profile(star(4))
    assert dominates(p, p) == DominanceVerdict(True, False)
    c, k = profile(cycle(4)), profile(complete(4))
    assert not dominates(c, k).leq and not dominates(k, c).leq
    assert dominates(p, raised(p)) == DominanceVerdict(True, True)
    assert dominates(raised(p), p) == DominanceVerdict(False, False)


def test_weak_dominates_examples():
    assert weak_dominates(profile(cycle(3)), profile(star(3))).strict
    s, c = profile(star(4)), profile(cycle(4))
    assert not weak_dominates(s, c).leq and not weak_dominates(c, s).leq
    assert weak_dominates(s, s) == DominanceVerdict(True, False)


def test_mismatched_m_is_rejected():
    with pytest.raises(InvalidQueryError):
        dominates(profile(cycle(3)), profile(cycle(4)))
    with pytest.raises(InvalidQueryError):
        weak_dominates(profile(cycle(3)), profile(cycle(4)))


# universes and minimal sets --------------------------------------------------


def test_universe_bounds():
    with pytest.raises(ResourceLimitError):
        build_universe(6)
    with pytest.raises(ResourceLimitError):
        minimal_set(1)


def test_universe_profiles_match_direct_computation(universes):
    uni = universes[4]
    assert len(uni) == 1606
    for mask in uni.masks[::97]:
        assert uni.profile_of(int(mask)) == profile(DirectedGraph(4, int(mask)))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_componentwise_flags_match_quadratic_pass(universes, m):
    v = universes[m].vectors.astype(np.int32)
    leq = (v[:, None, :] <= v[None, :, :]).all(axis=2)
    strict = leq & ~leq.T
    brute = ~strict.any(axis=0)
    assert np.array_equal(componentwise_minimal_flags(universes[m]), brute)


@pytest.mark.parametrize("m", [3, 4])
def test_worst_case_flags_match_quadratic_pass(universes, m):
    uni = universes[m]
    pts = np.stack([uni.tau_max, uni.pi_max], axis=1)
    leq = (pts[:, None, :] <= pts[None, :, :]).all(axis=2)
    brute = ~(leq & ~leq.T).any(axis=0)
    assert np.array_equal(worst_case_minimal_flags(uni), brute)


def test_minimal_set_examples(universes):
    assert [e.graph.edges for e in minimal_set(2, universes[2]).minimal_graphs] == [((1, 2), (2, 1))]
    names3 = minimal_set(3, universes[3]).names
    assert "cycle" in names3 and "complete" in names3
    names4 = minimal_set(4, universes[4]).names
    assert {"star", "cycle", "complete"} <= set(names4)


@pytest.mark.parametrize("m", [3, 4])
def test_minimal_set_closed_under_isomorphism(universes, m):
    uni = universes[m]
    flags = componentwise_minimal_flags(uni)
    for cls in np.unique(uni.classes):
        assert len(set(flags[uni.classes == cls])) == 1


def test_strongly_minimal_m4(universes):
    for u in ("Mg", "Mstar"):
        rep = strongly_minimal_set(4, u, universes[4])
        assert sorted(rep.names) == ["complete", "cycle", "star"]
        assert sum(e.orbit_size for e in rep.minimal_graphs) == len(rep.labeled_masks)


def test_strongly_minimal_m3_is_computed(universes):
    rep = strongly_minimal_set(3, "Mg", universes[3])
    got = {(e.name, e.profile.tau_max, e.profile.pi_max) for e in rep.minimal_graphs}
    assert got == {("cycle", 2, 2), ("complete", 1, 6)}


def test_strongly_minimal_rejects_unknown_universe(universes):
    with pytest.raises(InvalidQueryError):
        strongly_minimal_set(3, "Special", universes[3])


def test_report_json_shape(universes):
    d = strongly_minimal_set(4, "Mg", universes[4]).to_dict()
    assert d["universe_size"] == 1606
    assert {g["name"] for g in d["minimal_graphs"]} == {"star", "cycle", "complete"}
    json.dumps(d)


# scalarization ---------------------------------------------------------------


def test_special_table():
    assert special_complexities(5) == {"star": (4, 2), "cycle": (2, 4), "complete": (20, 1)}
    with pytest.raises(InvalidQueryError):
        special_complexities(2)


def test_scalarized_examples(universes):
    [(g, s)] = scalarized_best(6, 1, 1)
    assert canonical_form(g) == canonical_form(star(6)) and s == 6
    winners = scalarized_best(5, 1, 1)
    assert {canonical_form(g) for g, _ in winners} == {canonical_form(star(5)), canonical_form(cycle(5))}
    assert {s for _, s in winners} == {6}
    uni = universes[4]
    best = scalarized_best(4, 1, 1, "Mg", uni)
    floor = min(int(t) + int(p) for t, p in zip(uni.tau_max, uni.pi_max))
    assert {s for _, s in best} == {floor}
    assert [canonical_form(g) for g, _ in best] == [canonical_form(cycle(4))]


def test_scalarized_exact_rational_weights():
    # star 4/3 + 5, cycle 2/3 + 15/2, complete 4 + 5/2
    [(g, s)] = scalarized_best(4, Fraction(1, 3), Fraction(5, 2))
    assert canonical_form(g) == canonical_form(star(4))
    assert s == Fraction(19, 3)
    [(g, s)] = scalarized_best(4, Fraction(1, 3), Fraction(9, 1))
    assert canonical_form(g) == canonical_form(complete(4))
    assert s == 13


def test_scalarized_errors():
    with pytest.raises(InvalidQueryError):
        scalarized_best(5, 0, 1)
    with pytest.raises(InvalidQueryError):
        scalarized_best(5, 1, 1, "Everything")


# cache -----------------------------------------------------------------------


def test_cache_round_trip(tmp_path, universes):
    first = build_universe(3, cache_dir=tmp_path)
    path = tmp_path / "universe-m3.jsonl"
    lines = path.read_text().splitlines()
    header = json.loads(lines[0])
    assert header["m"] == 3 and header["format_version"] == 1
    records = [json.loads(line) for line in lines[1:]]
    assert len(records) == 5
    assert {r["graph_id"] for r in records if r["strongly_minimal"]} == {
        canonical_form(cycle(3)).bits,
        canonical_form(complete(3)).bits,
    }
    again = build_universe(3, cache_dir=tmp_path)
    assert np.array_equal(again.vectors, first.vectors)
    assert np.array_equal(again.vectors, universes[3].vectors)


def test_stale_cache_is_replaced(tmp_path):
    path = tmp_path / "universe-m3.jsonl"
    path.write_text(json.dumps({"format_version": 0, "code_version": "x", "m": 3}) + "\n")
    build_universe(3, cache_dir=tmp_path)
    assert json.loads(path.read_text().splitlines()[0])["format_version"] == 1


def test_corrupt_cache_header(tmp_path):
    (tmp_path / "universe-m3.jsonl").write_text("not json\n")
    with pytest.raises(MalformedInputError):
        build_universe(3, cache_dir=tmp_path)


def test_worker_count_does_not_change_results(universes):
    parallel = build_universe(3, workers=2)
    assert np.array_equal(parallel.vectors, universes[3].vectors)
    assert np.array_equal(parallel.masks, universes[3].masks)
