import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmech.errors import InfeasibleError, InvalidQueryError, MalformedInputError, ResourceLimitError
from gmech.graphs import (
    DirectedGraph,
    canonical_form,
    canonical_masks,
    chorded_triangle,
    classify,
    complete,
    cycle,
    edge_list,
    enumerate_connected_graphs,
    enumerate_itrees,
    is_connected,
    is_isomorphic,
    is_itree,
    shortest_path,
    shortest_path_length,
    star,
    strongly_connected_masks,
)


def G(m, *edges):
    return DirectedGraph.from_edges(m, [(int(e[0]), int(e[1])) for e in edges])


def brute_connected(g):
    return all(shortest_path_length(g, i, j) < math.inf for i in range(1, g.m + 1) for j in range(1, g.m + 1) if i != j)


# construction ----------------------------------------------------------------


def test_rejects_loops_and_out_of_range():
    with pytest.raises(MalformedInputError):
        G(3, "11")
    with pytest.raises(MalformedInputError):
        G(3, "14")
    with pytest.raises(MalformedInputError):
        DirectedGraph(1, 0)


def test_json_round_trip_and_duplicates():
    g = star(4)
    assert DirectedGraph.from_json(g.to_json()) == g
    with pytest.raises(MalformedInputError):
        DirectedGraph.from_json({"m": 3, "edges": [[1, 2], [1, 2]]})
    with pytest.raises(MalformedInputError):
        DirectedGraph.from_json({"m": 3, "edges": [[1, 1]]})
    with pytest.raises(MalformedInputError):
        DirectedGraph.from_json({"edges": []})


def test_named_graphs():
    assert star(4) == G(4, "14", "41", "24", "42", "34", "43")
    assert cycle(3) == G(3, "12", "23", "31")
    assert complete(3).n_edges == 6
    assert str(chorded_triangle()) == "{12,23,31,32}"


# connectivity and paths ------------------------------------------------------


def test_is_connected_examples():
    assert is_connected(G(2, "12", "21"))
    assert not is_connected(G(3, "12", "13"))
    assert is_connected(star(4))


def test_shortest_path_examples():
    assert shortest_path_length(star(4), 1, 2) == 2
    assert shortest_path_length(cycle(4), 1, 4) == 3
    c = complete(4)
    assert all(shortest_path_length(c, i, j) == 1 for i in range(1, 5) for j in range(1, 5) if i != j)


def test_shortest_path_errors_and_unreachable():
    with pytest.raises(InvalidQueryError):
        shortest_path_length(cycle(3), 2, 2)
    assert shortest_path_length(G(3, "12", "13"), 2, 1) == math.inf


def test_shortest_path_is_lexicographically_smallest():
    g = G(4, "12", "13", "24", "34", "41")
    assert shortest_path(g, 1, 4) == [1, 2, 4]


# i-trees ---------------------------------------------------------------------


def test_itree_examples():
    assert [t.edges for t in enumerate_itrees(cycle(3), 1)] == [frozenset({(2, 3), (3, 1)})]
    assert [t.edges for t in enumerate_itrees(cycle(2), 2)] == [frozenset({(1, 2)})]
    assert len(enumerate_itrees(complete(3), 1)) == 3


def test_itrees_need_connected_graph():
    with pytest.raises(InfeasibleError):
        enumerate_itrees(G(3, "12", "13"), 1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_itrees_match_brute_force(m):
    # every (m-1)-subset of edges that passes the path-to-root check, and nothing else
    for g in enumerate_connected_graphs(m):
        for root in range(1, m + 1):
            found = {t.edges for t in enumerate_itrees(g, root)}
            brute = {frozenset(s) for s in itertools.combinations(g.edges, m - 1) if is_itree(m, root, s)}
            assert found == brute


# canonical forms and classification ------------------------------------------


def test_canonical_form_examples():
    assert canonical_form(cycle(3)) == canonical_form(G(3, "13", "32", "21"))
    assert canonical_form(star(3)) != canonical_form(cycle(3))
    g = star(4)
    assert canonical_form(g) == canonical_form(g)


def test_canonical_form_bound():
    with pytest.raises(ResourceLimitError):
        canonical_form(cycle(8))
    with pytest.raises(ResourceLimitError):
        canonical_form(cycle(4), bound=3)


@pytest.mark.parametrize("m", [3, 4])
def test_canonical_form_matches_brute_isomorphism(m):
    graphs = list(enumerate_connected_graphs(m))
    if m == 4:
        graphs = graphs[::37]
    perms = list(itertools.permutations(range(1, m + 1)))
    for g in graphs:
        orbit = {g.relabel(p).mask for p in perms}
        for h in graphs:
            assert (canonical_form(g) == canonical_form(h)) == (h.mask in orbit)


def test_bulk_canonical_masks_agree_with_scalar():
    masks = strongly_connected_masks(4)
    bulk = canonical_masks(4, masks)
    for mask, c in list(zip(masks, bulk))[::11]:
        assert canonical_form(DirectedGraph(4, int(mask))).bits == int(c)


def test_classify_examples():
    assert classify(G(4, "14", "41", "24", "42", "34", "43")) == "star"
    assert classify(G(3, "12", "23", "31")) == "cycle"
    assert classify(G(3, "12", "23", "32", "31")) == "chorded_triangle"
    assert classify(complete(4)) == "complete"
    assert classify(star(5, center=2)) == "star"
    assert classify(G(4, "12", "21", "23", "34", "42")) == "other"


def test_classify_two_vertices_prefers_star():
    assert classify(cycle(2)) == "star"


def test_classify_large_m_without_canonical_form():
    assert classify(star(8, center=3)) == "star"
    assert classify(cycle(8)) == "cycle"
    assert classify(complete(8)) == "complete"


# enumeration -----------------------------------------------------------------


def test_enumeration_small():
    assert [g.edges for g in enumerate_connected_graphs(2)] == [((1, 2), (2, 1))]


@pytest.mark.parametrize("m,expected", [(2, 1), (3, 18), (4, 1606)])
def test_enumeration_counts_match_brute_filter(m, expected):
    masks = [g.mask for g in enumerate_connected_graphs(m)]
    brute = [mask for mask in range(1 << m * (m - 1)) if brute_connected(DirectedGraph(m, mask))]
    assert masks == brute
    assert len(masks) == expected


def test_enumeration_m5_count():
    assert len(strongly_connected_masks(5)) == 565080


def test_enumeration_ranges_concatenate():
    whole = strongly_connected_masks(4)
    parts = [strongly_connected_masks(4, a, a + 1000) for a in range(0, 4096, 1000)]
    assert list(whole) == [x for p in parts for x in p]


def test_enumeration_bounds():
    with pytest.raises(ResourceLimitError):
        list(enumerate_connected_graphs(6))
    with pytest.raises(ResourceLimitError):
        list(enumerate_connected_graphs(1))


def test_isomorphism_classes_at_m3():
    classes = {canonical_form(g) for g in enumerate_connected_graphs(3)}
    assert len(classes) == 5


# properties ------------------------------------------------------------------


def graphs_of(m):
    return st.integers(0, (1 << m * (m - 1)) - 1).map(lambda mask: DirectedGraph(m, mask))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5).flatmap(lambda m: st.tuples(graphs_of(m), st.permutations(list(range(1, m + 1))))))
def test_canonical_form_relabel_invariant(data):
    g, perm = data
    h = g.relabel(perm)
    assert canonical_form(g) == canonical_form(h)
    assert is_isomorphic(g, h)
    assert classify(g) == classify(h)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5).flatmap(graphs_of))
def test_triangle_inequality(g):
    m = g.m
    for i, j, k in itertools.permutations(range(1, m + 1), 3):
        assert shortest_path_length(g, i, k) <= shortest_path_length(g, i, j) + shortest_path_length(g, j, k)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(graphs_of))
def test_connectivity_matches_path_definition(g):
    assert is_connected(g) == brute_connected(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5).flatmap(graphs_of), st.data())
def test_adding_an_edge_never_lengthens_paths(g, data):
    missing = [e for e in edge_list(g.m) if not g.has_edge(*e)]
    if not missing:
        return
    i, j = data.draw(st.sampled_from(missing))
    h = g.with_edge(i, j)
    for a, b in itertools.permutations(range(1, g.m + 1), 2):
        assert shortest_path_length(h, a, b) <= shortest_path_length(g, a, b)
