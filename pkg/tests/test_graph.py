import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdspack import (Graph, connected_components, induced_subgraph, is_cds,
                     is_connected, is_dominating, load_edgelist,
                     local_vertex_connectivity, max_disjoint_bounded_paths,
                     save_edgelist, vertex_connectivity)
from cdspack.generators import clique_chain
from cdspack.verifier import brute_force_min_vertex_cut, brute_force_vertex_connectivity

from util import (brute_force_max_disjoint, complete, cycle,
                  enumerate_bounded_paths, edge_set, path, petersen,
                  random_connected_graph, random_graph, star)


# ---------------------------------------------------------------------------
# construction and induced subgraphs
# ---------------------------------------------------------------------------

def test_from_edges_dedupes_and_sorts():
    g = Graph.from_edges(4, [(1, 0), (0, 1), (2, 1), (3, 2)])
    assert g.m == 3
    assert g.neighbors(1).tolist() == [0, 2]


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])


def test_induced_c6_prefix_is_path():
    g = cycle(6)
    sub, mapping = induced_subgraph(g, {0, 1, 2})
    assert mapping.tolist() == [0, 1, 2]
    assert edge_set(sub) == {(0, 1), (1, 2)}


def test_induced_identity_copy():
    g = petersen()
    sub, mapping = induced_subgraph(g, range(10))
    assert edge_set(sub) == edge_set(g)
    assert mapping.tolist() == list(range(10))


def test_induced_petersen_outer_cycle_is_c5():
    sub, mapping = induced_subgraph(petersen(), {0, 1, 2, 3, 4})
    assert edge_set(sub) == {(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)}


def test_out_of_range_member_is_domain_error():
    with pytest.raises(ValueError):
        induced_subgraph(cycle(4), {0, 7})


# ---------------------------------------------------------------------------
# components, domination, CDS
# ---------------------------------------------------------------------------

def test_components_c4():
    g = cycle(4)
    assert [c.tolist() for c in connected_components(g, {0, 2})] == [[0], [2]]
    assert [c.tolist() for c in connected_components(g, {0, 1, 2, 3})] == [[0, 1, 2, 3]]
    assert connected_components(g, []) == []


def test_components_clique_chain_ends():
    g = clique_chain(12, 3)
    s = list(range(3)) + list(range(9, 12))
    comps = connected_components(g, s)
    assert [c.tolist() for c in comps] == [[0, 1, 2], [9, 10, 11]]


def test_dominating_examples():
    assert is_dominating(complete(5), {0})
    assert is_dominating(cycle(6), {0, 3})
    assert not is_dominating(cycle(6), {0})


def test_cds_examples():
    assert is_cds(cycle(4), {0, 1})
    assert not is_cds(cycle(6), {0, 3})  # dominating but disconnected
    assert is_cds(complete(7), {3})
    assert not is_cds(cycle(4), [])


@given(st.integers(2, 7), st.data())
def test_cds_closed_under_adding_nodes(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10 ** 6)))
    g = random_connected_graph(n, 0.5, rng)
    members = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    if is_cds(g, members):
        extra = data.draw(st.integers(0, n - 1))
        assert is_cds(g, members | {extra})


# ---------------------------------------------------------------------------
# vertex connectivity
# ---------------------------------------------------------------------------

def test_connectivity_examples():
    assert vertex_connectivity(complete(5)) == 4
    assert vertex_connectivity(clique_chain(12, 3)) == 3
    assert vertex_connectivity(cycle(5)) == 2
    assert vertex_connectivity(petersen()) == 3
    assert vertex_connectivity(star(8)) == 1
    assert vertex_connectivity(path(2)) == 1


def test_connectivity_disconnected_and_tiny():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert vertex_connectivity(g) == 0
    with pytest.raises(ValueError):
        vertex_connectivity(Graph.from_edges(1, []))


def test_local_connectivity_requires_nonadjacent():
    g = cycle(5)
    assert local_vertex_connectivity(g, 0, 2) == 2
    with pytest.raises(ValueError):
        local_vertex_connectivity(g, 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.floats(0.1, 0.9), st.integers(0, 10 ** 6))
def test_connectivity_matches_exhaustive_oracle(n, p, seed):
    g = random_graph(n, p, np.random.default_rng(seed))
    assert vertex_connectivity(g) == brute_force_vertex_connectivity(g)


def test_witness_cut_properties():
    rng = np.random.default_rng(7)
    from itertools import combinations
    for _ in range(40):
        n = int(rng.integers(4, 9))
        g = random_connected_graph(n, 0.4, rng)
        if g.is_complete():
            continue
        k = vertex_connectivity(g)
        size, cut = brute_force_min_vertex_cut(g)
        assert size == k and cut is not None
        mask = np.ones(g.n, bool)
        mask[list(cut)] = False
        assert not is_connected(g, mask)
        # no smaller set disconnects
        for smaller in combinations(range(n), k - 1):
            keep = np.ones(g.n, bool)
            keep[list(smaller)] = False
            assert is_connected(g, keep)


# ---------------------------------------------------------------------------
# bounded-length disjoint paths
# ---------------------------------------------------------------------------

def test_single_short_path():
    g = path(3)
    got = max_disjoint_bounded_paths(g, [0], [2])
    assert len(got) == 1 and got[0].internals == (1,)


def test_disjoint_components_no_paths():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert max_disjoint_bounded_paths(g, [0], [3]) == []


def test_mixed_short_long_instance():
    # x=2 adjacent to both sides, separate long route 3-4.
    g = Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1)])
    got = max_disjoint_bounded_paths(g, [0], [1])
    assert [p.internals for p in got] == [(2,), (3, 4)]
    oracle = brute_force_max_disjoint(enumerate_bounded_paths(g, {0}, {1}, set()))
    assert len(got) == oracle == 2


def test_matched_cliques_with_subsampled_endpoints():
    # Two K_4 blocks joined by a perfect matching; endpoints chosen so the
    # sides are non-adjacent, every route crosses the matching.  Admissible
    # routes: 0-1-5, 0-2-6, 0-3-7, plus 0-4-5 via the matched partner.
    g = clique_chain(8, 4)
    a, b = {0}, {5, 6, 7}
    got = max_disjoint_bounded_paths(g, a, b)
    oracle = brute_force_max_disjoint(enumerate_bounded_paths(g, a, b, set()))
    assert len(got) == oracle == 4


def test_forbidden_nodes_are_avoided():
    g = Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1)])
    got = max_disjoint_bounded_paths(g, [0], [1], forbidden=[2])
    assert [p.internals for p in got] == [(3, 4)]


def test_overlapping_endpoint_sets_rejected():
    with pytest.raises(ValueError):
        max_disjoint_bounded_paths(cycle(5), [0, 1], [1, 2])


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 9), st.integers(0, 10 ** 6))
def test_bounded_paths_properties_and_oracle(n, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(n, 0.45, rng)
    nodes = list(rng.permutation(n))
    a = {int(nodes[0])}
    b = {int(nodes[1]), int(nodes[2])}
    forbidden = {int(nodes[3])} if n > 4 and rng.random() < 0.5 else set()
    got = max_disjoint_bounded_paths(g, a, b, forbidden=forbidden)
    seen: set[int] = set()
    for p in got:
        assert 1 <= len(p.internals) <= 2
        assert not (set(p.internals) & (a | b | forbidden))
        assert not (set(p.internals) & seen), "paths share an internal node"
        seen |= set(p.internals)
        assert p.start in a and p.end in b
        hops = [p.start, *p.internals, p.end]
        for u, v in zip(hops, hops[1:]):
            assert g.has_edge(u, v)
    oracle = brute_force_max_disjoint(enumerate_bounded_paths(g, a, b, forbidden))
    assert len(got) == oracle


def test_cap_limits_path_count():
    g = clique_chain(8, 4)
    got = max_disjoint_bounded_paths(g, {0}, {5, 6, 7}, cap=2)
    assert len(got) == 2


# ---------------------------------------------------------------------------
# edge-list round trip
# ---------------------------------------------------------------------------

def test_edgelist_roundtrip(tmp_path):
    g = petersen()
    f = tmp_path / "g.txt"
    save_edgelist(g, f)
    g2 = load_edgelist(f)
    assert g2.n == g.n and edge_set(g2) == edge_set(g)


def test_edgelist_comments_and_errors(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# toy graph\n3 2\n0 1  # first\n1 2\n")
    g = load_edgelist(f)
    assert g.n == 3 and g.m == 2
    f.write_text("3 5\n0 1\n")
    from cdspack import GraphFormatError
    with pytest.raises(GraphFormatError):
        load_edgelist(f)
