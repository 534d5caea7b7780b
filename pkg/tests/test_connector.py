import numpy as np
import pytest

from cdspack import (Graph, VirtualNode, connected_components,
                     find_potential_connectors, is_live_connector,
                     live_connectors, trim_to_minimal)
from cdspack.connector import LONG, SHORT, ConnectorPath

from util import random_connected_graph


def test_short_connector_discovery():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    got = find_potential_connectors(g, [0], [2])
    assert len(got) == 1
    p = got[0]
    assert p.kind == SHORT and p.internals == (1,)
    assert p.internal_units() == ((1, 1),)


def test_long_connector_types():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    got = find_potential_connectors(g, [0], [3])
    assert len(got) == 1
    p = got[0]
    assert p.kind == LONG and p.internals == (1, 2)
    assert p.internal_units() == ((1, 2), (2, 3))


def test_short_beats_long_through_same_node():
    # x adjacent to both sides is used alone; the disjoint long route stays.
    g = Graph.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1)])
    got = find_potential_connectors(g, [0], [1])
    kinds = [(p.kind, p.internals) for p in got]
    assert kinds == [(SHORT, (2,)), (LONG, (3, 4))]


def test_adjacent_sides_rejected():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        find_potential_connectors(g, [0], [2])


def test_trim_cases():
    # long 0,1,2,3 where the first internal also reaches the far side
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (1, 3)])
    long_path = ConnectorPath(0, 0, 3, (1, 2), LONG)
    trimmed = trim_to_minimal(g, long_path, [0], [3])
    assert trimmed.kind == SHORT and trimmed.internals == (1,)
    assert trimmed.endpoint_out == 3

    g2 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    minimal = ConnectorPath(0, 0, 3, (1, 2), LONG)
    assert trim_to_minimal(g2, minimal, [0], [3]) == minimal

    short = ConnectorPath(0, 0, 2, (1,), SHORT)
    assert trim_to_minimal(g2, short, [0], [2]) == short


def test_trim_second_internal_touching_component():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    long_path = ConnectorPath(0, 0, 3, (1, 2), LONG)
    trimmed = trim_to_minimal(g, long_path, [0], [3])
    assert trimmed.kind == SHORT and trimmed.internals == (2,)
    assert trimmed.endpoint_in == 0


def test_is_live_connector():
    short = ConnectorPath(0, 0, 2, (1,), SHORT)
    assert is_live_connector(short, {VirtualNode(1, 5, 1)})
    assert not is_live_connector(short, {VirtualNode(1, 5, 2)})
    assert not is_live_connector(short, set())
    long_path = ConnectorPath(0, 0, 3, (1, 2), LONG)
    assert is_live_connector(long_path, {VirtualNode(1, 5, 2), VirtualNode(2, 5, 3)})
    assert not is_live_connector(long_path, {VirtualNode(1, 5, 2)})


def test_live_connectors_table_and_limit():
    paths = [ConnectorPath(0, 0, 9, (i,), SHORT) for i in range(1, 5)]
    table = np.zeros((3, 10), bool)
    table[0, [1, 2, 4]] = True
    assert [p.internals for p in live_connectors(paths, table)] == [(1,), (2,), (4,)]
    assert len(live_connectors(paths, table, limit=2)) == 2


def test_type2_exclusivity_across_components():
    # Within one class, a type-2 internal serves exactly one component.
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(60):
        n = int(rng.integers(8, 16))
        g = random_connected_graph(n, 0.22, rng)
        members = np.flatnonzero(rng.random(n) < 0.4)
        comps = connected_components(g, members)
        if len(comps) < 2:
            continue
        class_proj = np.zeros(n, bool)
        class_proj[members] = True
        type2_owner: dict[int, int] = {}
        for ci, comp in enumerate(comps):
            comp_mask = np.zeros(n, bool)
            comp_mask[comp] = True
            rest = class_proj & ~comp_mask
            paths = find_potential_connectors(g, comp_mask, rest, component_id=ci)
            internals_seen: set[int] = set()
            for p in paths:
                assert not (set(p.internals) & internals_seen), \
                    "family not internally disjoint"
                internals_seen |= set(p.internals)
                if p.kind == LONG:
                    u = p.internals[0]
                    assert type2_owner.setdefault(u, ci) == ci, \
                        "type-2 internal shared across components"
                    checked += 1
    assert checked > 0
