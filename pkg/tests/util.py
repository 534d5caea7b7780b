"""Shared graph fixtures and small brute-force oracles for the test suite."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from cdspack import Graph, is_cds


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(n: int) -> Graph:
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]                    # outer cycle
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]           # inner pentagram
    edges += [(i, 5 + i) for i in range(5)]                         # spokes
    return Graph.from_edges(10, edges)


def random_graph(n: int, edge_p: float, rng: np.random.Generator) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < edge_p]
    return Graph.from_edges(n, edges)


def random_connected_graph(n: int, edge_p: float, rng: np.random.Generator) -> Graph:
    """Random graph plus a random spanning path, so it is always connected."""
    perm = rng.permutation(n)
    edges = {(min(int(perm[i]), int(perm[i + 1])), max(int(perm[i]), int(perm[i + 1])))
             for i in range(n - 1)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_p:
                edges.add((i, j))
    return Graph.from_edges(n, sorted(edges))


def edge_set(g: Graph) -> set[tuple[int, int]]:
    return {(u, int(v)) for u in range(g.n) for v in g.neighbors(u) if u < v}


# ---------------------------------------------------------------------------
# Independent oracles (exhaustive; small n only)
# ---------------------------------------------------------------------------

def enumerate_bounded_paths(g: Graph, a: set[int], b: set[int],
                            forbidden: set[int]) -> list[tuple[int, ...]]:
    """All internal-node tuples of a->b paths with 1 or 2 internals."""
    blocked = a | b | forbidden
    out = []
    for x in range(g.n):
        if x in blocked:
            continue
        nx = set(int(v) for v in g.neighbors(x))
        if nx & a and nx & b:
            out.append((x,))
        if nx & a:
            for y in nx:
                if y in blocked or y == x:
                    continue
                ny = set(int(v) for v in g.neighbors(y))
                if ny & b:
                    out.append((x, y))
    return out


def brute_force_max_disjoint(paths: list[tuple[int, ...]]) -> int:
    """Maximum internally-disjoint subfamily size by exhaustive recursion."""
    best = 0

    def rec(i: int, used: set[int], count: int):
        nonlocal best
        best = max(best, count)
        if i >= len(paths):
            return
        if count + (len(paths) - i) <= best:
            return
        rec(i + 1, used, count)
        if not (set(paths[i]) & used):
            rec(i + 1, used | set(paths[i]), count + 1)

    rec(0, set(), 0)
    return best


def all_cds_sets(g: Graph) -> list[frozenset[int]]:
    """Every connected dominating set, by exhaustive subset enumeration."""
    out = []
    for size in range(1, g.n + 1):
        for cand in combinations(range(g.n), size):
            if is_cds(g, cand):
                out.append(frozenset(cand))
    return out
