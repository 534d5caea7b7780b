"""Deterministic graph families with known vertex connectivity.

Included: the two-layer clique/subset graph (a clique of 2k nodes plus one
node per k-subset, connectivity exactly k and fractional connected domatic
number below 2), its randomly thinned variant, chains of k-cliques joined by
perfect matchings, circulant Harary graphs, and Erdos-Renyi samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graph import Graph


@dataclass
class GraphMeta:
    family: str
    params: dict = field(default_factory=dict)
    declared_k: int | None = None
    notes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "declared_k": self.declared_k,
            "notes": self.notes,
        }


def sanders_graph(k: int) -> Graph:
    """Clique layer A of 2k nodes plus one degree-k node per k-subset of A.

    Vertex connectivity is exactly k; every connected dominating set must use
    at least k+1 clique-layer nodes.  Subsets are enumerated in lexicographic
    order, so node ids are reproducible.
    """
    if not (1 <= k <= 12):
        raise ValueError("k must be in [1, 12] (second layer has C(2k,k) nodes)")
    a = 2 * k
    edges = [(i, j) for i in range(a) for j in range(i + 1, a)]
    node = a
    for subset in combinations(range(a), k):
        for i in subset:
            edges.append((i, node))
        node += 1
    return Graph.from_edges(node, edges)


def _real_binom(x: float, k: int) -> float:
    return math.gamma(x + 1.0) / (math.gamma(k + 1.0) * math.gamma(x - k + 1.0))


def sanders_subsampled(k: int, eta: int, rng: np.random.Generator) -> tuple[Graph, GraphMeta]:
    """Thinned two-layer graph: keep all of the clique layer, keep each subset
    node independently with probability 65*beta^2 / C(2k-beta, k) where
    beta = log2(eta)/8, then pad with nodes adjacent to the whole clique layer
    if fewer than eta nodes remain.  Connectivity stays exactly k.
    """
    if not (4 * k <= eta <= 2 ** k):
        raise ValueError("eta must satisfy 4k <= eta <= 2^k")
    a = 2 * k
    beta = math.log2(eta) / 8.0
    p = min(1.0, 65.0 * beta * beta / _real_binom(2 * k - beta, k))
    subsets = list(combinations(range(a), k))
    keep = rng.random(len(subsets)) < p
    if not keep.any():
        keep[0] = True  # guarantee one degree-k node so connectivity stays k
    edges = [(i, j) for i in range(a) for j in range(i + 1, a)]
    node = a
    for subset, kept in zip(subsets, keep):
        if kept:
            for i in subset:
                edges.append((i, node))
            node += 1
    padded = 0
    while node < eta:
        for i in range(a):
            edges.append((i, node))
        node += 1
        padded += 1
    g = Graph.from_edges(node, edges)
    meta = GraphMeta(
        family="sanders-sub",
        params={"k": k, "eta": eta, "beta": beta, "p": p},
        declared_k=k,
        notes={"kept_subset_nodes": int(keep.sum()), "padded_nodes": padded},
    )
    return g, meta


def clique_chain(n: int, k: int) -> Graph:
    """Chain of n/k cliques of size k; consecutive cliques joined by the
    perfect matching (clique i, slot j) -- (clique i+1, slot j).

    Vertex connectivity is exactly k.
    """
    if k < 1 or n % k != 0 or n // k < 2:
        raise ValueError("need k >= 1, k | n, and at least two cliques")
    blocks = n // k
    edges = []
    for b in range(blocks):
        base = b * k
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((base + i, base + j))
        if b + 1 < blocks:
            for j in range(k):
                edges.append((base + j, base + k + j))
    return Graph.from_edges(n, edges)


def harary(k: int, n: int) -> Graph:
    """Circulant Harary graph H_{k,n}: the minimum-edge graph with vertex
    connectivity exactly k on n nodes."""
    if not (n > k >= 2):
        raise ValueError("need n > k >= 2")
    edges = []
    if k % 2 == 0 or n % 2 == 0:
        offset = k // 2
        for i in range(n):
            for j in range(1, offset + 1):
                edges.append((i, (i + j) % n))
        if k % 2 == 1:
            half = n // 2
            for i in range(half):
                edges.append((i, i + half))
    else:
        offset = (k - 1) // 2
        for i in range(n):
            for j in range(1, offset + 1):
                edges.append((i, (i + j) % n))
        half = n // 2
        for i in range(half + 1):
            edges.append((i, (i + half) % n))
    return Graph.from_edges(n, edges)


def gnp_graph(n: int, edge_p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p) sample."""
    if not (0.0 <= edge_p <= 1.0):
        raise ValueError("edge probability must be in [0, 1]")
    iu, ju = np.triu_indices(n, k=1)
    pick = rng.random(iu.shape[0]) < edge_p
    return Graph.from_edges(n, zip(iu[pick].tolist(), ju[pick].tolist()))


def make_graph(family: str, *, k: int | None = None, n: int | None = None,
               eta: int | None = None, edge_p: float | None = None,
               rng: np.random.Generator | None = None) -> tuple[Graph, GraphMeta]:
    """Uniform constructor used by the CLI; returns the graph and metadata."""
    if family == "sanders":
        if k is None:
            raise ValueError("sanders requires k")
        g = sanders_graph(k)
        return g, GraphMeta("sanders", {"k": k, "n": g.n}, declared_k=k)
    if family == "sanders-sub":
        if k is None or eta is None or rng is None:
            raise ValueError("sanders-sub requires k, eta, and a seed")
        return sanders_subsampled(k, eta, rng)
    if family == "clique-chain":
        if k is None or n is None:
            raise ValueError("clique-chain requires k and n")
        return clique_chain(n, k), GraphMeta("clique-chain", {"k": k, "n": n}, declared_k=k)
    if family == "harary":
        if k is None or n is None:
            raise ValueError("harary requires k and n")
        return harary(k, n), GraphMeta("harary", {"k": k, "n": n}, declared_k=k)
    if family == "gnp":
        if n is None or edge_p is None or rng is None:
            raise ValueError("gnp requires n, edge-p, and a seed")
        g = gnp_graph(n, edge_p, rng)
        return g, GraphMeta("gnp", {"n": n, "edge_p": edge_p}, declared_k=None)
    raise ValueError(f"unknown family {family!r}")
