"""Independent validation of packings plus brute-force oracles for small
instances.  Weight sums are checked with a 1e-9 tolerance; builder weights
are exact rationals (1/mu), so the tolerance only matters for external input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .graph import Graph, as_mask, induced_subgraph, is_cds, vertex_connectivity

WEIGHT_TOL = 1e-9


@dataclass
class PackingReport:
    entry_is_cds: list[bool]
    max_weight_sum: float
    size: float
    passed: bool
    messages: list[str] = field(default_factory=list)


def verify_packing(g: Graph, packing, sampled=None) -> PackingReport:
    """Check every entry is a CDS of g[sampled] and per-node weight sums stay
    at most 1 (+1e-9).  ``sampled`` defaults to all nodes."""
    mask = as_mask(g.n, sampled) if sampled is not None else np.ones(g.n, bool)
    sub, mapping = induced_subgraph(g, mask)
    inv = np.full(g.n, -1, np.int64)
    inv[mapping] = np.arange(mapping.shape[0])
    messages: list[str] = []
    entry_ok: list[bool] = []
    sums = np.zeros(g.n, float)
    size = 0.0
    for i, (nodes, weight) in enumerate(packing.entries):
        nodes = np.asarray(nodes, dtype=np.int64)
        w = float(weight)
        if not 0.0 < w <= 1.0 + WEIGHT_TOL:
            messages.append(f"entry {i}: weight {w} outside (0, 1]")
            entry_ok.append(False)
            continue
        if nodes.shape[0] == 0 or not mask[nodes].all():
            messages.append(f"entry {i}: empty or not within the sampled set")
            entry_ok.append(False)
        else:
            ok = is_cds(sub, inv[nodes])
            entry_ok.append(bool(ok))
            if not ok:
                messages.append(f"entry {i}: not a connected dominating set")
        sums[nodes] += w
        size += w
    max_sum = float(sums.max()) if g.n else 0.0
    if max_sum > 1.0 + WEIGHT_TOL:
        messages.append(f"max per-node weight sum {max_sum} exceeds 1")
    passed = all(entry_ok) and max_sum <= 1.0 + WEIGHT_TOL
    return PackingReport(entry_ok, max_sum, size, passed, messages)


def brute_force_min_vertex_cut(g: Graph) -> tuple[int, tuple[int, ...] | None]:
    """Exhaustive minimum vertex cut for n <= 12.

    Returns (size, cut) with cut=None for complete graphs (convention n-1).
    """
    if g.n > 12:
        raise ValueError("exhaustive cut search is limited to n <= 12")
    if g.n < 2:
        raise ValueError("need at least 2 nodes")
    nodes = list(range(g.n))
    for size in range(0, g.n - 1):
        for cut in combinations(nodes, size):
            mask = np.ones(g.n, bool)
            mask[list(cut)] = False
            _, count = kernels.component_labels(g.indptr, g.indices, mask)
            if count >= 2:
                return size, cut
    return g.n - 1, None


def brute_force_vertex_connectivity(g: Graph) -> int:
    """Minimum number of node removals that disconnect g (n-1 if none, i.e.
    complete); exhaustive, n <= 12 only."""
    return brute_force_min_vertex_cut(g)[0]


def check_packing_upper_bound(g: Graph, packing) -> bool:
    """Packing size never exceeds the vertex connectivity (non-complete g)."""
    if g.is_complete():
        raise ValueError("upper bound is only asserted for non-complete graphs")
    return packing.size <= vertex_connectivity(g) + WEIGHT_TOL
