"""Disjoint CDS construction: partition the nodes of a k-connected graph into
t connected dominating sets.

Each node draws one random layer in [1..L] and one random type in {1,2,3}.
Layer-1 nodes jump-start t = max(1, floor(delta*k/log2^5 n)) classes (the
exponent drops to 2 once k >= c*sqrt(n)); every subsequent layer is assigned
by the same greedy connector stages as the packing builder, with connector
internals restricted to still-unassigned higher-layer nodes.  Classes that
fail the CDS test are absorbed into the first class that passes, so the
output is always an exact partition; the reported count is the number of
verified CDSs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .connector import find_potential_connectors, live_connectors
from .graph import Graph, is_cds, is_connected, is_dominating
from .greedy import (ClassComponents, ConnectorPool,
                     stage_long_merges, stage_random_fill, stage_short_merges)
from .packing import BuildParams


@dataclass
class NodeLabeling:
    layer: np.ndarray     # per node, 1..L
    ty: np.ndarray        # per node, 1..3
    class_of: np.ndarray  # per node, -1 until assigned


@dataclass
class PartitionResult:
    count: int
    parts: list[np.ndarray]
    t: int
    L: int
    absorbed: list[int]
    labeling: NodeLabeling
    m_trace: list[int]
    dominating_after_jump: list[bool]
    diagnostics: dict = field(default_factory=dict)


def partition_class_count(n: int, k: int, delta: float, c: float) -> int:
    """t = floor(delta*k/log2^2 n) when k >= c*sqrt(n), else the log2^5 form."""
    log2n = math.log2(n)
    if k >= c * math.sqrt(n):
        return max(1, math.floor(delta * k / log2n ** 2))
    return max(1, math.floor(delta * k / log2n ** 5))


def build_partition(g: Graph, k: int, params: BuildParams) -> PartitionResult:
    """Partition the nodes into CDSs; deterministic for a fixed seed."""
    if k < 1:
        raise ValueError("k must be positive")
    if g.n < 2:
        raise ValueError("need at least 2 nodes")
    if not is_connected(g):
        raise ValueError("graph is disconnected; no CDS exists")
    L = max(2, math.ceil(params.lam * math.log2(g.n)))
    t = params.t_override if params.t_override is not None else \
        partition_class_count(g.n, k, params.delta, params.sqrt_threshold_c)

    rng = np.random.default_rng(params.seed)
    layer = rng.integers(1, L + 1, size=g.n)
    ty = rng.integers(1, 4, size=g.n)
    class_of = np.full(g.n, -1, np.int32)
    states = [ClassComponents(g) for _ in range(t)]
    m_trace: list[int] = []

    def assign(real: int, tyv: int, cls: int) -> None:
        if class_of[real] != -1:
            raise RuntimeError("node assigned twice")
        if tyv != ty[real]:
            raise RuntimeError("assignment with a foreign type")
        class_of[real] = cls
        states[cls].add_nodes(np.array([real], dtype=np.int64))

    # Jump start: layer-1 nodes to random classes.
    first = np.flatnonzero(layer == 1)
    draws = rng.integers(0, t, size=first.shape[0])
    per_class: list[list[int]] = [[] for _ in range(t)]
    for real, cls in zip(first, draws):
        class_of[real] = cls
        per_class[cls].append(int(real))
    for cls in range(t):
        states[cls].add_nodes(np.array(per_class[cls], dtype=np.int64))
    m_trace.append(sum(st.excess() for st in states))
    dominating = [bool(is_dominating(g, st.present)) for st in states]

    for cur in range(1, L):
        new_layer = cur + 1
        allowed = layer > cur  # still-unassigned candidates for internals
        live_table = np.zeros((3, g.n), bool)
        new_mask = layer == new_layer
        live_table[ty[new_mask] - 1, np.flatnonzero(new_mask)] = True

        pool = ConnectorPool(t)
        for i, st in enumerate(states):
            if st.n_components < 2:
                continue
            proj = st.present
            for comp in st.components():
                comp_mask = np.zeros(g.n, bool)
                comp_mask[comp] = True
                rest_mask = proj & ~comp_mask
                potential = find_potential_connectors(
                    g, comp_mask, rest_mask, allowed=allowed,
                    component_id=int(comp[0]))
                live = live_connectors(potential, live_table, limit=t)
                if live:
                    pool.add_family(i, int(comp[0]), live)

        stage_short_merges(pool, np.flatnonzero(new_mask & (ty == 1)), assign)
        stage_long_merges(pool, np.flatnonzero(new_mask & (ty == 3)), assign)
        remaining = [(int(v), int(ty[v]))
                     for v in np.flatnonzero(new_mask & (class_of == -1))]
        stage_random_fill(remaining, t, rng, assign)
        m_trace.append(sum(st.excess() for st in states))

    if (class_of == -1).any():
        raise RuntimeError("some nodes were never assigned")

    class_sets = [np.flatnonzero(class_of == i) for i in range(t)]
    ok = [nodes.shape[0] > 0 and bool(is_cds(g, nodes)) for nodes in class_sets]
    valid_ids = [i for i, good in enumerate(ok) if good]
    absorbed_nodes: list[int] = []
    if valid_ids:
        host = valid_ids[0]
        for i, good in enumerate(ok):
            if not good and class_sets[i].shape[0]:
                absorbed_nodes.extend(class_sets[i].tolist())
                class_sets[host] = np.union1d(class_sets[host], class_sets[i])
        parts = [class_sets[i] for i in valid_ids]
    else:
        # No class survived; the whole vertex set is the one CDS.
        absorbed_nodes = list(range(g.n))
        parts = [np.arange(g.n, dtype=np.int64)]
    count = len(parts)

    labeling = NodeLabeling(layer=layer, ty=ty, class_of=class_of)
    return PartitionResult(
        count=count, parts=parts, t=t, L=L,
        absorbed=sorted(absorbed_nodes), labeling=labeling, m_trace=m_trace,
        dominating_after_jump=dominating,
        diagnostics={"class_ok": ok})


# ---------------------------------------------------------------------------
# Exhaustive oracle for small graphs
# ---------------------------------------------------------------------------

def brute_force_max_cds_partition(g: Graph) -> int:
    """Exact maximum number of disjoint CDSs covering all nodes (n <= 12)."""
    if g.n > 12:
        raise ValueError("exhaustive partition search is limited to n <= 12")
    if g.n == 0:
        return 0
    adj = [0] * g.n
    for v in range(g.n):
        for u in g.neighbors(v):
            adj[v] |= 1 << int(u)
    full = (1 << g.n) - 1

    def cds_mask(mask: int) -> bool:
        rest = full & ~mask
        probe = rest
        while probe:
            low = probe & -probe
            v = low.bit_length() - 1
            if not adj[v] & mask:
                return False
            probe ^= low
        low = mask & -mask
        seen = low
        frontier = low
        while frontier:
            grow = 0
            probe = frontier
            while probe:
                lowb = probe & -probe
                v = lowb.bit_length() - 1
                grow |= adj[v] & mask & ~seen
                probe ^= lowb
            seen |= grow
            frontier = grow
        return seen == mask

    all_cds = [m for m in range(1, full + 1) if cds_mask(m)]
    by_low: dict[int, list[int]] = {}
    for m in all_cds:
        by_low.setdefault(m & -m, []).append(m)

    memo: dict[int, int] = {0: 0}

    def best(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        result = -1
        for s in by_low.get(low, ()):
            if s & mask == s:
                sub = best(mask ^ s)
                if sub >= 0 and sub + 1 > result:
                    result = sub + 1
        memo[mask] = result
        return result

    return max(0, best(full))


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def partition_to_json(result: PartitionResult, *, extra: dict | None = None) -> str:
    doc = {
        "count": result.count,
        "classes": [nodes.tolist() for nodes in result.parts],
        "absorbed": result.absorbed,
        "t": result.t,
        "L": result.L,
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
