"""Layered virtual view of a base graph.

The virtual graph has L layers, each holding 1 or 3 typed copies of every
real node.  Two virtual nodes are adjacent iff they are copies of the same
real node or copies of adjacent real nodes; adjacency is always derived from
the base graph, never materialized.  Sampling couples per-copy probability q
to a target per-real-node probability p via 1 - (1-q)^(copies) = p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .graph import Graph


class VirtualNode(NamedTuple):
    real: int
    layer: int
    ty: int = 1


def coupling_probability(p: float, total_copies: int) -> float:
    """Per-copy probability q with 1 - (1-q)^total_copies == p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must be in [0, 1]")
    if total_copies < 1:
        raise ValueError("need at least one copy")
    if p == 1.0:
        return 1.0
    if p == 0.0:
        return 0.0
    return -math.expm1(math.log1p(-p) / total_copies)


@dataclass(frozen=True)
class LayerConfig:
    L: int
    copies_per_layer: int
    lam: float
    p: float
    q: float

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("need at least 2 layers")
        if self.copies_per_layer not in (1, 3):
            raise ValueError("copies per layer must be 1 or 3")
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.q <= 1.0):
            raise ValueError("probabilities must be in [0, 1]")
        back = 1.0 - (1.0 - self.q) ** self.total_copies
        if abs(back - self.p) > 1e-12:
            raise ValueError("q is not coupled to p")

    @property
    def total_copies(self) -> int:
        return self.L * self.copies_per_layer

    @classmethod
    def for_graph(cls, n: int, p: float, lam: float = 4.0,
                  copies_per_layer: int = 3) -> "LayerConfig":
        """Layer count L = max(2, ceil(lam * log2 n)) with coupled q."""
        if n < 2:
            raise ValueError("need at least 2 nodes")
        L = max(2, math.ceil(lam * math.log2(n)))
        q = coupling_probability(p, copies_per_layer * L)
        return cls(L=L, copies_per_layer=copies_per_layer, lam=lam, p=p, q=q)


def virtual_adjacent(g: Graph, a: VirtualNode, b: VirtualNode) -> bool:
    """Copies of one real node, or of two adjacent real nodes, are adjacent."""
    if a == b:
        raise ValueError("virtual nodes must differ")
    return a.real == b.real or g.has_edge(a.real, b.real)


def project(vs: Iterable[VirtualNode]) -> set[int]:
    """Real nodes with at least one copy in ``vs``."""
    return {v.real for v in vs}


def sample_virtual_layer(g: Graph, cfg: LayerConfig, layer: int,
                         rng: np.random.Generator) -> set[VirtualNode]:
    """Sample each virtual node of one layer independently with probability q.

    Draws a (copies, n) block in C order, matching the builders' bulk draw.
    """
    if not (1 <= layer <= cfg.L):
        raise ValueError(f"layer must be in [1, {cfg.L}]")
    hits = rng.random((cfg.copies_per_layer, g.n)) < cfg.q
    out = set()
    for ty in range(cfg.copies_per_layer):
        for real in np.flatnonzero(hits[ty]):
            out.add(VirtualNode(int(real), layer, ty + 1))
    return out
