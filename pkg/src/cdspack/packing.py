"""Layered construction of connected-dominating-set packings.

For a k-connected base graph sampled with probability p, the builder works on
3L typed virtual copies per layer (L = max(2, ceil(lambda*log2 n))), samples
each copy with the coupled probability q, and assigns sampled copies to
t = max(1, floor(delta*k*q^2)) classes: layers 1..L/2 go to uniformly random
classes, and every later layer is assigned by the greedy connector stages so
that each class's projection merges into a single connected piece.  Classes
that end up as CDSs of the sampled subgraph become packing entries with the
uniform exact weight 1/mu, where mu is the realized maximum number of entries
any real node belongs to (mu <= 3L, so the packing is always feasible).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .connector import find_potential_connectors, live_connectors
from .graph import Graph, induced_subgraph, is_cds, is_dominating
from .greedy import (ClassComponents, ConnectorPool, MergeDiagnostics,
                     stage_long_merges, stage_random_fill, stage_short_merges)
from .verifier import verify_packing
from .virtual import LayerConfig

ABSORB = "absorb"
REPORT_PARTIAL = "report-partial"


@dataclass(frozen=True)
class BuildParams:
    lam: float = 4.0
    delta: float = 1.0 / 16.0
    p: float = 1.0
    seed: int = 0
    fallback_policy: str = ABSORB
    sqrt_threshold_c: float = 1.0
    t_override: int | None = None

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise ValueError("delta must be in (0, 1]")
        if self.lam < 1.0:
            raise ValueError("lambda must be at least 1")
        if self.fallback_policy not in (ABSORB, REPORT_PARTIAL):
            raise ValueError(f"unknown fallback policy {self.fallback_policy!r}")
        if self.t_override is not None and self.t_override < 1:
            raise ValueError("t override must be positive")


@dataclass
class CdsPacking:
    """Weighted collection of CDSs with per-node weight sums at most 1."""
    n: int
    entries: list[tuple[np.ndarray, Fraction]]

    @property
    def size_exact(self) -> Fraction:
        return sum((w for _, w in self.entries), Fraction(0))

    @property
    def size(self) -> float:
        return float(self.size_exact)

    def weight_sums(self) -> np.ndarray:
        sums = np.zeros(self.n, float)
        for nodes, w in self.entries:
            sums[np.asarray(nodes, dtype=np.int64)] += float(w)
        return sums


@dataclass
class ClassAssignment:
    """Trace of one build: who joined which class, component counts per layer
    (n_trace), and the excess-component totals (m_trace)."""
    t: int
    cfg: LayerConfig
    class_of: np.ndarray                  # (L, copies, n), -1 where unassigned
    m_trace: list[int]
    n_trace: np.ndarray                   # (L, t) component counts
    dominating_after_jump: list[bool]
    diagnostics: dict = field(default_factory=dict)

    def class_nodes(self, i: int) -> np.ndarray:
        return np.flatnonzero((self.class_of == i).any(axis=(0, 1)))


def packing_class_count(k: int, q: float, delta: float) -> int:
    return max(1, math.floor(delta * k * q * q))


def build_packing(g: Graph, k: int, params: BuildParams) -> tuple[CdsPacking, ClassAssignment]:
    """Construct and verify a CDS packing of the sampled subgraph.

    ``k`` is the vertex connectivity (or a caller-asserted lower bound).
    Deterministic for a fixed seed.
    """
    if g.n < 1:
        raise ValueError("empty graph")
    if k < 1:
        raise ValueError("k must be positive")
    if not 0.0 <= params.p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    cfg = LayerConfig.for_graph(g.n, params.p, lam=params.lam, copies_per_layer=3)
    L, copies = cfg.L, cfg.copies_per_layer
    t = params.t_override if params.t_override is not None else \
        packing_class_count(k, cfg.q, params.delta)
    rng = np.random.default_rng(params.seed)
    sampled = rng.random((L, copies, g.n)) < cfg.q

    states = [ClassComponents(g) for _ in range(t)]
    class_of = np.full((L, copies, g.n), -1, np.int32)
    m_trace: list[int] = []
    n_trace = np.zeros((L, t), np.int32)
    diag = MergeDiagnostics()

    def record_layer(li: int) -> None:
        for i, st in enumerate(states):
            n_trace[li, i] = st.n_components
        m_trace.append(sum(st.excess() for st in states))

    def sampled_units(li: int) -> list[tuple[int, int]]:
        hits = np.argwhere(sampled[li].T)  # (real, ty0) ascending
        return [(int(r), int(ty0) + 1) for r, ty0 in hits]

    def assign_unit(li: int, real: int, ty: int, cls: int) -> None:
        if class_of[li, ty - 1, real] != -1:
            raise RuntimeError("virtual node assigned twice")
        class_of[li, ty - 1, real] = cls
        states[cls].add_nodes(np.array([real], dtype=np.int64))

    half = L // 2
    # Jump start: layers 1..L/2 go to uniformly random classes.
    for li in range(half):
        units = sampled_units(li)
        draws = rng.integers(0, t, size=len(units))
        per_class: list[list[int]] = [[] for _ in range(t)]
        for (real, ty), cls in zip(units, draws):
            class_of[li, ty - 1, real] = cls
            per_class[cls].append(real)
        for cls in range(t):
            states[cls].add_nodes(np.array(per_class[cls], dtype=np.int64))
        record_layer(li)

    dominating = [bool(is_dominating(g, st.present)) for st in states]

    # Merger phase: assign layer li from the families of layers < li.
    for li in range(half, L):
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
                    g, comp_mask, rest_mask, component_id=int(comp[0]))
                live = live_connectors(potential, sampled[li], limit=t)
                diag.abundance_events += 1
                if len(live) >= t:
                    diag.abundance_hits += 1
                if live:
                    pool.add_family(i, int(comp[0]), live)

        def assign(real: int, ty: int, cls: int, li=li) -> None:
            assign_unit(li, real, ty, cls)

        ev_s = stage_short_merges(pool, np.flatnonzero(sampled[li, 0]), assign)
        ev_l = stage_long_merges(pool, np.flatnonzero(sampled[li, 2]), assign)
        diag.short_events += len(ev_s)
        diag.long_events += len(ev_l)
        diag.removal_total += sum(e.removed for e in ev_s + ev_l)
        remaining = [(real, ty) for real, ty in sampled_units(li)
                     if class_of[li, ty - 1, real] == -1]
        stage_random_fill(remaining, t, rng, assign)
        record_layer(li)
        if m_trace[li - 1] > 0:
            diag.fast_merge_checks.append((m_trace[li - 1], m_trace[li]))

    packing, info = _assemble_entries(g, sampled, states, params.fallback_policy)
    assignment = ClassAssignment(
        t=t, cfg=cfg, class_of=class_of, m_trace=m_trace, n_trace=n_trace,
        dominating_after_jump=dominating,
        diagnostics={
            "abundance_events": diag.abundance_events,
            "abundance_hits": diag.abundance_hits,
            "abundance_rate": diag.abundance_rate,
            "short_events": diag.short_events,
            "long_events": diag.long_events,
            "removal_total": diag.removal_total,
            "fast_merge_checks": diag.fast_merge_checks,
            **info,
        })
    return packing, assignment


def _assemble_entries(g: Graph, sampled: np.ndarray, states, policy: str):
    """Turn class projections into weighted entries; classes failing the CDS
    test are absorbed into the first valid class (or dropped under the
    report-partial policy)."""
    sampled_mask = sampled.any(axis=(0, 1))
    sub, mapping = induced_subgraph(g, sampled_mask)
    inv = np.full(g.n, -1, np.int64)
    inv[mapping] = np.arange(mapping.shape[0])

    node_sets = [st.nodes() for st in states]
    ok = [nodes.shape[0] > 0 and bool(is_cds(sub, inv[nodes]))
          for nodes in node_sets]
    valid_ids = [i for i, good in enumerate(ok) if good]
    failed_ids = [i for i, good in enumerate(ok) if not good]

    entry_sets: list[np.ndarray] = []
    if valid_ids:
        if policy == ABSORB and failed_ids:
            host = valid_ids[0]
            absorbed = [node_sets[i] for i in failed_ids if node_sets[i].shape[0]]
            node_sets[host] = np.union1d(node_sets[host],
                                         np.concatenate(absorbed) if absorbed
                                         else np.empty(0, np.int64))
        entry_sets = [node_sets[i] for i in valid_ids]

    mu = 0
    if entry_sets:
        counts = np.zeros(g.n, np.int64)
        for nodes in entry_sets:
            counts[nodes] += 1
        mu = int(counts.max())
    weight = Fraction(1, mu) if mu else Fraction(0)
    packing = CdsPacking(g.n, [(nodes, weight) for nodes in entry_sets])
    report = verify_packing(g, packing, sampled_mask)
    info = {
        "valid": report.passed and bool(entry_sets),
        "mu": mu,
        "failed_classes": failed_ids,
        "verify_messages": report.messages,
        "sampled_count": int(sampled_mask.sum()),
    }
    return packing, info


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def packing_to_json(packing: CdsPacking, *, n: int, k: int, p: float, t: int,
                    L: int, valid: bool, m_trace: list[int],
                    extra: dict | None = None) -> str:
    doc = {
        "n": n,
        "k": k,
        "p": p,
        "t": t,
        "L": L,
        "classes": [np.asarray(nodes).tolist() for nodes, _ in packing.entries],
        "weights": [float(w) for _, w in packing.entries],
        "size": packing.size,
        "valid": valid,
        "m_trace": list(m_trace),
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def packing_from_json(text: str) -> tuple[CdsPacking, dict]:
    doc = json.loads(text)
    entries = [(np.array(nodes, dtype=np.int64), Fraction(w).limit_denominator(10 ** 12))
               for nodes, w in zip(doc["classes"], doc["weights"])]
    return CdsPacking(int(doc["n"]), entries), doc
