"""Greedy per-layer class assignment shared by the packing and partition
builders.

Each layer transition works from a pool of live connector families, one
family per (class, component), capped at t paths.  Three stages assign the
new layer's nodes: type-1 nodes join the class where they merge the most
components via short connectors, type-3 nodes (together with their type-2
partners) do the same via long connectors, and whatever remains is assigned
uniformly at random.  Removal bookkeeping keeps the accounting bounded:
a short-stage step removes at most 2*delta*t paths and a long-stage step at
most 3*delta*t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .connector import LONG, SHORT, ConnectorPath
from .graph import Graph


class ClassComponents:
    """Incremental connected components of one class's node set in the base
    graph (union-find over real ids)."""

    __slots__ = ("g", "parent", "present", "n_components")

    def __init__(self, g: Graph):
        self.g = g
        self.parent = np.arange(g.n, dtype=np.int64)
        self.present = np.zeros(g.n, dtype=bool)
        self.n_components = 0

    def add_nodes(self, reals: np.ndarray) -> None:
        if reals.shape[0] == 0:
            return
        delta = kernels.uf_add_members(
            self.parent, self.present, self.g.indptr, self.g.indices,
            np.asarray(reals, dtype=np.int64))
        self.n_components += int(delta)

    def nodes(self) -> np.ndarray:
        return np.flatnonzero(self.present)

    def excess(self) -> int:
        return max(0, self.n_components - 1)

    def components(self) -> list[np.ndarray]:
        """Canonical component list: ordered by smallest member, members sorted."""
        groups: dict[int, list[int]] = {}
        for v in self.nodes():
            root = int(kernels.uf_find(self.parent, int(v)))
            groups.setdefault(root, []).append(int(v))
        return [np.array(c, dtype=np.int64)
                for c in sorted(groups.values(), key=lambda c: c[0])]


@dataclass
class _PoolEntry:
    cls: int
    comp_key: int
    path: ConnectorPath
    alive: bool = True


@dataclass
class StageEvent:
    stage: str
    node: int
    cls: int
    delta: int
    removed: int
    partners: tuple[int, ...] = ()


class ConnectorPool:
    """Live connector families for one layer transition, with removal
    bookkeeping indexed by internal (real, type) units."""

    def __init__(self, t: int):
        self.t = t
        self.entries: list[_PoolEntry] = []
        self.by_internal: dict[tuple[int, int], list[int]] = {}
        self.by_family: dict[tuple[int, int], list[int]] = {}

    def add_family(self, cls: int, comp_key: int, paths: list[ConnectorPath]) -> None:
        if len(paths) > self.t:
            raise ValueError("family exceeds the per-component cap")
        idxs = []
        for path in paths:
            idx = len(self.entries)
            self.entries.append(_PoolEntry(cls, comp_key, path))
            for unit in path.internal_units():
                self.by_internal.setdefault(unit, []).append(idx)
            idxs.append(idx)
        if idxs:
            self.by_family[(cls, comp_key)] = idxs

    def families_through(self, real: int, ty: int, kind: str) -> dict[int, dict[int, int]]:
        """Alive families with a ``kind`` path through unit (real, ty), as
        {class: {comp_key: entry index}}."""
        out: dict[int, dict[int, int]] = {}
        for idx in self.by_internal.get((real, ty), ()):  # insertion order
            e = self.entries[idx]
            if e.alive and e.path.kind == kind:
                fam = out.setdefault(e.cls, {})
                if e.comp_key in fam:
                    raise RuntimeError("family has two paths through one unit")
                fam[e.comp_key] = idx
        return out

    def remove_internal(self, real: int, ty: int) -> int:
        removed = 0
        for idx in self.by_internal.get((real, ty), ()):
            if self.entries[idx].alive:
                self.entries[idx].alive = False
                removed += 1
        return removed

    def remove_family(self, cls: int, comp_key: int) -> int:
        removed = 0
        for idx in self.by_family.get((cls, comp_key), ()):
            if self.entries[idx].alive:
                self.entries[idx].alive = False
                removed += 1
        return removed


def _argmax_class(fams: dict[int, dict[int, int]]) -> tuple[int, int]:
    """Class with the most mergeable components; ties go to the lowest id."""
    best_cls = -1
    best = 0
    for cls in sorted(fams):
        d = len(fams[cls])
        if d > best:
            best = d
            best_cls = cls
    return best_cls, best


AssignFn = Callable[[int, int, int], None]  # (real, ty, cls)


def stage_short_merges(pool: ConnectorPool, type1_reals, assign: AssignFn) -> list[StageEvent]:
    """Assign type-1 nodes that sit on short connectors of some class."""
    events = []
    for v in type1_reals:
        v = int(v)
        fams = pool.families_through(v, 1, SHORT)
        cls, delta = _argmax_class(fams)
        if delta < 1:
            continue
        assign(v, 1, cls)
        removed = pool.remove_internal(v, 1)
        for comp_key in sorted(fams[cls]):
            removed += pool.remove_family(cls, comp_key)
        if removed > 2 * delta * pool.t:
            raise RuntimeError("short-stage removal budget exceeded")
        events.append(StageEvent(SHORT, v, cls, delta, removed))
    return events


def stage_long_merges(pool: ConnectorPool, type3_reals, assign: AssignFn) -> list[StageEvent]:
    """Assign type-3 nodes on long connectors, together with the type-2
    partner of every satisfied component."""
    events = []
    for u in type3_reals:
        u = int(u)
        fams = pool.families_through(u, 3, LONG)
        cls, delta = _argmax_class(fams)
        if delta < 1:
            continue
        partners = tuple(pool.entries[idx].path.internals[0]
                         for _, idx in sorted(fams[cls].items()))
        assign(u, 3, cls)
        for w in partners:
            assign(int(w), 2, cls)
        removed = pool.remove_internal(u, 3)
        for w in partners:
            removed += pool.remove_internal(int(w), 2)
        for comp_key in sorted(fams[cls]):
            removed += pool.remove_family(cls, comp_key)
        if removed > 3 * delta * pool.t:
            raise RuntimeError("long-stage removal budget exceeded")
        events.append(StageEvent(LONG, u, cls, delta, removed, partners))
    return events


def stage_random_fill(units, t: int, rng: np.random.Generator,
                      assign: AssignFn) -> np.ndarray:
    """Assign the remaining (real, ty) units to uniformly random classes.

    Units must already be in canonical (real, ty) order; returns the draws.
    """
    units = list(units)
    if not units:
        return np.empty(0, dtype=np.int64)
    draws = rng.integers(0, t, size=len(units))
    for (real, ty), cls in zip(units, draws):
        assign(int(real), int(ty), int(cls))
    return draws


@dataclass
class MergeDiagnostics:
    """Counters accumulated across layer transitions."""
    abundance_events: int = 0
    abundance_hits: int = 0
    short_events: int = 0
    long_events: int = 0
    removal_total: int = 0
    fast_merge_checks: list[tuple[int, int]] = field(default_factory=list)

    @property
    def abundance_rate(self) -> float | None:
        if self.abundance_events == 0:
            return None
        return self.abundance_hits / self.abundance_events
