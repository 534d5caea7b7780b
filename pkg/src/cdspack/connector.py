"""Connector paths: short length-2 / long length-3 routes that can merge one
component of a class with the rest of its class.

A potential connector for component C (within class projection S) runs from a
node of C to a node of S \\ C through 1 or 2 internal nodes outside S, and is
minimal: in a two-internal path s,u,w,t the first internal u has no neighbor
in S \\ C and the second internal w has no neighbor in C.  Internal nodes get
types: a lone internal is type 1; in a two-internal path the C-side internal
is type 2 and the far internal is type 3.  A potential connector is live once
its typed internals are sampled in the next layer.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from . import kernels
from .graph import Graph, as_mask, max_disjoint_bounded_paths
from .virtual import VirtualNode

SHORT = "short"
LONG = "long"


@dataclass(frozen=True)
class ConnectorPath:
    component_id: int
    endpoint_in: int
    endpoint_out: int
    internals: tuple[int, ...]
    kind: str

    @property
    def internal_types(self) -> tuple[int, ...]:
        return (1,) if self.kind == SHORT else (2, 3)

    def internal_units(self) -> tuple[tuple[int, int], ...]:
        """(real, type) pairs for the internal nodes."""
        return tuple(zip(self.internals, self.internal_types))


def find_potential_connectors(g: Graph, comp_proj, rest_proj,
                              cap: int | None = None,
                              allowed=None,
                              component_id: int = 0) -> list[ConnectorPath]:
    """Maximum disjoint set of potential connectors from comp to rest.

    ``allowed`` optionally restricts internal candidates (e.g. to nodes of
    higher layers).  The two sides must be distinct components: an edge
    between them is a contract violation.  Output is deterministic, ordered
    by first internal node id, and already minimal (the flow construction
    only routes two-internal paths through a type-2 candidate with no rest
    neighbor and a type-3 candidate with no comp neighbor); the trimming pass
    is still applied as a guard.
    """
    comp_mask = as_mask(g.n, comp_proj)
    rest_mask = as_mask(g.n, rest_proj)
    if not comp_mask.any() or not rest_mask.any():
        raise ValueError("component and rest must be nonempty")
    if (comp_mask & rest_mask).any():
        raise ValueError("component and rest must be disjoint")
    if kernels.masks_adjacent(g.indptr, g.indices, comp_mask, rest_mask):
        raise ValueError("component is adjacent to the rest of its class; "
                         "these are not separate components")
    forbidden = None if allowed is None else ~as_mask(g.n, allowed)
    raw = max_disjoint_bounded_paths(g, comp_mask, rest_mask,
                                     forbidden=forbidden, cap=cap)
    out = []
    for path in raw:
        kind = SHORT if len(path.internals) == 1 else LONG
        conn = ConnectorPath(component_id, path.start, path.end,
                             tuple(path.internals), kind)
        out.append(trim_to_minimal(g, conn, comp_mask, rest_mask))
    return out


def trim_to_minimal(g: Graph, path: ConnectorPath, comp_proj, rest_proj) -> ConnectorPath:
    """Shorten a two-internal connector that skips a side.

    If the first internal also neighbors the rest, or the second also
    neighbors the component, the path collapses to a one-internal connector;
    minimal paths come back unchanged.
    """
    if path.kind == SHORT:
        return path
    comp_mask = as_mask(g.n, comp_proj)
    rest_mask = as_mask(g.n, rest_proj)
    u, w = path.internals
    u_rest = g.neighbors(u)[rest_mask[g.neighbors(u)]]
    if u_rest.shape[0] > 0:
        return replace(path, endpoint_out=int(u_rest[0]), internals=(u,), kind=SHORT)
    w_comp = g.neighbors(w)[comp_mask[g.neighbors(w)]]
    if w_comp.shape[0] > 0:
        return replace(path, endpoint_in=int(w_comp[0]), internals=(w,), kind=SHORT)
    return path


def is_live_connector(path: ConnectorPath,
                      sampled_next_layer: Iterable[VirtualNode]) -> bool:
    """True iff every internal (real, type) pair is sampled in the next layer."""
    have = {(vn.real, vn.ty) for vn in sampled_next_layer}
    return all(unit in have for unit in path.internal_units())


def live_connectors(paths: list[ConnectorPath], sampled_units: np.ndarray,
                    limit: int | None = None) -> list[ConnectorPath]:
    """Filter by a (types, n) boolean table of sampled next-layer units and
    keep at most ``limit`` paths, preserving discovery order."""
    out = []
    for path in paths:
        if all(sampled_units[ty - 1, real] for real, ty in path.internal_units()):
            out.append(path)
            if limit is not None and len(out) >= limit:
                break
    return out
