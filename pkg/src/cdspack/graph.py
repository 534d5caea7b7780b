"""Undirected simple graphs over dense integer ids, plus the primitives the
rest of the toolkit is built on: induced subgraphs, components, domination,
connected-dominating-set tests, exact vertex connectivity, and maximum sets of
internally vertex-disjoint paths with at most two internal nodes.

Graphs are immutable CSR structures; all operations are pure functions, so
instances can be shared freely across threads or processes.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from . import kernels


class GraphFormatError(ValueError):
    """Raised for malformed edge-list files."""


class Graph:
    """Immutable undirected simple graph with node ids 0..n-1.

    Adjacency is stored CSR-style (``indptr``, ``indices``) with each
    neighbor list sorted ascending; no self-loops, no parallel edges.
    """

    __slots__ = ("n", "indptr", "indices")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        indptr.flags.writeable = False
        indices.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError("node count must be non-negative")
        pairs = set()
        for u, v in edges:
            u = int(u)
            v = int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            pairs.add((u, v) if u < v else (v, u))
        m = len(pairs)
        if m == 0:
            return cls(n, np.zeros(n + 1, np.int64), np.empty(0, np.int32))
        arr = np.array(sorted(pairs), dtype=np.int32)
        src = np.concatenate([arr[:, 0], arr[:, 1]])
        dst = np.concatenate([arr[:, 1], arr[:, 0]])
        order = np.lexsort((dst, src))
        src = src[order]
        dst = dst[order]
        indptr = np.zeros(n + 1, np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        return cls(n, indptr, dst.astype(np.int32))

    @property
    def m(self) -> int:
        return self.indices.shape[0] // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.shape[0] and row[i] == v)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Node sets
# ---------------------------------------------------------------------------

def as_mask(n: int, nodes) -> np.ndarray:
    """Normalize a node set (iterable of ids or boolean mask) to a bool mask."""
    if isinstance(nodes, np.ndarray) and nodes.dtype == bool:
        if nodes.shape[0] != n:
            raise ValueError(f"mask length {nodes.shape[0]} != n={n}")
        return nodes
    mask = np.zeros(n, bool)
    for v in nodes:
        v = int(v)
        if not (0 <= v < n):
            raise ValueError(f"node {v} out of range for n={n}")
        mask[v] = True
    return mask


def mask_to_nodes(mask: np.ndarray) -> np.ndarray:
    return np.flatnonzero(mask).astype(np.int64)


# ---------------------------------------------------------------------------
# Basic operations
# ---------------------------------------------------------------------------

def induced_subgraph(g: Graph, s) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by node set ``s``.

    Returns (subgraph, mapping) where mapping[new_id] = old_id; new ids
    follow ascending old ids.
    """
    mask = as_mask(g.n, s)
    mapping = mask_to_nodes(mask)
    new_id = np.full(g.n, -1, np.int64)
    new_id[mapping] = np.arange(mapping.shape[0])
    keep_src = np.repeat(mask, np.diff(g.indptr))
    keep = keep_src & mask[g.indices]
    src_all = np.repeat(np.arange(g.n), np.diff(g.indptr))
    sub_src = new_id[src_all[keep]]
    sub_dst = new_id[g.indices[keep]]
    indptr = np.zeros(mapping.shape[0] + 1, np.int64)
    np.add.at(indptr, sub_src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return Graph(mapping.shape[0], indptr, sub_dst.astype(np.int32)), mapping


def connected_components(g: Graph, s) -> list[np.ndarray]:
    """Partition of ``s`` into maximal sets connected within g[s].

    Components are ordered by smallest member; members ascend.
    """
    mask = as_mask(g.n, s)
    labels, count = kernels.component_labels(g.indptr, g.indices, mask)
    comps: list[list[int]] = [[] for _ in range(count)]
    for v in mask_to_nodes(mask):
        comps[labels[v]].append(int(v))
    return [np.array(c, dtype=np.int64) for c in comps]


def is_connected(g: Graph, s=None) -> bool:
    """True iff g[s] (default: the whole graph) is connected and nonempty."""
    mask = as_mask(g.n, s) if s is not None else np.ones(g.n, bool)
    if not mask.any():
        return False
    _, count = kernels.component_labels(g.indptr, g.indices, mask)
    return count == 1


def is_dominating(g: Graph, s) -> bool:
    """True iff every node outside ``s`` has at least one neighbor in ``s``."""
    mask = as_mask(g.n, s)
    return not kernels.has_undominated(g.indptr, g.indices, mask)


def is_cds(g: Graph, s) -> bool:
    """True iff ``s`` is nonempty, dominating, and g[s] is connected."""
    mask = as_mask(g.n, s)
    if not mask.any():
        return False
    if kernels.has_undominated(g.indptr, g.indices, mask):
        return False
    _, count = kernels.component_labels(g.indptr, g.indices, mask)
    return count == 1


# ---------------------------------------------------------------------------
# Vertex connectivity (exact, flow-based)
# ---------------------------------------------------------------------------

class _SplitNetwork(NamedTuple):
    aptr: np.ndarray
    arc_to: np.ndarray
    arc_rev: np.ndarray
    cap: np.ndarray


def _split_network(g: Graph) -> _SplitNetwork:
    return _SplitNetwork(*kernels.build_split_network(g.indptr, g.indices))


def local_vertex_connectivity(g: Graph, s: int, t: int, limit: int = -1,
                              net: _SplitNetwork | None = None) -> int:
    """Max number of internally vertex-disjoint s-t paths (Menger).

    Only meaningful for non-adjacent s, t; ``limit`` caps the search.
    """
    if s == t:
        raise ValueError("endpoints must differ")
    if g.has_edge(s, t):
        raise ValueError("endpoints must be non-adjacent")
    if net is None:
        net = _split_network(g)
    work = np.empty_like(net.cap)
    return int(kernels.st_vertex_connectivity(
        net.aptr, net.arc_to, net.arc_rev, net.cap, work, s, t, limit))


def vertex_connectivity(g: Graph) -> int:
    """Exact vertex connectivity: size of a minimum vertex cut.

    Conventions: n-1 for complete graphs, 0 for disconnected graphs.
    Computed by unit-capacity max-flow from a minimum-degree node to each of
    its non-neighbors, plus flows between non-adjacent neighbor pairs.
    """
    if g.n < 2:
        raise ValueError("vertex connectivity needs at least 2 nodes")
    if g.is_complete():
        return g.n - 1
    if not is_connected(g):
        return 0
    net = _split_network(g)
    work = np.empty_like(net.cap)
    degs = g.degrees()
    v0 = int(np.argmin(degs))
    best = int(degs[v0])
    non_neighbors = np.setdiff1d(np.arange(g.n), np.append(g.neighbors(v0), v0))
    for w in non_neighbors:
        f = int(kernels.st_vertex_connectivity(
            net.aptr, net.arc_to, net.arc_rev, net.cap, work, v0, int(w), best))
        if f < best:
            best = f
            if best == 1:
                return 1
    neigh = g.neighbors(v0)
    for i in range(neigh.shape[0]):
        for j in range(i + 1, neigh.shape[0]):
            x, y = int(neigh[i]), int(neigh[j])
            if not g.has_edge(x, y):
                f = int(kernels.st_vertex_connectivity(
                    net.aptr, net.arc_to, net.arc_rev, net.cap, work, x, y, best))
                if f < best:
                    best = f
                    if best == 1:
                        return 1
    return best


# ---------------------------------------------------------------------------
# Bounded-length disjoint path packing
# ---------------------------------------------------------------------------

class BoundedPath(NamedTuple):
    """A path with one endpoint on each side and 1-2 internal nodes."""
    start: int
    internals: tuple[int, ...]
    end: int


def max_disjoint_bounded_paths(g: Graph, a, b, forbidden=None,
                               cap: int | None = None) -> list[BoundedPath]:
    """Maximum-cardinality set of internally vertex-disjoint a-b paths whose
    1-2 internal nodes avoid a, b, and ``forbidden``.

    Exact via max-flow on a 4-level DAG (source = a contracted, one level per
    internal position, sink = b contracted, internal nodes split with unit
    capacity).  Direct a-b edges are not counted as paths.  Deterministic:
    paths come back ordered by their first internal node id.
    """
    a_mask = as_mask(g.n, a)
    b_mask = as_mask(g.n, b)
    if not a_mask.any() or not b_mask.any():
        raise ValueError("endpoint sets must be nonempty")
    if (a_mask & b_mask).any():
        raise ValueError("endpoint sets must be disjoint")
    blocked = as_mask(g.n, forbidden) if forbidden is not None else np.zeros(g.n, bool)
    limit = -1 if cap is None else int(cap)
    count, i1, i2, ea, eb = kernels.three_level_paths(
        g.indptr, g.indices, a_mask, b_mask, blocked, limit)
    paths = []
    for idx in range(count):
        if i2[idx] < 0:
            internals = (int(i1[idx]),)
        else:
            internals = (int(i1[idx]), int(i2[idx]))
        paths.append(BoundedPath(int(ea[idx]), internals, int(eb[idx])))
    return paths


# ---------------------------------------------------------------------------
# Edge-list I/O
# ---------------------------------------------------------------------------

def load_edgelist(path) -> Graph:
    """Read the text edge-list format: a header line ``n m`` then m lines
    ``u v`` with 0-indexed endpoints; ``#`` starts a comment."""
    tokens: list[list[str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                tokens.append(line.split())
    if not tokens:
        raise GraphFormatError(f"{path}: empty graph file")
    head = tokens[0]
    if len(head) != 2:
        raise GraphFormatError(f"{path}: header must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphFormatError(f"{path}: bad header {head!r}") from exc
    if len(tokens) - 1 != m:
        raise GraphFormatError(
            f"{path}: header claims {m} edges, file has {len(tokens) - 1}")
    edges = []
    for row in tokens[1:]:
        if len(row) != 2:
            raise GraphFormatError(f"{path}: bad edge line {row!r}")
        try:
            u, v = int(row[0]), int(row[1])
        except ValueError as exc:
            raise GraphFormatError(f"{path}: bad edge line {row!r}") from exc
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def save_edgelist(g: Graph, path) -> None:
    """Write the canonical edge list: sorted edges, each with u < v."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u in range(g.n):
            for v in g.neighbors(u):
                if u < v:
                    fh.write(f"{u} {v}\n")
