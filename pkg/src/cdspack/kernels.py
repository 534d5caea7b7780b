"""Hot graph kernels: BFS components, domination scan, union-find growth,
and unit-capacity max-flow (Dinic) for vertex cuts and bounded disjoint paths.

Every kernel is written as a plain Python function over NumPy arrays and is
JIT-compiled with numba when available.  Setting the environment variable
``CDSPACK_NO_NUMBA=1`` (or any of ``true``/``yes``) before import selects the
pure-Python fallback path; both paths run the identical code, so results are
bit-for-bit the same either way.  ``benchmarks/bench_kernels.py`` compares the
two backends.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("CDSPACK_NO_NUMBA", "").strip().lower()
    return flag not in {"1", "true", "yes", "on"}


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    def _compile(fn):
        return _njit(cache=True)(fn)
else:
    def _compile(fn):
        return fn


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "python"


# ---------------------------------------------------------------------------
# Components and domination
# ---------------------------------------------------------------------------

@_compile
def component_labels(indptr, indices, mask):
    """Label connected components of the subgraph induced by ``mask``.

    Returns (labels, count); labels[v] == -1 for nodes outside the mask.
    Components are numbered in order of their smallest member.
    """
    n = indptr.shape[0] - 1
    labels = np.full(n, -1, np.int32)
    queue = np.empty(n, np.int32)
    count = 0
    for root in range(n):
        if mask[root] and labels[root] < 0:
            labels[root] = count
            queue[0] = root
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                for j in range(indptr[u], indptr[u + 1]):
                    w = indices[j]
                    if mask[w] and labels[w] < 0:
                        labels[w] = count
                        queue[tail] = w
                        tail += 1
            count += 1
    return labels, count


@_compile
def has_undominated(indptr, indices, mask):
    """True if some node outside ``mask`` has no neighbor inside ``mask``."""
    n = indptr.shape[0] - 1
    for v in range(n):
        if not mask[v]:
            covered = False
            for j in range(indptr[v], indptr[v + 1]):
                if mask[indices[j]]:
                    covered = True
                    break
            if not covered:
                return True
    return False


@_compile
def masks_adjacent(indptr, indices, mask_a, mask_b):
    """True if any edge joins a node of ``mask_a`` to a node of ``mask_b``."""
    n = indptr.shape[0] - 1
    for v in range(n):
        if mask_a[v]:
            for j in range(indptr[v], indptr[v + 1]):
                if mask_b[indices[j]]:
                    return True
    return False


# ---------------------------------------------------------------------------
# Incremental union-find over one class projection
# ---------------------------------------------------------------------------

@_compile
def uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@_compile
def uf_add_members(parent, present, indptr, indices, new_nodes):
    """Add ``new_nodes`` to a tracked vertex set, merging with present neighbors.

    Returns the change in component count (may be negative).
    """
    delta = 0
    for idx in range(new_nodes.shape[0]):
        v = new_nodes[idx]
        if present[v]:
            continue
        present[v] = True
        parent[v] = v
        delta += 1
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if present[u]:
                ru = uf_find(parent, u)
                rv = uf_find(parent, v)
                if ru != rv:
                    parent[ru] = rv
                    delta -= 1
    return delta


# ---------------------------------------------------------------------------
# Dinic max-flow on arc arrays (arc_rev pairs forward/reverse arcs)
# ---------------------------------------------------------------------------

@_compile
def dinic(aptr, arc_to, arc_rev, arc_cap, s, t, limit):
    """Unit-augmentation Dinic; mutates ``arc_cap`` to the residual.

    ``limit`` < 0 means unlimited; otherwise augmentation stops once ``limit``
    units have been pushed.  Returns the flow found (capped at ``limit``).
    """
    nn = aptr.shape[0] - 1
    if limit == 0 or s == t:
        return 0
    level = np.empty(nn, np.int32)
    queue = np.empty(nn, np.int32)
    cursor = np.empty(nn, np.int64)
    path_arcs = np.empty(nn + 1, np.int64)
    flow = 0
    while True:
        for i in range(nn):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for ai in range(aptr[u], aptr[u + 1]):
                if arc_cap[ai] > 0:
                    v = arc_to[ai]
                    if level[v] < 0:
                        level[v] = level[u] + 1
                        queue[tail] = v
                        tail += 1
        if level[t] < 0:
            return flow
        for i in range(nn):
            cursor[i] = aptr[i]
        u = s
        depth = 0
        while True:
            if u == t:
                for d in range(depth):
                    ai = path_arcs[d]
                    arc_cap[ai] -= 1
                    arc_cap[arc_rev[ai]] += 1
                flow += 1
                if 0 <= limit <= flow:
                    return flow
                u = s
                depth = 0
                continue
            advanced = False
            while cursor[u] < aptr[u + 1]:
                ai = cursor[u]
                v = arc_to[ai]
                if arc_cap[ai] > 0 and level[v] == level[u] + 1:
                    path_arcs[depth] = ai
                    depth += 1
                    u = v
                    advanced = True
                    break
                cursor[u] += 1
            if not advanced:
                if u == s:
                    break
                level[u] = -1
                depth -= 1
                ai = path_arcs[depth]
                u = arc_to[arc_rev[ai]]
                cursor[u] += 1


# ---------------------------------------------------------------------------
# Vertex-split network for s-t vertex connectivity
# ---------------------------------------------------------------------------

@_compile
def build_split_network(indptr, indices):
    """Node-splitting reduction: v becomes v_in=2v -> v_out=2v+1 (capacity 1),
    each undirected edge {u,v} becomes u_out->v_in and v_out->u_in (capacity 1).

    Returns (aptr, arc_to, arc_rev, arc_cap) with arcs grouped by tail node.
    """
    n = indptr.shape[0] - 1
    nn = 2 * n
    m2 = indices.shape[0]
    na = 2 * n + 2 * m2
    counts = np.zeros(nn, np.int64)
    for v in range(n):
        deg = indptr[v + 1] - indptr[v]
        counts[2 * v] = 1 + deg       # split fwd + reverses of incoming edge arcs
        counts[2 * v + 1] = 1 + deg   # split rev + outgoing edge arcs
    aptr = np.zeros(nn + 1, np.int64)
    for i in range(nn):
        aptr[i + 1] = aptr[i] + counts[i]
    arc_to = np.empty(na, np.int32)
    arc_rev = np.empty(na, np.int64)
    arc_cap = np.empty(na, np.int32)
    cur = aptr[:nn].copy()
    for v in range(n):
        a = cur[2 * v]
        cur[2 * v] += 1
        b = cur[2 * v + 1]
        cur[2 * v + 1] += 1
        arc_to[a] = 2 * v + 1
        arc_cap[a] = 1
        arc_to[b] = 2 * v
        arc_cap[b] = 0
        arc_rev[a] = b
        arc_rev[b] = a
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            f = cur[2 * v + 1]
            cur[2 * v + 1] += 1
            r = cur[2 * u]
            cur[2 * u] += 1
            arc_to[f] = 2 * u
            arc_cap[f] = 1
            arc_to[r] = 2 * v + 1
            arc_cap[r] = 0
            arc_rev[f] = r
            arc_rev[r] = f
    return aptr, arc_to, arc_rev, arc_cap


@_compile
def st_vertex_connectivity(aptr, arc_to, arc_rev, cap_template, work_cap, s, t, limit):
    """Max number of internally vertex-disjoint s-t paths (<= limit if set)."""
    for i in range(cap_template.shape[0]):
        work_cap[i] = cap_template[i]
    return dinic(aptr, arc_to, arc_rev, work_cap, 2 * s + 1, 2 * t, limit)


# ---------------------------------------------------------------------------
# Maximum internally-disjoint path set with 1-2 internal nodes (4-level DAG)
# ---------------------------------------------------------------------------

@_compile
def three_level_paths(indptr, indices, comp_mask, rest_mask, blocked, limit):
    """Maximum set of internally vertex-disjoint comp->rest paths with one or
    two internal nodes, none of which lies in comp, rest, or ``blocked``.

    Flow DAG: source -> {nodes adjacent to comp} -> {nodes adjacent to rest}
    -> sink, every internal node split with capacity 1.  A node adjacent to
    both sides is routed source -> node -> sink, giving a one-internal path.
    Two-internal paths are emitted in lead-minimal form: the first internal
    has no neighbor in rest and the second none in comp.

    Returns (count, first_internal, second_internal, end_comp, end_rest);
    second_internal[i] == -1 marks a one-internal path.  Paths are ordered by
    ascending first internal id.
    """
    n = indptr.shape[0] - 1
    first_a = np.full(n, -1, np.int32)   # smallest neighbor in comp
    first_b = np.full(n, -1, np.int32)   # smallest neighbor in rest
    for v in range(n):
        if blocked[v] or comp_mask[v] or rest_mask[v]:
            continue
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if first_a[v] < 0 and comp_mask[u]:
                first_a[v] = u
            if first_b[v] < 0 and rest_mask[u]:
                first_b[v] = u
            if first_a[v] >= 0 and first_b[v] >= 0:
                break
    # Flow node ids: source 0, sink 1, v_in = 2v+2, v_out = 2v+3.
    nn = 2 * n + 2
    counts = np.zeros(nn, np.int64)
    na = 0
    for v in range(n):
        a_side = first_a[v] >= 0
        b_side = first_b[v] >= 0
        if not (a_side or b_side):
            continue
        counts[2 * v + 2] += 1          # split fwd
        counts[2 * v + 3] += 1          # split rev
        na += 2
        if a_side:
            counts[0] += 1              # source -> v_in
            counts[2 * v + 2] += 1      # reverse
            na += 2
        if a_side and b_side:
            counts[2 * v + 3] += 1      # v_out -> sink
            counts[1] += 1
            na += 2
        elif b_side:
            counts[2 * v + 3] += 1
            counts[1] += 1
            na += 2
        if a_side and not b_side:
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if (not blocked[u]) and (not comp_mask[u]) and (not rest_mask[u]):
                    if first_b[u] >= 0 and first_a[u] < 0:
                        counts[2 * v + 3] += 1   # v_out -> u_in
                        counts[2 * u + 2] += 1
                        na += 2
    aptr = np.zeros(nn + 1, np.int64)
    for i in range(nn):
        aptr[i + 1] = aptr[i] + counts[i]
    arc_to = np.empty(na, np.int32)
    arc_rev = np.empty(na, np.int64)
    arc_cap = np.empty(na, np.int32)
    cur = aptr[:nn].copy()
    # Fill order per candidate: split pair, source arc, sink arc, cross arcs.
    for v in range(n):
        a_side = first_a[v] >= 0
        b_side = first_b[v] >= 0
        if not (a_side or b_side):
            continue
        f = cur[2 * v + 2]
        cur[2 * v + 2] += 1
        r = cur[2 * v + 3]
        cur[2 * v + 3] += 1
        arc_to[f] = 2 * v + 3
        arc_cap[f] = 1
        arc_to[r] = 2 * v + 2
        arc_cap[r] = 0
        arc_rev[f] = r
        arc_rev[r] = f
        if a_side:
            f = cur[0]
            cur[0] += 1
            r = cur[2 * v + 2]
            cur[2 * v + 2] += 1
            arc_to[f] = 2 * v + 2
            arc_cap[f] = 1
            arc_to[r] = 0
            arc_cap[r] = 0
            arc_rev[f] = r
            arc_rev[r] = f
        if b_side:
            f = cur[2 * v + 3]
            cur[2 * v + 3] += 1
            r = cur[1]
            cur[1] += 1
            arc_to[f] = 1
            arc_cap[f] = 1
            arc_to[r] = 2 * v + 3
            arc_cap[r] = 0
            arc_rev[f] = r
            arc_rev[r] = f
        if a_side and not b_side:
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if (not blocked[u]) and (not comp_mask[u]) and (not rest_mask[u]):
                    if first_b[u] >= 0 and first_a[u] < 0:
                        f = cur[2 * v + 3]
                        cur[2 * v + 3] += 1
                        r = cur[2 * u + 2]
                        cur[2 * u + 2] += 1
                        arc_to[f] = 2 * u + 2
                        arc_cap[f] = 1
                        arc_to[r] = 2 * v + 3
                        arc_cap[r] = 0
                        arc_rev[f] = r
                        arc_rev[r] = f
    flow = dinic(aptr, arc_to, arc_rev, arc_cap, 0, 1, limit)
    i1 = np.empty(flow, np.int32)
    i2 = np.empty(flow, np.int32)
    ea = np.empty(flow, np.int32)
    eb = np.empty(flow, np.int32)
    k = 0
    for v in range(n):
        if first_a[v] < 0:
            continue
        split = aptr[2 * v + 2]
        if arc_cap[split] != 0:
            continue
        # One saturated forward arc leaves v_out (skip slot 0, the split rev).
        for ai in range(aptr[2 * v + 3] + 1, aptr[2 * v + 3 + 1]):
            if arc_cap[ai] == 0 and arc_to[ai] != 2 * v + 2:
                dest = arc_to[ai]
                if dest == 1:
                    i1[k] = v
                    i2[k] = -1
                    ea[k] = first_a[v]
                    eb[k] = first_b[v]
                else:
                    u = (dest - 2) // 2
                    i1[k] = v
                    i2[k] = u
                    ea[k] = first_a[v]
                    eb[k] = first_b[u]
                k += 1
                break
    return k, i1, i2, ea, eb


# Plain-Python views of every kernel (the compiled object keeps the original
# function on .py_func); used by tests and the backend benchmark.
if NUMBA_ENABLED:
    PY_KERNELS = {
        "component_labels": component_labels.py_func,
        "has_undominated": has_undominated.py_func,
        "masks_adjacent": masks_adjacent.py_func,
        "uf_add_members": uf_add_members.py_func,
        "dinic": dinic.py_func,
        "build_split_network": build_split_network.py_func,
        "three_level_paths": three_level_paths.py_func,
    }
else:
    PY_KERNELS = {
        "component_labels": component_labels,
        "has_undominated": has_undominated,
        "masks_adjacent": masks_adjacent,
        "uf_add_members": uf_add_members,
        "dinic": dinic,
        "build_split_network": build_split_network,
        "three_level_paths": three_level_paths,
    }
