"""Pure-Python search kernels.

Reference implementation of the hot inner loops: linear-tree embedding,
exact disjoint-edge search, and the branch-and-bound that maximizes how
many candidate edges can be added to a linear system while avoiding
forbidden configurations.  The compiled backend in ``_fast.pyx`` mirrors
this module function for function and must stay behaviourally identical
(same iteration order, same witnesses); ``tests/test_backends.py``
enforces that.

Vertex sets are bitmasks: Python ints here (any n), single 64-bit words
in the compiled backend (n <= 64 there).
"""

from __future__ import annotations

import itertools
import time

NAME = "pure"
MAX_N = None  # unbounded


def _mask(edge):
    m = 0
    for v in edge:
        m |= 1 << v
    return m


def prep_pattern(pattern_edges):
    """Precompute attachment structure of a linear-tree pattern edge list.

    Edge 0 introduces all its vertices; every later edge must contain
    exactly one previously seen vertex.  Returns (attach, news, pins,
    degrees): per edge the attachment vertex (-1 for the root), the newly
    introduced vertices, the subset of those reused by later edges, and
    the per-vertex pattern degree.
    """
    seen = set()
    attach = []
    news = []
    for i, e in enumerate(pattern_edges):
        old = [v for v in e if v in seen]
        new = [v for v in e if v not in seen]
        if i == 0:
            if old:
                raise ValueError("first pattern edge must introduce all its vertices")
        elif len(old) != 1:
            raise ValueError(
                f"pattern edge {i} must meet the earlier edges in exactly one vertex"
            )
        attach.append(old[0] if old else -1)
        news.append(new)
        seen.update(e)
    pins = [None] * len(pattern_edges)
    later = set()
    for i in range(len(pattern_edges) - 1, -1, -1):
        pins[i] = [v for v in news[i] if v in later]
        later.update(pattern_edges[i])
    deg = {}
    for e in pattern_edges:
        for v in e:
            deg[v] = deg.get(v, 0) + 1
    return attach, news, pins, deg


def _embed(host_edges, host_masks, hdeg, pattern_edges, attach, pins, pdeg,
           order, forced_pos, forced_host):
    """Backtracking embedder over preprocessed host/pattern state.

    Pattern edges are placed in order; a host edge is eligible for
    pattern edge i when it contains the image of the attachment vertex
    and meets the union of already-used host vertices in exactly that
    vertex (so the images realize the tree structure exactly).  Only
    "pin" vertices (reused by later pattern edges) branch over host
    positions; the rest are filled deterministically afterwards.

    When ``forced_pos``/``forced_host`` are set, pattern edge
    ``forced_pos`` must map exactly to host edge ``forced_host`` (used
    for incremental checks: any new forbidden copy must use the new
    edge).
    """
    k = len(pattern_edges)
    npat = 0
    for e in pattern_edges:
        for v in e:
            if v + 1 > npat:
                npat = v + 1
    vmap = [-1] * npat
    emap = [-1] * k
    used_edge = [False] * len(host_edges)

    def rec(i, used_vmask):
        if i == k:
            return True
        cands = (forced_host,) if i == forced_pos else order
        att = attach[i]
        x = vmap[att] if att >= 0 else -1
        want = (1 << x) if att >= 0 else 0
        ps = pins[i]
        for h in cands:
            if used_edge[h]:
                continue
            if h == forced_host and i != forced_pos:
                continue
            hm = host_masks[h]
            if att >= 0:
                if not (hm >> x) & 1:
                    continue
                if hm & used_vmask != want:
                    continue
                fresh = [v for v in host_edges[h] if v != x]
            else:
                if hm & used_vmask:
                    continue
                fresh = list(host_edges[h])
            emap[i] = h
            used_edge[h] = True
            for sel in itertools.permutations(fresh, len(ps)):
                ok = True
                for t in range(len(ps)):
                    if hdeg[sel[t]] < pdeg[ps[t]]:
                        ok = False
                        break
                if not ok:
                    continue
                for t in range(len(ps)):
                    vmap[ps[t]] = sel[t]
                if rec(i + 1, used_vmask | hm):
                    return True
                for t in range(len(ps)):
                    vmap[ps[t]] = -1
            used_edge[h] = False
            emap[i] = -1
        return False

    if not rec(0, 0):
        return None
    # Fill the non-pin pattern vertices: within each edge, ascending host
    # vertices to ascending pattern slots.  Host edges overlap only at
    # attachment images, so this never collides.
    for i in range(k):
        he = host_edges[emap[i]]
        taken = {vmap[v] for v in pattern_edges[i] if vmap[v] >= 0}
        free_hosts = sorted(u for u in he if u not in taken)
        free_pats = [v for v in pattern_edges[i] if vmap[v] < 0]
        for v, u in zip(free_pats, free_hosts):
            vmap[v] = u
    return emap[:], vmap


def tree_embedding(host_edges, n, pattern_edges, order=None,
                   forced_pos=-1, forced_host=-1):
    """Embed a linear-tree pattern into the host; None if impossible.

    Returns (edge_map, vertex_map) on success: pattern edge i maps to
    host edge ``edge_map[i]``, pattern vertex v to ``vertex_map[v]``.
    ``order`` fixes the host-edge trial order (defaults to index order).
    """
    k = len(pattern_edges)
    if k == 0:
        return [], []
    if k > len(host_edges):
        return None
    attach, _news, pins, pdeg = prep_pattern(pattern_edges)
    masks = [_mask(e) for e in host_edges]
    hdeg = [0] * n
    for e in host_edges:
        for v in e:
            hdeg[v] += 1
    if order is None:
        order = range(len(host_edges))
    return _embed(host_edges, masks, hdeg, pattern_edges, attach, pins, pdeg,
                  order, forced_pos, forced_host)


def _find_matching(masks, k, require=-1):
    m = len(masks)
    if k <= 0:
        return []
    chosen = []
    used = 0
    if require >= 0:
        chosen.append(require)
        used = masks[require]
    for i in range(m):
        if len(chosen) >= k:
            break
        if i == require:
            continue
        if masks[i] & used == 0:
            chosen.append(i)
            used |= masks[i]
    if len(chosen) >= k:
        return sorted(chosen)

    best = None

    def rec(start, used, picked):
        nonlocal best
        if best is not None:
            return
        if len(picked) == k:
            best = sorted(picked)
            return
        if len(picked) + (m - start) < k:
            return
        for i in range(start, m):
            if i == require:
                continue
            mi = masks[i]
            if mi & used:
                continue
            picked.append(i)
            rec(i + 1, used | mi, picked)
            picked.pop()
            if best is not None:
                return

    base = [require] if require >= 0 else []
    rec(0, masks[require] if require >= 0 else 0, base)
    return best


def find_matching(host_edges, k, require=-1):
    """Exact search for k pairwise disjoint host edges (greedy fast path
    first).  ``require`` forces one edge index into the matching.
    Returns ascending edge indices, or None."""
    return _find_matching([_mask(e) for e in host_edges], k, require)


def complete_search(n, base_edges, candidates, forbidden, best0=0,
                    max_extra=1 << 30, stop_at=None, node_budget=1 << 62,
                    time_budget=None):
    """Branch and bound: add as many candidate edges as possible.

    Starting from the linear system ``base_edges``, candidate edges are
    tried in index order (so edge sets are enumerated lexicographically
    and the first witness found is deterministic).  An edge is accepted
    when all six of its pairs are uncovered and the grown system stays
    free of every ``forbidden`` member; freeness is checked
    incrementally, anchored at the new edge.

    ``forbidden`` entries are ("tree", pattern_edge_list) or
    ("matching", k).  Prunes with the pair-capacity bound
    floor(uncovered_pairs / 6).  Returns (best_extra, chosen_indices,
    nodes, completed); ``chosen_indices`` is None when nothing exceeded
    ``best0``, and ``completed`` is True only if the space was exhausted
    (no budget abort, no early stop via ``stop_at``).
    """
    ncand = len(candidates)
    cov = [0] * n
    uncovered = n * (n - 1) // 2
    host_edges = []
    host_masks = []
    hdeg = [0] * n

    def push(e):
        nonlocal uncovered
        host_edges.append(e)
        host_masks.append(_mask(e))
        for a in range(4):
            va = e[a]
            hdeg[va] += 1
            for b in range(a + 1, 4):
                vb = e[b]
                cov[va] |= 1 << vb
                cov[vb] |= 1 << va
        uncovered -= 6

    def pop(e):
        nonlocal uncovered
        host_edges.pop()
        host_masks.pop()
        for a in range(4):
            va = e[a]
            hdeg[va] -= 1
            for b in range(a + 1, 4):
                vb = e[b]
                cov[va] &= ~(1 << vb)
                cov[vb] &= ~(1 << va)
        uncovered += 6

    for e in base_edges:
        push(e)

    prepped = []
    for kind, payload in forbidden:
        if kind == "tree":
            pat = [tuple(e) for e in payload]
            attach, _news, pins, pdeg = prep_pattern(pat)
            prepped.append(("tree", (pat, attach, pins, pdeg)))
        elif kind == "matching":
            prepped.append(("matching", int(payload)))
        else:
            raise ValueError(f"unknown forbidden kind {kind!r}")

    def creates_forbidden():
        last = len(host_edges) - 1
        order = range(len(host_edges))
        for kind, data in prepped:
            if kind == "matching":
                if _find_matching(host_masks, data, require=last) is not None:
                    return True
            else:
                pat, attach, pins, pdeg = data
                for pos in range(len(pat)):
                    if _embed(host_edges, host_masks, hdeg, pat, attach, pins,
                              pdeg, order, pos, last) is not None:
                        return True
        return False

    best = best0
    best_chosen = None
    chosen = []
    nodes = 0
    aborted = False
    early_stop = False
    stop = stop_at if stop_at is not None else (1 << 30)
    deadline = (time.monotonic() + time_budget) if time_budget else None

    def rec(start):
        nonlocal best, best_chosen, nodes, aborted, early_stop
        cur = len(chosen)
        if cur + uncovered // 6 <= best:
            return
        if cur + (ncand - start) <= best:
            return
        for idx in range(start, ncand):
            if aborted or early_stop:
                return
            nodes += 1
            if nodes > node_budget:
                aborted = True
                return
            if deadline is not None and (nodes & 1023) == 0 \
                    and time.monotonic() > deadline:
                aborted = True
                return
            e = candidates[idx]
            ok = True
            for a in range(4):
                ca = cov[e[a]]
                for b in range(a + 1, 4):
                    if (ca >> e[b]) & 1:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            push(e)
            if creates_forbidden():
                pop(e)
                continue
            chosen.append(idx)
            if len(chosen) > best:
                best = len(chosen)
                best_chosen = chosen.copy()
                if best >= stop:
                    early_stop = True
            if not early_stop and len(chosen) < max_extra:
                rec(idx + 1)
            chosen.pop()
            pop(e)
        return

    if max_extra > 0 and best < stop:
        rec(0)
    completed = not aborted and not early_stop
    return best, best_chosen, nodes, completed
