# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.

Function-for-function mirror of :mod:`linquad._core.pure`; see that
module for the reference semantics.  Vertex sets are single 64-bit
words, so this backend serves hosts with at most 64 vertices; the
selector in ``linquad._core`` falls back to the pure backend beyond
that.  Iteration order matches the pure backend exactly, so values,
witnesses and node counts agree (enforced by tests/test_backends.py).
"""

import time

from libc.stdlib cimport free, malloc
from libc.string cimport memset

NAME = "fast"
MAX_N = 64

ctypedef unsigned long long u64

cdef int MAXK = 16          # pattern edges
cdef int MAXPV = 64         # pattern vertices
cdef int MAXHOST = 4096     # live host edges inside the search


def prep_pattern(pattern_edges):
    """Same attachment preprocessing as the pure backend."""
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


cdef struct EmbedState:
    int k                   # pattern edge count
    int m                   # host edge count
    int npat                # pattern vertex count
    int* pedges             # k*4
    int* attach             # k
    int* pins               # k*4
    int* npins              # k
    int* pdeg               # npat
    int* hedges             # m*4
    u64* hmask              # m
    int* hdeg               # n
    int* order              # om entries (host trial order)
    int om
    int forced_pos
    int forced_host
    int* vmap               # npat
    int* emap               # k
    char* used_edge         # m


cdef bint _pins_rec(EmbedState* E, int i, u64 next_used, int* fresh, int nf,
                    char* taken, int p) noexcept:
    """Assign pin p of pattern edge i; selections enumerate in the same
    order as itertools.permutations over the fresh host vertices."""
    cdef int t, pv
    if p == E.npins[i]:
        return _embed_rec(E, i + 1, next_used)
    pv = E.pins[4 * i + p]
    for t in range(nf):
        if taken[t]:
            continue
        if E.hdeg[fresh[t]] < E.pdeg[pv]:
            continue
        taken[t] = 1
        E.vmap[pv] = fresh[t]
        if _pins_rec(E, i, next_used, fresh, nf, taken, p + 1):
            return True
        E.vmap[pv] = -1
        taken[t] = 0
    return False


cdef bint _embed_rec(EmbedState* E, int i, u64 used_vmask) noexcept:
    cdef int ci, h, t, x, nf, att, base, ncand
    cdef u64 hm, want
    cdef int fresh[4]
    cdef char taken[4]
    if i == E.k:
        return True
    att = E.attach[i]
    x = E.vmap[att] if att >= 0 else -1
    want = (<u64>1 << x) if att >= 0 else 0
    ncand = 1 if i == E.forced_pos else E.om
    for ci in range(ncand):
        h = E.forced_host if i == E.forced_pos else E.order[ci]
        if E.used_edge[h]:
            continue
        if h == E.forced_host and i != E.forced_pos:
            continue
        hm = E.hmask[h]
        base = 4 * h
        if att >= 0:
            if not (hm >> x) & 1:
                continue
            if (hm & used_vmask) != want:
                continue
            nf = 0
            for t in range(4):
                if E.hedges[base + t] != x:
                    fresh[nf] = E.hedges[base + t]
                    nf += 1
        else:
            if hm & used_vmask:
                continue
            nf = 4
            for t in range(4):
                fresh[t] = E.hedges[base + t]
        E.emap[i] = h
        E.used_edge[h] = 1
        taken[0] = taken[1] = taken[2] = taken[3] = 0
        if _pins_rec(E, i, used_vmask | hm, fresh, nf, taken, 0):
            return True
        E.used_edge[h] = 0
        E.emap[i] = -1
    return False


cdef class _Pattern:
    """Preprocessed pattern in C layout, reusable across embed calls."""
    cdef int k
    cdef int npat
    cdef int pedges[64]     # MAXK*4
    cdef int attach[16]
    cdef int pins[64]
    cdef int npins[16]
    cdef int pdeg[64]
    cdef object edges

    def __init__(self, pattern_edges):
        if len(pattern_edges) > MAXK:
            raise ValueError(f"patterns capped at {MAXK} edges")
        attach, _news, pins, pdeg = prep_pattern(pattern_edges)
        self.edges = [tuple(e) for e in pattern_edges]
        self.k = len(pattern_edges)
        self.npat = 0
        cdef int i, t
        for i in range(self.k):
            e = pattern_edges[i]
            for t in range(4):
                self.pedges[4 * i + t] = e[t]
                if e[t] + 1 > self.npat:
                    self.npat = e[t] + 1
        if self.npat > MAXPV:
            raise ValueError("pattern too large for compiled backend")
        for i in range(self.k):
            self.attach[i] = attach[i]
            self.npins[i] = len(pins[i])
            for t in range(len(pins[i])):
                self.pins[4 * i + t] = pins[i][t]
        for i in range(self.npat):
            self.pdeg[i] = pdeg.get(i, 0)


cdef object _embed_finish(EmbedState* E, pattern_edges, host_edges):
    """Build (emap, vmap) exactly like the pure backend: remaining host
    vertices ascending onto remaining pattern slots, per edge."""
    cdef int i, v
    emap = [E.emap[i] for i in range(E.k)]
    vmap = [E.vmap[v] for v in range(E.npat)]
    for i in range(E.k):
        he = host_edges[emap[i]]
        taken = {vmap[v] for v in pattern_edges[i] if vmap[v] >= 0}
        free_hosts = sorted(u for u in he if u not in taken)
        free_pats = [v for v in pattern_edges[i] if vmap[v] < 0]
        for v, u in zip(free_pats, free_hosts):
            vmap[v] = u
    return emap, vmap


def tree_embedding(host_edges, n, pattern_edges, order=None,
                   forced_pos=-1, forced_host=-1):
    if n > MAX_N:
        raise ValueError(f"compiled backend caps n at {MAX_N}")
    cdef _Pattern pat = _Pattern(pattern_edges)
    cdef int m = len(host_edges)
    cdef int nn = n
    cdef int i, t, v
    if pat.k == 0:
        return [], []
    if pat.k > m:
        return None
    cdef EmbedState E
    E.k = pat.k
    E.m = m
    E.npat = pat.npat
    E.pedges = pat.pedges
    E.attach = pat.attach
    E.pins = pat.pins
    E.npins = pat.npins
    E.pdeg = pat.pdeg
    E.forced_pos = forced_pos
    E.forced_host = forced_host
    cdef int* hedges = <int*> malloc(4 * m * sizeof(int))
    cdef u64* hmask = <u64*> malloc(m * sizeof(u64))
    cdef int* hdeg = <int*> malloc(nn * sizeof(int))
    cdef int* ord_ = <int*> malloc(m * sizeof(int))
    cdef int* vmap = <int*> malloc(pat.npat * sizeof(int))
    cdef int* emap = <int*> malloc(pat.k * sizeof(int))
    cdef char* used = <char*> malloc(m)
    if (hedges == NULL or hmask == NULL or hdeg == NULL or ord_ == NULL
            or vmap == NULL or emap == NULL or used == NULL):
        if hedges != NULL: free(hedges)
        if hmask != NULL: free(hmask)
        if hdeg != NULL: free(hdeg)
        if ord_ != NULL: free(ord_)
        if vmap != NULL: free(vmap)
        if emap != NULL: free(emap)
        if used != NULL: free(used)
        raise MemoryError()
    try:
        memset(hdeg, 0, nn * sizeof(int))
        memset(used, 0, m)
        for i in range(m):
            e = host_edges[i]
            hmask[i] = 0
            for t in range(4):
                v = e[t]
                hedges[4 * i + t] = v
                hmask[i] |= <u64>1 << v
                hdeg[v] += 1
        if order is None:
            for i in range(m):
                ord_[i] = i
            E.om = m
        else:
            olist = list(order)
            E.om = len(olist)
            for i in range(E.om):
                ord_[i] = olist[i]
        for i in range(pat.npat):
            vmap[i] = -1
        for i in range(pat.k):
            emap[i] = -1
        E.hedges = hedges
        E.hmask = hmask
        E.hdeg = hdeg
        E.order = ord_
        E.vmap = vmap
        E.emap = emap
        E.used_edge = used
        if not _embed_rec(&E, 0, 0):
            return None
        return _embed_finish(&E, pat.edges, host_edges)
    finally:
        free(hedges); free(hmask); free(hdeg); free(ord_)
        free(vmap); free(emap); free(used)


# ---------------------------------------------------------------------------
# Matching

cdef bint _match_rec(u64* masks, int m, int k, int require, int start,
                     u64 used, int count, int* picked) noexcept:
    cdef int i
    cdef u64 mi
    if count == k:
        return True
    if count + (m - start) < k:
        return False
    for i in range(start, m):
        if i == require:
            continue
        mi = masks[i]
        if mi & used:
            continue
        picked[count] = i
        if _match_rec(masks, m, k, require, i + 1, used | mi, count + 1, picked):
            return True
    return False


def find_matching(host_edges, k, require=-1):
    cdef int m = len(host_edges)
    cdef int kk = k
    cdef int req = require
    cdef int i, t, cnt
    cdef u64 used
    if kk <= 0:
        return []
    cdef u64* masks = <u64*> malloc(max(m, 1) * sizeof(u64))
    cdef int* picked = <int*> malloc((kk + 1) * sizeof(int))
    if masks == NULL or picked == NULL:
        if masks != NULL: free(masks)
        if picked != NULL: free(picked)
        raise MemoryError()
    try:
        for i in range(m):
            used = 0
            for t in range(4):
                used |= <u64>1 << <int>(host_edges[i][t])
            masks[i] = used
        chosen = []
        used = 0
        if req >= 0:
            chosen.append(req)
            used = masks[req]
        for i in range(m):
            if len(chosen) >= kk:
                break
            if i == req:
                continue
            if masks[i] & used == 0:
                chosen.append(i)
                used |= masks[i]
        if len(chosen) >= kk:
            return sorted(chosen)
        cnt = 0
        used = 0
        if req >= 0:
            picked[0] = req
            cnt = 1
            used = masks[req]
        if _match_rec(masks, m, kk, req, 0, used, cnt, picked):
            return sorted(picked[i] for i in range(kk))
        return None
    finally:
        free(masks)
        free(picked)


# ---------------------------------------------------------------------------
# Branch and bound

cdef struct SearchState:
    int n
    int ncand
    int* cand               # ncand*4
    int mhost               # live host edge count
    int* hedges             # cap*4
    u64* hmask              # cap
    int* hdeg               # n
    u64* cov                # n adjacency-of-covered-pairs masks
    long long uncovered
    long long nodes
    long long node_budget
    double deadline         # < 0 means none
    int best
    int stop
    int max_extra
    int nchosen
    int* chosen
    int* best_chosen
    bint have_best
    bint aborted
    bint early_stop


cdef void _push(SearchState* S, int* e) noexcept:
    cdef int a, b, va, vb
    cdef int i = S.mhost
    cdef u64 msk = 0
    for a in range(4):
        va = e[a]
        S.hedges[4 * i + a] = va
        msk |= <u64>1 << va
        S.hdeg[va] += 1
        for b in range(a + 1, 4):
            vb = e[b]
            S.cov[va] |= <u64>1 << vb
            S.cov[vb] |= <u64>1 << va
    S.hmask[i] = msk
    S.mhost += 1
    S.uncovered -= 6


cdef void _pop(SearchState* S, int* e) noexcept:
    cdef int a, b, va, vb
    S.mhost -= 1
    S.uncovered += 6
    for a in range(4):
        va = e[a]
        S.hdeg[va] -= 1
        for b in range(a + 1, 4):
            vb = e[b]
            S.cov[va] &= ~(<u64>1 << vb)
            S.cov[vb] &= ~(<u64>1 << va)


cdef int _creates_forbidden(SearchState* S, list members) except -1:
    cdef int last = S.mhost - 1
    cdef int pos, i
    cdef _Pattern pat
    cdef EmbedState E
    cdef int vmap[64]
    cdef int emap[16]
    cdef int mpick[17]
    cdef char used[4096]
    cdef int order[4096]
    for item in members:
        if type(item) is int:
            if <int>item == 0:
                return 1
            mpick[0] = last
            if _match_rec(S.hmask, S.mhost, <int>item, last, 0,
                          S.hmask[last], 1, mpick):
                return 1
            continue
        pat = <_Pattern>item
        E.k = pat.k
        E.m = S.mhost
        E.npat = pat.npat
        E.pedges = pat.pedges
        E.attach = pat.attach
        E.pins = pat.pins
        E.npins = pat.npins
        E.pdeg = pat.pdeg
        E.hedges = S.hedges
        E.hmask = S.hmask
        E.hdeg = S.hdeg
        E.om = S.mhost
        for i in range(S.mhost):
            order[i] = i
        E.order = order
        E.vmap = vmap
        E.emap = emap
        E.used_edge = used
        E.forced_host = last
        for pos in range(pat.k):
            E.forced_pos = pos
            for i in range(pat.npat):
                vmap[i] = -1
            for i in range(pat.k):
                emap[i] = -1
            memset(used, 0, S.mhost)
            if _embed_rec(&E, 0, 0):
                return 1
    return 0


cdef int _search_rec(SearchState* S, list members, int start) except -1:
    cdef int cur = S.nchosen
    cdef int idx, a, b, i
    cdef int* e
    cdef bint ok
    if cur + S.uncovered // 6 <= S.best:
        return 0
    if cur + (S.ncand - start) <= S.best:
        return 0
    for idx in range(start, S.ncand):
        if S.aborted or S.early_stop:
            return 0
        S.nodes += 1
        if S.nodes > S.node_budget:
            S.aborted = True
            return 0
        if S.deadline >= 0 and (S.nodes & 1023) == 0 \
                and time.monotonic() > S.deadline:
            S.aborted = True
            return 0
        e = S.cand + 4 * idx
        ok = True
        for a in range(4):
            for b in range(a + 1, 4):
                if (S.cov[e[a]] >> e[b]) & 1:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if S.mhost >= MAXHOST:
            raise ValueError("host capacity exceeded")
        _push(S, e)
        if _creates_forbidden(S, members):
            _pop(S, e)
            continue
        S.chosen[S.nchosen] = idx
        S.nchosen += 1
        if S.nchosen > S.best:
            S.best = S.nchosen
            for i in range(S.nchosen):
                S.best_chosen[i] = S.chosen[i]
            S.have_best = True
            if S.best >= S.stop:
                S.early_stop = True
        if not S.early_stop and S.nchosen < S.max_extra:
            _search_rec(S, members, idx + 1)
        S.nchosen -= 1
        _pop(S, e)
    return 0


def complete_search(n, base_edges, candidates, forbidden, best0=0,
                    max_extra=1 << 30, stop_at=None, node_budget=1 << 62,
                    time_budget=None):
    if n > MAX_N:
        raise ValueError(f"compiled backend caps n at {MAX_N}")
    cdef SearchState S
    cdef int nn = n
    cdef int ncand = len(candidates)
    cdef int nbase = len(base_edges)
    cdef int cap = nbase + ncand + 1
    cdef int i, t
    cdef int ebuf[4]
    if cap > MAXHOST:
        cap = MAXHOST
    members = []
    for kind, payload in forbidden:
        if kind == "tree":
            members.append(_Pattern([tuple(e) for e in payload]))
        elif kind == "matching":
            members.append(int(payload))
        else:
            raise ValueError(f"unknown forbidden kind {kind!r}")

    S.n = nn
    S.ncand = ncand
    S.mhost = 0
    S.uncovered = nn * (nn - 1) // 2
    S.nodes = 0
    S.node_budget = node_budget
    S.deadline = (time.monotonic() + time_budget) if time_budget else -1.0
    S.best = best0
    S.stop = stop_at if stop_at is not None else (1 << 30)
    S.max_extra = max_extra if max_extra < (1 << 30) else (1 << 30)
    S.nchosen = 0
    S.have_best = False
    S.aborted = False
    S.early_stop = False

    cdef int* cand = <int*> malloc(max(ncand, 1) * 4 * sizeof(int))
    cdef int* hedges = <int*> malloc(cap * 4 * sizeof(int))
    cdef u64* hmask = <u64*> malloc(cap * sizeof(u64))
    cdef int* hdeg = <int*> malloc(nn * sizeof(int))
    cdef u64* cov = <u64*> malloc(nn * sizeof(u64))
    cdef int* chosen = <int*> malloc((ncand + 1) * sizeof(int))
    cdef int* best_chosen = <int*> malloc((ncand + 1) * sizeof(int))
    if (cand == NULL or hedges == NULL or hmask == NULL or hdeg == NULL
            or cov == NULL or chosen == NULL or best_chosen == NULL):
        if cand != NULL: free(cand)
        if hedges != NULL: free(hedges)
        if hmask != NULL: free(hmask)
        if hdeg != NULL: free(hdeg)
        if cov != NULL: free(cov)
        if chosen != NULL: free(chosen)
        if best_chosen != NULL: free(best_chosen)
        raise MemoryError()
    try:
        memset(hdeg, 0, nn * sizeof(int))
        memset(cov, 0, nn * sizeof(u64))
        for i in range(ncand):
            e = candidates[i]
            for t in range(4):
                cand[4 * i + t] = e[t]
        S.cand = cand
        S.hedges = hedges
        S.hmask = hmask
        S.hdeg = hdeg
        S.cov = cov
        S.chosen = chosen
        S.best_chosen = best_chosen
        for e in base_edges:
            if S.mhost >= cap - 1:
                raise ValueError("host capacity exceeded")
            for t in range(4):
                ebuf[t] = e[t]
            _push(&S, ebuf)
        if S.max_extra > 0 and S.best < S.stop:
            _search_rec(&S, members, 0)
        completed = (not S.aborted) and (not S.early_stop)
        result = None
        if S.have_best:
            result = [S.best_chosen[i] for i in range(S.best)]
        return S.best, result, S.nodes, completed
    finally:
        free(cand); free(hedges); free(hmask); free(hdeg)
        free(cov); free(chosen); free(best_chosen)
