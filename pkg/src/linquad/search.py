"""Exact computation of small extremal numbers and packing numbers.

The engine is a lexicographic branch-and-bound over candidate edges
with isomorph rejection at the first three plies: depth-d prefixes are
kept only if their isomorphism class is new, which is sound because
prefixes are visited in lexicographic order, so the lex-least labeled
member of every class (whose completions include the lex-least labeled
optimum) is always the one kept.  Deeper levels rely on the
lexicographic augmentation order alone.  The only generic prune is the
pair-capacity bound floor(uncovered pairs / 6).

``brute_force_ex`` is the independent oracle: it enumerates every
linear edge set outright (no isomorph rejection, no pruning beyond
linearity) and tests freeness with a naive tuple check that shares no
code with the kernels.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

from . import _core, patterns
from .hypergraph import CapacityError, Hypergraph, hypergraph, is_linear

HARD_CAP_N = 20


@dataclass(frozen=True)
class Budget:
    nodes: int = 10**8
    seconds: float = 300.0


@dataclass(frozen=True)
class SearchResult:
    quantity: str
    params: dict = field(compare=False)
    value: int
    witness: Hypergraph
    nodes: int
    seconds: float
    completed: bool

    def kv_lines(self):
        out = [f"quantity={self.quantity}"]
        for k, v in sorted(self.params.items()):
            out.append(f"param.{k}={v}")
        out.append(f"value={self.value}")
        out.append(f"edges={len(self.witness.edges)}")
        out.append(f"nodes={self.nodes}")
        out.append(f"completed={str(self.completed).lower()}")
        return out


# ---------------------------------------------------------------------------
# Canonical form (isomorph rejection key)

def canonical_form(h: Hypergraph) -> bytes:
    """Canonical byte string: equal iff hypergraphs are isomorphic.

    Individualization-refinement with the degree partition as the seed:
    vertices are iteratively split by the multiset of their incident
    edges' color patterns, branching on the first non-singleton cell.
    Automorphisms discovered when two leaves tie are used to skip
    equivalent branches, which keeps highly symmetric inputs (Steiner
    systems) cheap.  Exact, not a hash.
    """
    if h.n > HARD_CAP_N:
        raise CapacityError(f"canonical form capped at n = {HARD_CAP_N}, got {h.n}")
    m = len(h.edges)
    header = f"{h.r} {h.n} {m}:".encode()
    if m == 0:
        return header
    edges = [tuple(e) for e in h.edges]
    verts = sorted({v for e in edges for v in e})
    incident = {v: [] for v in verts}
    for i, e in enumerate(edges):
        for v in e:
            incident[v].append(i)
    edge_sets = [frozenset(e) for e in edges]
    edge_set_all = set(edge_sets)

    def refine(colors):
        while True:
            ecol = [tuple(sorted(colors[v] for v in e)) for e in edges]
            keys = {
                v: (colors[v], tuple(sorted(ecol[i] for i in incident[v])))
                for v in verts
            }
            order = {key: i for i, key in enumerate(sorted(set(keys.values())))}
            new = {v: order[keys[v]] for v in verts}
            if new == colors:
                return colors
            colors = new

    def individualize(colors, target, u):
        keys = {
            v: (colors[v], 1 if colors[v] == target and v != u else 0) for v in verts
        }
        order = {key: i for i, key in enumerate(sorted(set(keys.values())))}
        return {v: order[keys[v]] for v in verts}

    best = None
    best_labeling = None
    gens: list[dict] = []

    def is_automorphism(sigma):
        for es in edge_sets:
            if frozenset(sigma[v] for v in es) not in edge_set_all:
                return False
        return True

    def orbit_contains(u, seed, subgens):
        orbit = {seed}
        frontier = [seed]
        while frontier:
            x = frontier.pop()
            for g in subgens:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return u in orbit

    def search(colors, path):
        nonlocal best, best_labeling
        colors = refine(colors)
        if len(set(colors.values())) == len(verts):
            form = sorted(tuple(sorted(colors[v] for v in e)) for e in edges)
            if best is None or form < best:
                best = form
                best_labeling = dict(colors)
            elif form == best:
                inv_cur = {c: v for v, c in colors.items()}
                sigma = {v: inv_cur[best_labeling[v]] for v in verts}
                if is_automorphism(sigma):
                    gens.append(sigma)
            return
        cells: dict[int, list[int]] = {}
        for v in verts:
            cells.setdefault(colors[v], []).append(v)
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        tried = []
        for u in sorted(cells[target]):
            subgens = [g for g in gens if all(g[x] == x for x in path)]
            if any(orbit_contains(u, t, subgens) for t in tried):
                continue
            search(individualize(colors, target, u), path + (u,))
            tried.append(u)

    search({v: 0 for v in verts}, ())
    body = b";".join(b",".join(str(x).encode() for x in e) for e in best)
    return header + body


# ---------------------------------------------------------------------------
# Naive containment (independent oracle; no kernel code)

def naive_contains_tree(edges, pattern_edges) -> bool:
    """Tuple-enumeration containment test for linear hosts.

    Tries every injective assignment of pattern edges to host edges and
    checks pairwise intersection sizes plus, for every pattern vertex
    lying in two or more pattern edges, that the image edges share a
    common vertex avoided by all other image edges.  For linear hosts
    and linear-tree patterns this is equivalent to embeddability.
    """
    k = len(pattern_edges)
    if k > len(edges):
        return False
    psets = [set(e) for e in pattern_edges]
    shared: dict[int, list[int]] = {}
    for i, e in enumerate(pattern_edges):
        for v in e:
            shared.setdefault(v, []).append(i)
    multi = [idxs for idxs in shared.values() if len(idxs) >= 2]
    esets = [set(e) for e in edges]
    for combo in itertools.permutations(range(len(edges)), k):
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                if len(esets[combo[i]] & esets[combo[j]]) != len(psets[i] & psets[j]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for idxs in multi:
            common = set(esets[combo[idxs[0]]])
            for t in idxs[1:]:
                common &= esets[combo[t]]
            if len(common) != 1:
                ok = False
                break
            x = next(iter(common))
            if any(x in esets[combo[j]] for j in range(k) if j not in idxs):
                ok = False
                break
        if ok:
            return True
    return False


def naive_contains_matching(edges, k) -> bool:
    esets = [set(e) for e in edges]
    for combo in itertools.combinations(range(len(edges)), k):
        if all(
            not (esets[a] & esets[b]) for a, b in itertools.combinations(combo, 2)
        ):
            return True
    return False


def naive_is_free(edges, members) -> bool:
    for member in members:
        if isinstance(member, patterns.Matching):
            if naive_contains_matching(edges, member.k):
                return False
        else:
            if naive_contains_tree(edges, list(member.edges())):
                return False
    return True


def brute_force_ex(n: int, family) -> int:
    """Exhaustive oracle for the maximum F-free linear edge count, n <= 8.

    Enumerates every linear edge set (all antichains of pair-disjoint
    quadruples) and evaluates freeness on each with the naive check;
    no isomorph rejection, no pruning beyond linearity.
    """
    if n > 8:
        raise CapacityError(f"brute force oracle capped at n = 8, got {n}")
    members = patterns.family_members(family)
    cands = list(itertools.combinations(range(n), 4))
    best = 0
    cur: list[tuple] = []
    covered: set[tuple] = set()

    def rec(start):
        nonlocal best
        if len(cur) > best and naive_is_free(cur, members):
            best = len(cur)
        for idx in range(start, len(cands)):
            e = cands[idx]
            pairs = list(itertools.combinations(e, 2))
            if any(p in covered for p in pairs):
                continue
            covered.update(pairs)
            cur.append(e)
            rec(idx + 1)
            cur.pop()
            covered.difference_update(pairs)

    rec(0)
    return best


# ---------------------------------------------------------------------------
# Exact branch-and-bound search

def _creates_member(kern, n, base_edges, fam_kernel) -> bool:
    """Does the last edge of ``base_edges`` complete a forbidden member?"""
    host = list(base_edges)
    last = len(host) - 1
    for kind, payload in fam_kernel:
        if kind == "matching":
            if kern.find_matching(host, payload, require=last) is not None:
                return True
        else:
            for pos in range(len(payload)):
                if kern.tree_embedding(host, n, payload, forced_pos=pos,
                                       forced_host=last) is not None:
                    return True
    return False


def _pairs_clash(pair_set, e) -> bool:
    return any(p in pair_set for p in itertools.combinations(e, 2))


def _run_search(quantity, n, family, budget) -> SearchResult:
    if n > HARD_CAP_N:
        raise CapacityError(f"exact search capped at n = {HARD_CAP_N}, got {n}")
    budget = budget or Budget()
    members = patterns.family_members(family)
    fam_kernel = patterns.kernel_family(members)
    kern = _core.active(n)
    t0 = time.monotonic()
    deadline = t0 + budget.seconds
    candidates = list(itertools.combinations(range(n), 4))
    nodes = 0
    completed = True
    best = 0
    witness_edges: tuple = ()

    # Plies 1..3: canonical prefixes only (global per-depth dedup).
    level: list[tuple[tuple, int, set]] = [((), -1, set())]
    depth3: list[tuple[tuple, int]] = []
    out_of_budget = False
    for depth in (1, 2, 3):
        nxt = []
        seen: set[bytes] = set()
        for pref, last, pair_set in level:
            for idx in range(last + 1, len(candidates)):
                nodes += 1
                if nodes > budget.nodes or time.monotonic() > deadline:
                    out_of_budget = True
                    break
                e = candidates[idx]
                if _pairs_clash(pair_set, e):
                    continue
                if _creates_member(kern, n, list(pref) + [e], fam_kernel):
                    continue
                if depth > best:
                    best = depth
                    witness_edges = pref + (e,)
                form = canonical_form(hypergraph(4, n, pref + (e,)))
                if form in seen:
                    continue
                seen.add(form)
                ext = pair_set | set(itertools.combinations(e, 2))
                nxt.append((pref + (e,), idx, ext))
            if out_of_budget:
                break
        if out_of_budget or not nxt:
            break
        level = nxt
        if depth == 3:
            depth3 = [(pref, last) for pref, last, _ in nxt]

    if out_of_budget:
        completed = False
        depth3 = []

    max_extra = (n * (n - 1) // 2) // 6
    for pref, last in depth3:
        node_room = budget.nodes - nodes
        time_room = deadline - time.monotonic()
        if node_room <= 0 or time_room <= 0:
            completed = False
            break
        tail = candidates[last + 1:]
        extra, chosen, nd, comp = kern.complete_search(
            n, list(pref), tail, fam_kernel, best0=best - 3,
            max_extra=max_extra, node_budget=node_room, time_budget=time_room,
        )
        nodes += nd
        completed = completed and comp
        if chosen is not None:
            best = 3 + extra
            witness_edges = pref + tuple(tail[i] for i in chosen)

    witness = hypergraph(4, n, witness_edges)
    # Independent re-verification of the witness (never trust search state).
    assert is_linear(witness) is not None
    assert patterns.is_free(witness, members)
    return SearchResult(
        quantity=quantity,
        params={"n": n, "family": ",".join(str(p) for p in members) or "-"},
        value=best,
        witness=witness,
        nodes=nodes,
        seconds=time.monotonic() - t0,
        completed=completed,
    )


def exact_ex(n: int, family, budget: Optional[Budget] = None) -> SearchResult:
    """Maximum edge count of an F-free linear quadruple system on n vertices.

    Exact when ``completed`` is True; otherwise the value is the best
    lower bound found within the node/time budget.
    """
    return _run_search("ex4lin", n, family, budget)


def exact_packing(m: int, budget: Optional[Budget] = None) -> SearchResult:
    """Packing number D1(m,4,2): the linearity constraint is the packing
    constraint, so this is the same engine with an empty family."""
    res = _run_search("D1(m,4,2)", m, [], budget)
    return SearchResult(
        quantity=res.quantity,
        params={"m": m},
        value=res.value,
        witness=res.witness,
        nodes=res.nodes,
        seconds=res.seconds,
        completed=res.completed,
    )
