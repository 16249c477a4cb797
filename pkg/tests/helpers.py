"""Shared test utilities: random linear instances and slow reference checks."""

import itertools

from linquad.hypergraph import Hypergraph, hypergraph


def random_linear(n, attempts, rng, r=4):
    """Random linear r-graph: try ``attempts`` random edges, keep the
    pair-compatible ones.  Deterministic given the rng state."""
    edges = []
    covered = set()
    seen = set()
    for _ in range(attempts):
        e = tuple(sorted(rng.sample(range(n), r)))
        pairs = list(itertools.combinations(e, 2))
        if e in seen or any(p in covered for p in pairs):
            continue
        seen.add(e)
        covered.update(pairs)
        edges.append(e)
    return hypergraph(r, n, edges)


def relabel(h: Hypergraph, perm) -> Hypergraph:
    return hypergraph(h.r, h.n, [tuple(perm[v] for v in e) for e in h.edges])


def acyclic_by_removal_orders(h: Hypergraph) -> bool:
    """Exhaustive reference: does *some* removal order peel everything?
    Memoized over edge subsets."""
    masks = list(h.masks)
    cache = {}

    def rec(remaining: frozenset) -> bool:
        if not remaining:
            return True
        if remaining in cache:
            return cache[remaining]
        out = False
        for i in remaining:
            union = 0
            for j in remaining:
                if j != i:
                    union |= masks[j]
            if bin(masks[i] & union).count("1") <= 1:
                if rec(remaining - {i}):
                    out = True
                    break
        cache[remaining] = out
        return out

    return rec(frozenset(range(len(h.edges))))


def e4plus_by_definition(h: Hypergraph) -> bool:
    """Three pairwise disjoint edges plus one meeting all three, found by
    direct enumeration (reference for the tree-pattern tester)."""
    masks = list(h.masks)
    m = len(masks)
    for f in range(m):
        meets = [i for i in range(m) if i != f and masks[i] & masks[f]]
        for a, b, c in itertools.combinations(meets, 3):
            if (masks[a] & masks[b]) == 0 and (masks[a] & masks[c]) == 0 \
                    and (masks[b] & masks[c]) == 0:
                return True
    return False


def max_pairwise_intersecting(n) -> int:
    """Largest pairwise-intersecting linear family on n points (an
    independent oracle for the M2-free Turan number)."""
    cands = list(itertools.combinations(range(n), 4))
    best = 0

    def rec(start, chosen, covered):
        nonlocal best
        best = max(best, len(chosen))
        for i in range(start, len(cands)):
            e = cands[i]
            pairs = list(itertools.combinations(e, 2))
            if any(p in covered for p in pairs):
                continue
            if any(not (set(e) & set(f)) for f in chosen):
                continue
            chosen.append(e)
            rec(i + 1, chosen, covered | set(pairs))
            chosen.pop()

    rec(0, [], set())
    return best
