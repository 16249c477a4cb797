"""Benchmark the pure-Python and compiled search kernels on the hot loops.

Run from the repository root:

    python3 benchmarks/bench_backends.py

Each workload calls the kernels directly with identical inputs; results
(values, witnesses, node counts) are asserted equal before timings are
reported, so the speedup numbers compare like for like.
"""

import itertools
import random
import sys
import time

from linquad import _core
from linquad import constructions as cons
from linquad.patterns import named_pattern


def _rand_linear_edges(n, attempts, rng):
    edges, covered = [], set()
    for _ in range(attempts):
        e = tuple(sorted(rng.sample(range(n), 4)))
        pairs = list(itertools.combinations(e, 2))
        if e not in edges and not any(p in covered for p in pairs):
            covered.update(pairs)
            edges.append(e)
    return sorted(edges)


def bench(name, fn, backends, repeat=1):
    results = {}
    times = {}
    for bname, mod in backends.items():
        t0 = time.perf_counter()
        for _ in range(repeat):
            out = fn(mod)
        times[bname] = (time.perf_counter() - t0) / repeat
        results[bname] = out
    vals = list(results.values())
    assert all(v == vals[0] for v in vals), f"{name}: backends disagree"
    line = f"{name:<44}"
    for bname in backends:
        line += f"  {bname}: {times[bname]*1000:10.1f} ms"
    if len(times) == 2:
        a, b = times.values()
        line += f"  speedup: {a / b:6.1f}x" if b < a else f"  speedup: {b / a:6.1f}x"
    print(line)


def main():
    backends = {"pure": _core.get("pure")}
    if "fast" in _core.backends():
        backends["fast"] = _core.get("fast")
    else:
        print("compiled kernel not built; benchmarking pure only", file=sys.stderr)

    rng = random.Random(2024)
    s16 = cons.steiner_2_4_16().hypergraph
    u16 = cons.disjoint_union(s16, s16)
    p4 = [tuple(e) for e in named_pattern("P", 4).edges()]
    e4p = [tuple(e) for e in named_pattern("E4plus").edges()]
    hosts = [_rand_linear_edges(16, 14, rng) for _ in range(200)]

    bench(
        "tree embedding: P4 over 200 random hosts",
        lambda mod: [mod.tree_embedding(h, 16, p4) is not None for h in hosts],
        backends,
    )
    bench(
        "tree embedding: P4-freeness of two 16-blocks",
        lambda mod: mod.tree_embedding(list(u16.edges), u16.n, p4),
        backends,
    )
    bench(
        "matching: 4 disjoint blocks in the union",
        lambda mod: mod.find_matching(list(u16.edges), 4),
        backends,
    )

    cands10 = list(itertools.combinations(range(10), 4))
    bench(
        "branch and bound: max packing, 10 points",
        lambda mod: mod.complete_search(10, [], cands10, [], max_extra=10),
        backends,
    )
    cands9 = list(itertools.combinations(range(9), 4))
    bench(
        "branch and bound: P3-free maximum, 9 points",
        lambda mod: mod.complete_search(9, [], cands9,
                                        [("tree", [tuple(e) for e in
                                                   named_pattern("P", 3).edges()])],
                                        max_extra=20),
        backends,
    )

    # the augmentation search on the hardest residue of the apex construction
    n = 57
    built = cons.sts9_resolvable()
    m = (n - 4) // 9
    quads = []
    for copy in range(m):
        for c, cls in enumerate(built.classes):
            for t in cls:
                quads.append(tuple(sorted(tuple(v + 9 * copy for v in t)
                                          + (9 * m + c,))))
    quads.sort()
    special = list(range(9 * m, n))
    cands = sorted(itertools.combinations(special, 4),
                   key=lambda e: (0 if len(set(range(9 * m, 9 * m + 4)) & set(e)) == 1
                                  else len(set(range(9 * m, 9 * m + 4)) & set(e)), e))
    bench(
        "augmentation search: 8 extra edges at n = 57",
        lambda mod: mod.complete_search(57, quads, [tuple(c) for c in cands],
                                        [("tree", e4p)], max_extra=8, stop_at=8),
        backends,
    )


if __name__ == "__main__":
    main()
