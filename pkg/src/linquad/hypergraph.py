"""Uniform linear hypergraphs on labeled vertices.

A hypergraph here is an r-uniform edge set (r = 3 or 4) over vertices
0..n-1.  "Linear" means every vertex pair lies in at most one edge; that
single condition drives everything else in this package (Steiner systems
and packings are exactly the linear systems with prescribed pair
coverage).  Edges are kept as ascending tuples in lexicographic order so
equal hypergraphs compare equal, and every edge also carries a vertex
bitmask (Python int) used by the search kernels for intersection tests.

Vertex ids are 0-based internally.  The text file format is 1-based so
files match published block lists verbatim; see :func:`parse` and
:func:`serialize`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

MAX_VERTICES = 256


class HypergraphError(ValueError):
    """Invalid input (bad vertex ids, arity, duplicate edges, ...)."""


class CapacityError(HypergraphError):
    """Instance exceeds the supported desk scale (n > 256, or a kernel cap)."""


class LinearityError(HypergraphError):
    """An operation required a linear hypergraph, or an edge addition
    would cover some vertex pair twice."""

    def __init__(self, message, pair=None, edge=None):
        super().__init__(message)
        self.pair = pair
        self.edge = edge


class FormatError(HypergraphError):
    """Malformed text input; carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def _normalize_edge(edge, r, n):
    vs = tuple(sorted(edge))
    if len(vs) != r or len(set(vs)) != r:
        raise HypergraphError(f"edge {tuple(edge)} must have {r} distinct vertices")
    if vs[0] < 0 or vs[-1] >= n:
        raise HypergraphError(f"edge {vs} has a vertex outside [0, {n})")
    return vs


def _mask(edge):
    m = 0
    for v in edge:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Hypergraph:
    """Immutable r-uniform hypergraph; construct via :func:`hypergraph`."""

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Per-edge vertex bitmasks, aligned with ``edges``."""
        return tuple(_mask(e) for e in self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for e in self.edges:
            for v in e:
                d[v] += 1
        return tuple(d)

    def __len__(self):
        return len(self.edges)

    def edge_set(self):
        return set(self.edges)


def hypergraph(r: int, n: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    """Validate and canonicalize an edge list into a :class:`Hypergraph`.

    Edges are sorted internally and the edge list is sorted
    lexicographically; duplicate edges are rejected.
    """
    if r not in (3, 4):
        raise HypergraphError(f"uniformity must be 3 or 4, got {r}")
    if n < 0:
        raise HypergraphError(f"vertex count must be nonnegative, got {n}")
    if n > MAX_VERTICES:
        raise CapacityError(f"n = {n} exceeds the supported maximum {MAX_VERTICES}")
    norm = sorted(_normalize_edge(e, r, n) for e in edges)
    for a, b in zip(norm, norm[1:]):
        if a == b:
            raise HypergraphError(f"duplicate edge {a}")
    return Hypergraph(r, n, tuple(norm))


def empty(r: int, n: int) -> Hypergraph:
    return hypergraph(r, n, ())


@dataclass(frozen=True)
class PairCoverage:
    """Map from each covered vertex pair to the index of its unique edge.

    Only exists for linear hypergraphs; ``cover[(u, v)]`` with u < v is
    the index into ``source.edges`` of the one edge containing both.
    """

    n: int
    cover: dict[tuple[int, int], int] = field(repr=False)

    def covering_edge(self, u: int, v: int) -> Optional[int]:
        if u > v:
            u, v = v, u
        return self.cover.get((u, v))

    def covered_pairs(self):
        return set(self.cover)


@dataclass(frozen=True)
class LeaveGraph:
    """Pairs left uncovered by a linear hypergraph (the packing leave)."""

    n: int
    uncovered_pairs: frozenset[tuple[int, int]]

    def degree(self, v: int) -> int:
        return sum(1 for p in self.uncovered_pairs if v in p)


def _pair_cover(h: Hypergraph):
    """Internal: coverage dict, or the clashing (pair, edge_index) on failure."""
    cover = {}
    for i, e in enumerate(h.edges):
        for u, v in itertools.combinations(e, 2):
            if (u, v) in cover:
                return None, ((u, v), i)
            cover[(u, v)] = i
    return cover, None


def is_linear(h: Hypergraph) -> Optional[PairCoverage]:
    """Return the pair coverage if no vertex pair lies in two edges, else None.

    The returned :class:`PairCoverage` is always truthy, so this doubles
    as the boolean linearity test.
    """
    cover, clash = _pair_cover(h)
    if clash is not None:
        return None
    return PairCoverage(h.n, cover)


def degree(h: Hypergraph, v: int) -> int:
    if not 0 <= v < h.n:
        raise HypergraphError(f"vertex {v} outside [0, {h.n})")
    return h.degrees[v]


def degree_sequence(h: Hypergraph) -> list[int]:
    """All vertex degrees, ascending."""
    return sorted(h.degrees)


def degree_vector(h: Hypergraph, edge: Sequence[int]) -> tuple[int, ...]:
    """Degrees of an edge's vertices, sorted descending.

    Supports the componentwise comparison used to order search branches:
    compare two vectors with the usual tuple operators after checking
    componentwise dominance where needed.
    """
    e = tuple(sorted(edge))
    if e not in h.edge_set():
        raise HypergraphError(f"edge {e} not in hypergraph")
    return tuple(sorted((h.degrees[v] for v in e), reverse=True))


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]           # original labels, ascending
    subhypergraph: Hypergraph           # relabeled onto 0..len(vertices)-1
    edge_indices: tuple[int, ...]       # indices into the parent edge list


def components(h: Hypergraph) -> tuple[list[Component], list[int]]:
    """Connected components under edge intersection, plus isolated vertices.

    Two vertices are connected when some chain of pairwise-intersecting
    edges joins them.  Isolated vertices (degree 0) are returned
    separately and belong to no component.
    """
    parent = list(range(h.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for e in h.edges:
        for v in e[1:]:
            union(e[0], v)

    groups: dict[int, list[int]] = {}
    for v in range(h.n):
        if h.degrees[v] > 0:
            groups.setdefault(find(v), []).append(v)

    comps = []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        vs = sorted(groups[root])
        relabel = {v: i for i, v in enumerate(vs)}
        idxs = tuple(i for i, e in enumerate(h.edges) if find(e[0]) == root)
        sub = hypergraph(h.r, len(vs), [tuple(relabel[v] for v in h.edges[i]) for i in idxs])
        comps.append(Component(tuple(vs), sub, idxs))
    isolated = [v for v in range(h.n) if h.degrees[v] == 0]
    return comps, isolated


def add_edge_linear(h: Hypergraph, edge: Sequence[int]) -> Hypergraph:
    """Append an edge, rejecting any linearity violation.

    Raises :class:`LinearityError` naming the clashing pair and edge when
    some pair of ``edge`` is already covered, or when the edge is a
    duplicate.  Returns a new hypergraph (inputs are immutable).
    """
    e = _normalize_edge(edge, h.r, h.n)
    if e in h.edge_set():
        raise LinearityError(f"duplicate edge {e}", edge=e)
    cover, clash = _pair_cover(h)
    if clash is not None:
        raise LinearityError(
            f"hypergraph is not linear: pair {clash[0]} covered twice", pair=clash[0]
        )
    for u, v in itertools.combinations(e, 2):
        if (u, v) in cover:
            other = h.edges[cover[(u, v)]]
            raise LinearityError(
                f"pair ({u}, {v}) already covered by edge {other}", pair=(u, v), edge=other
            )
    return hypergraph(h.r, h.n, h.edges + (e,))


def leave_graph(h: Hypergraph) -> LeaveGraph:
    """Exact set of uncovered pairs of a linear hypergraph."""
    coverage = is_linear(h)
    if coverage is None:
        raise LinearityError("leave graph is only defined for linear hypergraphs")
    covered = coverage.covered_pairs()
    uncovered = frozenset(
        p for p in itertools.combinations(range(h.n), 2) if p not in covered
    )
    return LeaveGraph(h.n, uncovered)


# ---------------------------------------------------------------------------
# Text format: header "r n m", then m rows of r 1-based vertex ids.
# '#' starts a comment; blank lines are ignored.

def parse(text: str) -> Hypergraph:
    rows = []
    header = None
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise FormatError(f"non-integer token in {parts!r}", line=lineno)
        if header is None:
            if len(values) != 3:
                raise FormatError("header must be 'r n m'", line=lineno)
            header = values
            header_line = lineno
            continue
        rows.append((lineno, values))

    if header is None:
        raise FormatError("missing header line 'r n m'", line=1)
    r, n, m = header
    if r not in (3, 4):
        raise FormatError(f"uniformity must be 3 or 4, got {r}", line=header_line)
    if n < 0:
        raise FormatError(f"negative vertex count {n}", line=header_line)
    if n > MAX_VERTICES:
        raise FormatError(f"n = {n} exceeds maximum {MAX_VERTICES}", line=header_line)
    if m != len(rows):
        raise FormatError(
            f"header promises {m} edges but file has {len(rows)}", line=header_line
        )

    edges = []
    seen = set()
    for lineno, values in rows:
        if len(values) != r:
            raise FormatError(f"expected {r} vertex ids, got {len(values)}", line=lineno)
        if len(set(values)) != r:
            raise FormatError(f"repeated vertex in edge {values}", line=lineno)
        for v in values:
            if not 1 <= v <= n:
                raise FormatError(f"vertex id {v} outside [1, {n}]", line=lineno)
        e = tuple(sorted(v - 1 for v in values))
        if e in seen:
            raise FormatError(f"duplicate edge {values}", line=lineno)
        seen.add(e)
        edges.append(e)
    return hypergraph(r, n, edges)


def serialize(h: Hypergraph) -> str:
    """Render in the text format (1-based ids, canonical edge order)."""
    lines = [f"{h.r} {h.n} {len(h.edges)}"]
    for e in h.edges:
        lines.append(" ".join(str(v + 1) for v in e))
    return "\n".join(lines) + "\n"
