"""Bipartite graph core: construction, vertex sets, induced subgraphs, file I/O.

Vertices are 0-based on both sides. The left side X has k vertices, the
right side Y has n vertices. Adjacency is stored in both directions as
sorted tuples; graphs are immutable after construction.

File format (line-oriented UTF-8):
    # optional comment lines
    p bipartite <k> <n>
    e <x> <y>          (0 <= x < k, 0 <= y < n; duplicates are an error)
The serializer emits the header and then edges sorted by (x, y).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

import numpy as np


class FormatError(ValueError):
    """Malformed input file (graph or star-array)."""


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"

    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class VertexSet:
    """A set of vertex indices on one side, kept sorted and duplicate-free."""

    side: Side
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        object.__setattr__(self, "members", members)
        if members and members[0] < 0:
            raise ValueError("vertex indices must be nonnegative")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, v: int) -> bool:
        i = bisect_left(self.members, v)
        return i < len(self.members) and self.members[i] == v


def left_set(members: Iterable[int]) -> VertexSet:
    return VertexSet(Side.LEFT, tuple(members))


def right_set(members: Iterable[int]) -> VertexSet:
    return VertexSet(Side.RIGHT, tuple(members))


@dataclass(frozen=True)
class BipartiteGraph:
    """Immutable bipartite graph with adjacency stored in both directions."""

    k: int
    n: int
    adj: tuple[tuple[int, ...], ...]   # left -> sorted right neighbors
    radj: tuple[tuple[int, ...], ...]  # right -> sorted left neighbors
    edge_count: int

    @classmethod
    def from_edges(cls, k: int, n: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        if k < 1 or n < 1:
            raise ValueError(f"sides must be nonempty, got k={k}, n={n}")
        adj: list[list[int]] = [[] for _ in range(k)]
        radj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        m = 0
        for x, y in edges:
            if not (0 <= x < k):
                raise ValueError(f"left index {x} out of range [0, {k})")
            if not (0 <= y < n):
                raise ValueError(f"right index {y} out of range [0, {n})")
            if (x, y) in seen:
                raise ValueError(f"duplicate edge ({x}, {y})")
            seen.add((x, y))
            adj[x].append(y)
            radj[y].append(x)
            m += 1
        return cls(
            k=k,
            n=n,
            adj=tuple(tuple(sorted(row)) for row in adj),
            radj=tuple(tuple(sorted(row)) for row in radj),
            edge_count=m,
        )

    @classmethod
    def from_matrix(cls, mat: np.ndarray) -> "BipartiteGraph":
        """Build from a boolean k x n adjacency matrix (no duplicate risk)."""
        k, n = mat.shape
        if k < 1 or n < 1:
            raise ValueError("sides must be nonempty")
        adj = tuple(tuple(np.flatnonzero(mat[i]).tolist()) for i in range(k))
        radj = tuple(tuple(np.flatnonzero(mat[:, j]).tolist()) for j in range(n))
        return cls(k=k, n=n, adj=adj, radj=radj, edge_count=int(mat.sum()))

    def neighbors(self, x: int) -> tuple[int, ...]:
        return self.adj[x]

    def rneighbors(self, y: int) -> tuple[int, ...]:
        return self.radj[y]

    def degree(self, x: int) -> int:
        return len(self.adj[x])

    def rdegree(self, y: int) -> int:
        return len(self.radj[y])

    def has_edge(self, x: int, y: int) -> bool:
        row = self.adj[x]
        i = bisect_left(row, y)
        return i < len(row) and row[i] == y

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges in (x, y) sorted order."""
        for x, row in enumerate(self.adj):
            for y in row:
                yield (x, y)

    def swap_sides(self) -> "BipartiteGraph":
        return BipartiteGraph(self.n, self.k, self.radj, self.adj, self.edge_count)

    def with_edge(self, x: int, y: int) -> "BipartiteGraph":
        """New graph with one extra edge (error if it already exists)."""
        return BipartiteGraph.from_edges(self.k, self.n, list(self.edges()) + [(x, y)])

    def matrix(self) -> np.ndarray:
        """Dense boolean adjacency matrix (k x n)."""
        mat = np.zeros((self.k, self.n), dtype=bool)
        for x, row in enumerate(self.adj):
            if row:
                mat[x, list(row)] = True
        return mat


def parse_graph(text: str | bytes) -> BipartiteGraph:
    """Parse the graph file format; errors carry the offending line number."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    k = n = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if k is not None:
                raise FormatError(f"line {lineno}: repeated header")
            if len(parts) != 4 or parts[1] != "bipartite":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            try:
                k, n = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer sizes in header") from None
            if k < 1 or n < 1:
                raise FormatError(f"line {lineno}: sizes must be >= 1, got k={k}, n={n}")
        elif parts[0] == "e":
            if k is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise FormatError(f"line {lineno}: malformed edge line {line!r}")
            try:
                x, y = int(parts[1]), int(parts[2])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer edge endpoints") from None
            if not (0 <= x < k):
                raise FormatError(f"line {lineno}: left index {x} out of range, k={k}")
            if not (0 <= y < n):
                raise FormatError(f"line {lineno}: right index {y} out of range, n={n}")
            if (x, y) in seen:
                raise FormatError(f"line {lineno}: duplicate edge ({x}, {y})")
            seen.add((x, y))
            edges.append((x, y))
        else:
            raise FormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if k is None:
        raise FormatError("missing header line 'p bipartite <k> <n>'")
    return BipartiteGraph.from_edges(k, n, edges)


def serialize_graph(g: BipartiteGraph, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p bipartite {g.k} {g.n}")
    lines.extend(f"e {x} {y}" for x, y in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> BipartiteGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


def save_graph(g: BipartiteGraph, path: str, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g, comments))


def _check_side(g: BipartiteGraph, s: VertexSet, side: Side) -> None:
    if s.side is not side:
        raise ValueError(f"expected a {side.value}-side vertex set")
    bound = g.k if side is Side.LEFT else g.n
    if s.members and s.members[-1] >= bound:
        raise ValueError(f"vertex {s.members[-1]} out of range for {side.value} side ({bound})")


def neighborhood(g: BipartiteGraph, s: VertexSet) -> VertexSet:
    """N(S): union of neighbor sets, on the opposite side."""
    bound = g.k if s.side is Side.LEFT else g.n
    if s.members and s.members[-1] >= bound:
        raise ValueError(f"vertex {s.members[-1]} out of range for {s.side.value} side ({bound})")
    rows = g.adj if s.side is Side.LEFT else g.radj
    out: set[int] = set()
    for v in s.members:
        out.update(rows[v])
    return VertexSet(s.side.other(), tuple(out))


def edge_count_between(g: BipartiteGraph, a: VertexSet, b: VertexSet) -> int:
    """e(A, B): number of edges with one endpoint in each."""
    _check_side(g, a, Side.LEFT)
    _check_side(g, b, Side.RIGHT)
    bset = set(b.members)
    return sum(1 for x in a.members for y in g.adj[x] if y in bset)


def induced_subgraph(
    g: BipartiteGraph, a: VertexSet, b: VertexSet
) -> tuple[BipartiteGraph | None, tuple[int, ...], tuple[int, ...]]:
    """Subgraph induced by A u B, reindexed in ascending original order.

    Returns (subgraph, left_orig, right_orig) where left_orig[i] is the
    original index of new left vertex i (same for right). If either side is
    empty the subgraph is None (downstream operations reject empty sides).
    """
    _check_side(g, a, Side.LEFT)
    _check_side(g, b, Side.RIGHT)
    left_orig = a.members
    right_orig = b.members
    if not left_orig or not right_orig:
        return None, left_orig, right_orig
    right_new = {y: j for j, y in enumerate(right_orig)}
    edges = []
    for i, x in enumerate(left_orig):
        for y in g.adj[x]:
            j = right_new.get(y)
            if j is not None:
                edges.append((i, j))
    return BipartiteGraph.from_edges(len(left_orig), len(right_orig), edges), left_orig, right_orig


def is_connected(g: BipartiteGraph) -> bool:
    """True if the graph is connected as an undirected graph on X u Y."""
    total = g.k + g.n
    seen_l = [False] * g.k
    seen_r = [False] * g.n
    stack = [(Side.LEFT, 0)]
    seen_l[0] = True
    count = 1
    while stack:
        side, v = stack.pop()
        if side is Side.LEFT:
            for y in g.adj[v]:
                if not seen_r[y]:
                    seen_r[y] = True
                    count += 1
                    stack.append((Side.RIGHT, y))
        else:
            for x in g.radj[v]:
                if not seen_l[x]:
                    seen_l[x] = True
                    count += 1
                    stack.append((Side.LEFT, x))
    return count == total


def disjoint_copies(g: BipartiteGraph, copies: int) -> BipartiteGraph:
    """Disjoint union of `copies` copies of g (copy c offset by c*k, c*n)."""
    if copies < 1:
        raise ValueError("need at least one copy")
    edges = [
        (x + c * g.k, y + c * g.n)
        for c in range(copies)
        for x, y in g.edges()
    ]
    return BipartiteGraph.from_edges(g.k * copies, g.n * copies, edges)
