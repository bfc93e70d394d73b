"""Euclidean trees: schedules, the canonical tree, the staged process, factors.

For coprime (ell, L) the Euclidean tree T_{ell,L} is the left-right tree on
ell + L vertices obtained by repeatedly peeling a perfect matching off the
larger side, exactly as the Euclidean algorithm reduces (ell, L). The same
object arises bottom-up as a staged process that starts from a star and adds
one q_i-thrill per stage, one stage per division step of the algorithm.
These trees have NMP, which is what makes factors made of them useful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import BipartiteGraph, Side, is_connected


@dataclass(frozen=True)
class EuclidSchedule:
    """Remainder/quotient ladder of the Euclidean algorithm on (ell, L).

    r has m+2 entries r_0 = 0, r_1 = 1, ..., r_m = min(ell, L),
    r_{m+1} = max(ell, L), and satisfies r_{i+1} = q_i * r_i + r_{i-1}.
    q has m entries q_1..q_m (stored 0-based).
    """

    ell: int
    L: int
    m: int
    r: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def complexity_bound(self) -> float:
        """Known upper bound on m: 2.078 * ln(max(ell, L)) + 0.6723."""
        return 2.078 * math.log(max(self.ell, self.L)) + 0.6723


def euclid_schedule(ell: int, L: int) -> EuclidSchedule:
    if ell < 1 or L < 1:
        raise ValueError("sides must be positive")
    if math.gcd(ell, L) != 1:
        raise ValueError(f"({ell}, {L}) are not coprime")
    lo, hi = min(ell, L), max(ell, L)
    ds = [hi, lo]
    qs_topdown: list[int] = []
    while ds[-1] != 0:
        quot, rem = divmod(ds[-2], ds[-1])
        qs_topdown.append(quot)
        ds.append(rem)
    m = len(qs_topdown)
    return EuclidSchedule(
        ell=ell, L=L, m=m, r=tuple(reversed(ds)), q=tuple(reversed(qs_topdown))
    )


@dataclass(frozen=True)
class EuclideanTree:
    ell: int
    L: int
    graph: BipartiteGraph


def build_euclidean_tree(ell: int, L: int) -> EuclideanTree:
    """Canonical T_{ell,L} by matching peeling.

    With a = current left count, b = current right count: while both exceed
    one, match the larger side's top indices against the smaller side
    (x_i -- y_{i+b-a} when a < b, symmetric otherwise) and recurse on the
    prefix; a side of size one ends with a star. (1, 1) is the single edge.
    """
    if math.gcd(ell, L) != 1:
        raise ValueError(f"({ell}, {L}) are not coprime")
    edges: list[tuple[int, int]] = []
    a, b = ell, L
    while a != 1 and b != 1:
        if a < b:
            edges.extend((i, i + b - a) for i in range(a))
            b -= a
        else:
            edges.extend((i + a - b, i) for i in range(b))
            a -= b
    if a == 1:
        edges.extend((0, j) for j in range(b))
    else:
        edges.extend((i, 0) for i in range(a))
    return EuclideanTree(ell, L, BipartiteGraph.from_edges(ell, L, edges))


@dataclass(frozen=True)
class Fan:
    """A star T_{1,q} (anchor on anchor_side) used as a thrill member."""

    anchor_side: Side
    anchor: int
    leaves: tuple[int, ...]


@dataclass(frozen=True)
class Thrill:
    """Vertex-disjoint fans, all on the same side with the same width q."""

    side: Side
    q: int
    fans: tuple[Fan, ...]

    def validate(self) -> None:
        anchors: set[int] = set()
        leaves: set[int] = set()
        for f in self.fans:
            if f.anchor_side is not self.side:
                raise ValueError("fan anchored on the wrong side")
            if len(f.leaves) != self.q:
                raise ValueError(f"fan at {f.anchor} has {len(f.leaves)} leaves, expected {self.q}")
            if f.anchor in anchors:
                raise ValueError(f"anchor {f.anchor} reused")
            anchors.add(f.anchor)
            for v in f.leaves:
                if v in leaves:
                    raise ValueError(f"leaf {v} reused")
                leaves.add(v)


def _stage_grow_is_right(hi_is_right: bool, m: int, i: int) -> bool:
    # Stage m grows the larger side; parity alternates downward from there.
    return hi_is_right == ((m - i) % 2 == 0)


def run_tree_process(ell: int, L: int) -> list[EuclideanTree]:
    """Staged evolution T_1, ..., T_m ending in the canonical T_{ell,L}.

    Stage i adds a q_i-thrill of size r_i: every vertex of the stationary
    side anchors a fan of q_i fresh vertices on the growing side. Leaf roles
    are assigned with stride r_i (anchor j, offset u -> role j + r_{i-1} +
    u*r_i), which reproduces the matching-peeling tree index-for-index.
    """
    sched = euclid_schedule(ell, L)
    r, q, m = sched.r, sched.q, sched.m
    hi_is_right = L >= ell
    edges: list[tuple[int, int]] = []
    stages: list[EuclideanTree] = []
    for i in range(1, m + 1):
        grow_right = _stage_grow_is_right(hi_is_right, m, i)
        for j in range(r[i]):
            for u in range(q[i - 1]):
                leaf = j + r[i - 1] + u * r[i]
                # Anchors live on the stationary side; store (left, right).
                edges.append((j, leaf) if grow_right else (leaf, j))
        if grow_right:
            left_count, right_count = r[i], r[i + 1]
        else:
            left_count, right_count = r[i + 1], r[i]
        stages.append(
            EuclideanTree(
                left_count,
                right_count,
                BipartiteGraph.from_edges(left_count, right_count, list(edges)),
            )
        )
    return stages


@dataclass(frozen=True)
class TreeCopy:
    """One host-graph copy of the canonical tree.

    left_by_role[i] is the host left vertex playing canonical x_i; same on
    the right. edges are host-index pairs.
    """

    left_by_role: tuple[int, ...]
    right_by_role: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class TreeFactor:
    ell: int
    L: int
    copies: tuple[TreeCopy, ...]


@dataclass(frozen=True)
class FactorReport:
    ok: bool
    problems: tuple[str, ...]


def verify_tree_factor(
    host: BipartiteGraph,
    factor: TreeFactor,
    ell: int,
    L: int,
    require_spanning: bool,
) -> FactorReport:
    """Check disjointness, edge membership, and per-copy isomorphism.

    Failures are reported as diagnostics, never raised.
    """
    problems: list[str] = []
    if (factor.ell, factor.L) != (ell, L):
        problems.append(f"factor declares ({factor.ell}, {factor.L}), expected ({ell}, {L})")
    canon = set(build_euclidean_tree(ell, L).graph.edges())
    seen_left: dict[int, int] = {}
    seen_right: dict[int, int] = {}
    for c, copy in enumerate(factor.copies):
        if len(copy.left_by_role) != ell or len(set(copy.left_by_role)) != ell:
            problems.append(f"copy {c}: left side is not {ell} distinct vertices")
            continue
        if len(copy.right_by_role) != L or len(set(copy.right_by_role)) != L:
            problems.append(f"copy {c}: right side is not {L} distinct vertices")
            continue
        if any(not 0 <= v < host.k for v in copy.left_by_role) or any(
            not 0 <= v < host.n for v in copy.right_by_role
        ):
            problems.append(f"copy {c}: vertex out of host range")
            continue
        for v in copy.left_by_role:
            if v in seen_left:
                problems.append(f"copies {seen_left[v]} and {c} share left vertex {v}")
            seen_left[v] = c
        for v in copy.right_by_role:
            if v in seen_right:
                problems.append(f"copies {seen_right[v]} and {c} share right vertex {v}")
            seen_right[v] = c
        if len(copy.edges) != ell + L - 1:
            problems.append(f"copy {c}: {len(copy.edges)} edges, expected {ell + L - 1}")
        mapped = {
            (copy.left_by_role[rx], copy.right_by_role[ry]) for rx, ry in canon
        }
        if mapped != set(copy.edges):
            problems.append(f"copy {c}: edge set does not match the canonical tree via its role map")
        for x, y in copy.edges:
            if not host.has_edge(x, y):
                problems.append(f"copy {c}: edge ({x}, {y}) not present in the host graph")
    if require_spanning and not problems:
        if len(seen_left) != host.k or len(seen_right) != host.n:
            problems.append(
                f"copies cover {len(seen_left)}/{host.k} left and "
                f"{len(seen_right)}/{host.n} right vertices; not spanning"
            )
    return FactorReport(ok=not problems, problems=tuple(problems))


def _tree_center(adj: list[list[int]]) -> list[int]:
    # Classic leaf peeling; the last surviving layer is the center pair.
    n = len(adj)
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    alive = n
    while alive > 2:
        nxt: list[int] = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        alive -= len(layer)
        layer = nxt
    return layer


def _ahu_code(root: int, adj: list[list[int]], k: int) -> str:
    def code(v: int, parent: int) -> str:
        side = "L" if v < k else "R"
        children = sorted(code(w, v) for w in adj[v] if w != parent)
        return "(" + side + "".join(children) + ")"

    return code(root, -1)


def trees_isomorphic(g1: BipartiteGraph, g2: BipartiteGraph) -> bool:
    """Side-preserving isomorphism test for trees (canonical AHU codes)."""
    for g in (g1, g2):
        if g.edge_count != g.k + g.n - 1 or not is_connected(g):
            raise ValueError("trees_isomorphic requires connected trees")
    if (g1.k, g1.n) != (g2.k, g2.n):
        return False

    def union_adj(g: BipartiteGraph) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(g.k + g.n)]
        for x, y in g.edges():
            adj[x].append(g.k + y)
            adj[g.k + y].append(x)
        return adj

    a1, a2 = union_adj(g1), union_adj(g2)
    c1, c2 = _tree_center(a1), _tree_center(a2)
    if len(c1) != len(c2):
        return False
    if len(c1) == 1:
        u, v = c1[0], c2[0]
        if (u < g1.k) != (v < g2.k):
            return False
        return _ahu_code(u, a1, g1.k) == _ahu_code(v, a2, g2.k)
    # Two centers are adjacent, hence on opposite sides: match left to left.
    u = c1[0] if c1[0] < g1.k else c1[1]
    v = c2[0] if c2[0] < g2.k else c2[1]
    if u >= g1.k or v >= g2.k:
        return False
    return _ahu_code(u, a1, g1.k) == _ahu_code(v, a2, g2.k)
