"""Exact NMP decision with certificates.

A bipartite graph G(X, Y) with |X| = k, |Y| = n has the normalized matching
property (NMP) when every S subset of X satisfies |N(S)|/n >= |S|/k. The
decision is run as a max-flow problem: with g = gcd(k, n), send n/g units
through every left vertex and k/g through every right vertex. Saturation is
equivalent to NMP, and a saturating integral flow restricted to the graph
edges is a multiplicity function (constant row sums n/g, constant column
sums k/g). An unsaturated run yields a violating witness from the min cut:
the left vertices on the source side S satisfy k*|N(S)| < n*|S|.

Also provided: a 2^k brute-force oracle over all subsets, the independent-set
inequality check, and transfer of a right-side witness to a left-side one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .flow import FlowNetwork, max_flow
from .graph import BipartiteGraph, Side, VertexSet, left_set, neighborhood


class Verdict(Enum):
    HAS_NMP = "has_nmp"
    VIOLATED = "violated"


@dataclass(frozen=True)
class NMPCertificate:
    verdict: Verdict
    row_sum: int  # n/gcd(k, n)
    col_sum: int  # k/gcd(k, n)
    multiplicity: dict[tuple[int, int], int] | None = None
    witness: VertexSet | None = None
    witness_neighborhood_size: int | None = None


@dataclass(frozen=True)
class OracleResult:
    verdict: Verdict
    worst_set: VertexSet
    # (|N(S)|, |S|) for the set minimizing the normalized ratio
    # k*|N(S)| / (n*|S|); ties broken by smaller |S|, then lexicographic
    # members.
    worst_ratio_pair: tuple[int, int]


@dataclass(frozen=True)
class IndependentPair:
    i_x: VertexSet
    i_y: VertexSet


def _build_network(g: BipartiteGraph) -> tuple[FlowNetwork, int, int, list[tuple[int, int]]]:
    k, n = g.k, g.n
    d = math.gcd(k, n)
    row_sum = n // d
    col_sum = k // d
    # Nodes: 0 source, 1..k lefts, k+1..k+n rights, k+n+1 sink.
    net = FlowNetwork(node_count=k + n + 2, source=0, sink=k + n + 1)
    for x in range(k):
        net.add_arc(0, 1 + x, row_sum)
    edge_cap = min(row_sum, col_sum)
    edge_arcs: list[tuple[int, int]] = []
    for x, y in g.edges():
        net.add_arc(1 + x, 1 + k + y, edge_cap)
        edge_arcs.append((x, y))
    for y in range(n):
        net.add_arc(1 + k + y, k + n + 1, col_sum)
    return net, row_sum, col_sum, edge_arcs


def check_nmp(g: BipartiteGraph) -> NMPCertificate:
    """Decide NMP exactly; return a multiplicity function or a witness."""
    if g.k < 1 or g.n < 1:
        raise ValueError("check_nmp requires nonempty sides")
    net, row_sum, col_sum, edge_arcs = _build_network(g)
    res = max_flow(net)
    target = g.k * row_sum
    if res.value == target:
        mult = {
            edge_arcs[i]: res.arc_flow[g.k + i]
            for i in range(len(edge_arcs))
        }
        return NMPCertificate(
            verdict=Verdict.HAS_NMP, row_sum=row_sum, col_sum=col_sum, multiplicity=mult
        )
    witness = left_set(x for x in range(g.k) if res.source_side[1 + x])
    nbhd = neighborhood(g, witness)
    return NMPCertificate(
        verdict=Verdict.VIOLATED,
        row_sum=row_sum,
        col_sum=col_sum,
        witness=witness,
        witness_neighborhood_size=len(nbhd),
    )


def validate_certificate(g: BipartiteGraph, cert: NMPCertificate) -> None:
    """Re-verify a certificate from scratch; raises ValueError when unsound.

    Independent of the flow solver: only sums and the witness inequality.
    """
    d = math.gcd(g.k, g.n)
    if cert.row_sum != g.n // d or cert.col_sum != g.k // d:
        raise ValueError("certificate sums do not match n/gcd, k/gcd")
    if cert.verdict is Verdict.HAS_NMP:
        mult = cert.multiplicity
        if mult is None:
            raise ValueError("HasNMP certificate missing multiplicity function")
        rows = [0] * g.k
        cols = [0] * g.n
        for (x, y), m in mult.items():
            if not g.has_edge(x, y):
                raise ValueError(f"multiplicity on non-edge ({x}, {y})")
            if m < 0:
                raise ValueError("negative multiplicity")
            rows[x] += m
            cols[y] += m
        if any(r != cert.row_sum for r in rows):
            raise ValueError("row sums not constant at n/gcd")
        if any(c != cert.col_sum for c in cols):
            raise ValueError("column sums not constant at k/gcd")
    else:
        if cert.witness is None or len(cert.witness) == 0:
            raise ValueError("Violated certificate missing witness")
        nbhd = neighborhood(g, cert.witness)
        if cert.witness_neighborhood_size != len(nbhd):
            raise ValueError("stated witness neighborhood size is wrong")
        if not g.k * len(nbhd) < g.n * len(cert.witness):
            raise ValueError("witness does not violate the NMP inequality")


def nmp_oracle_bruteforce(g: BipartiteGraph) -> OracleResult:
    """Enumerate all 2^k subsets of X; exact but exponential.

    Requires k <= 22 (the subset neighborhood table has 2^k entries).
    """
    k, n = g.k, g.n
    if k > 22:
        raise ValueError(f"brute force limited to k <= 22, got k={k}")
    nbr_mask = [0] * k
    for x in range(k):
        m = 0
        for y in g.adj[x]:
            m |= 1 << y
        nbr_mask[x] = m

    nb = [0] * (1 << k)
    violated = False
    best_sz = best_nb = None  # ratio argmin state
    best_members: tuple[int, ...] | None = None
    for s in range(1, 1 << k):
        low = s & (-s)
        nb[s] = nb[s ^ low] | nbr_mask[low.bit_length() - 1]
        nb_sz = nb[s].bit_count()
        sz = s.bit_count()
        if k * nb_sz < n * sz:
            violated = True
        if best_sz is None:
            better = True
        else:
            lhs = nb_sz * best_sz
            rhs = best_nb * sz
            if lhs != rhs:
                better = lhs < rhs
            elif sz != best_sz:
                better = sz < best_sz
            else:
                members = tuple(x for x in range(k) if s >> x & 1)
                better = members < best_members
        if better:
            best_sz, best_nb = sz, nb_sz
            best_members = tuple(x for x in range(k) if s >> x & 1)
    return OracleResult(
        verdict=Verdict.VIOLATED if violated else Verdict.HAS_NMP,
        worst_set=left_set(best_members),
        worst_ratio_pair=(best_nb, best_sz),
    )


def kleitman_independent_check(g: BipartiteGraph, pair: IndependentPair) -> bool:
    """For an independent pair, test n*|I_X| + k*|I_Y| <= n*k.

    Raises ValueError if (I_X, I_Y) is not independent in g.
    """
    if pair.i_x.side is not Side.LEFT or pair.i_y.side is not Side.RIGHT:
        raise ValueError("IndependentPair must be (left set, right set)")
    ys = set(pair.i_y.members)
    for x in pair.i_x:
        for y in g.adj[x]:
            if y in ys:
                raise ValueError(f"set is not independent: edge ({x}, {y}) inside it")
    return g.n * len(pair.i_x) + g.k * len(pair.i_y) <= g.n * g.k


def witness_transfer(g: BipartiteGraph, t: VertexSet) -> VertexSet:
    """Turn a right-side violating witness into a left-side one.

    Requires n*|N(T)| < k*|T| (T violates NMP for the side-swapped graph);
    returns S = X \\ N(T), which satisfies k*|N(S)| < n*|S|.
    """
    if t.side is not Side.RIGHT:
        raise ValueError("witness_transfer expects a right-side set")
    nt = neighborhood(g, t)
    if not g.n * len(nt) < g.k * len(t):
        raise ValueError("T is not a violating witness for the side-swapped graph")
    nt_members = set(nt.members)
    return left_set(x for x in range(g.k) if x not in nt_members)
