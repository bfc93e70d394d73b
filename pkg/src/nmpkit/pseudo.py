"""Graph generators and pseudorandomness checks.

A bipartite graph G(X, Y) with |X| = k <= n = |Y| is Thomason pseudorandom
with parameters (p, eps) when every left degree is at least p*n and every
pair of distinct left vertices has at most (1 + eps) * p^2 * n common
neighbors. Verification is an exact scan: parameters are held as rationals
and all comparisons are done with exact arithmetic, so there is no float
boundary flakiness.

Generators: seeded G(k, n, p), sum-Cayley graphs over a prime field, and
point-line incidences of the projective plane PG(2, q). A sampled mixing
audit evaluates the degree/codegree mixing inequality (or the spectral
sum-Cayley form) on random subset pairs; for genuinely pseudorandom inputs
it must report zero violations. `robust_delete` removes a random right-side
slab plus the left vertices it overloads, leaving a graph that is again
pseudorandom with explicitly degraded parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import BipartiteGraph, VertexSet, induced_subgraph, left_set, right_set
from .rng import SplitMix64, derive_seed, uniform_stream


@dataclass(frozen=True)
class PseudoParams:
    p: Fraction
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if not 0 < self.p <= 1:
            raise ValueError(f"p must be in (0, 1], got {self.p}")
        if self.eps < 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")

    @property
    def eps_in_definition_range(self) -> bool:
        # Values eps >= 1 are allowed in reports but flagged.
        return self.eps < 1


@dataclass(frozen=True)
class PseudoReport:
    params: PseudoParams
    min_left_degree: int
    max_codegree: int
    passed: bool
    violating_vertex: int | None = None
    violating_pair: tuple[int, int] | None = None
    estimated: PseudoParams | None = None


def _packed_rows(g: BipartiteGraph) -> np.ndarray:
    return np.packbits(g.matrix(), axis=1)


def _codegree_scan(g: BipartiteGraph) -> tuple[int, np.ndarray]:
    """Max codegree over left pairs, plus per-row max (row i vs rows > i)."""
    packed = _packed_rows(g)
    row_max = np.zeros(g.k, dtype=np.int64)
    for u in range(g.k - 1):
        common = np.bitwise_count(packed[u + 1:] & packed[u]).sum(axis=1)
        row_max[u] = int(common.max())
    return int(row_max.max()) if g.k >= 2 else 0, row_max


def verify_thomason(g: BipartiteGraph, params: PseudoParams) -> PseudoReport:
    """Exact degree/codegree scan against (p, eps)."""
    if g.k < 2:
        raise ValueError("pseudorandomness verification requires k >= 2")
    degs = [g.degree(x) for x in range(g.k)]
    min_deg = min(degs)
    deg_bound = params.p * g.n
    violating_vertex = None
    if min_deg < deg_bound:
        violating_vertex = next(x for x in range(g.k) if degs[x] < deg_bound)

    max_cod, row_max = _codegree_scan(g)
    cod_bound = (1 + params.eps) * params.p * params.p * g.n
    violating_pair = None
    if max_cod > cod_bound:
        packed = _packed_rows(g)
        for u in range(g.k - 1):
            if row_max[u] > cod_bound:
                common = np.bitwise_count(packed[u + 1:] & packed[u]).sum(axis=1)
                v = u + 1 + int(np.argmax(common > cod_bound))
                violating_pair = (u, v)
                break
    passed = violating_vertex is None and violating_pair is None
    return PseudoReport(
        params=params,
        min_left_degree=min_deg,
        max_codegree=max_cod,
        passed=passed,
        violating_vertex=violating_vertex,
        violating_pair=violating_pair,
    )


def estimate_thomason_params(g: BipartiteGraph) -> PseudoParams:
    """Tightest (p, eps) the graph itself supports; always verifies."""
    if g.k < 2:
        raise ValueError("parameter estimation requires k >= 2")
    min_deg = min(g.degree(x) for x in range(g.k))
    if min_deg < 1:
        raise ValueError("graph has an isolated left vertex; p would be 0")
    max_cod, _ = _codegree_scan(g)
    p = Fraction(min_deg, g.n)
    eps = max(Fraction(0), Fraction(max_cod * g.n, min_deg * min_deg) - 1)
    return PseudoParams(p=p, eps=eps)


def gen_gnp(k: int, n: int, p: float, seed: int) -> BipartiteGraph:
    """G(k, n, p): each of the k*n pairs is an edge independently.

    Pair (x, y) uses uniform number x*n + y of the splitmix64 stream, so the
    graph is a pure function of (k, n, p, seed).
    """
    if not 0 <= p <= 1:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if k < 1 or n < 1:
        raise ValueError("sides must be nonempty")
    u = uniform_stream(seed, k * n)
    return BipartiteGraph.from_matrix((u < p).reshape(k, n))


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class SumCayleyGraph:
    graph: BipartiteGraph
    q: int
    d: int
    h: tuple[int, ...]           # the subgroup: d-th power residues
    x_elements: tuple[int, ...]  # field element of each left vertex
    y_elements: tuple[int, ...]


def gen_sum_cayley(
    q: int,
    d: int,
    x_spec: str | list[int] = "all",
    y_spec: str | list[int] = "all",
) -> SumCayleyGraph:
    """Bipartite sum-Cayley graph: (x, y) is an edge iff x + y is in H.

    H is the unique multiplicative subgroup of order (q-1)/d, i.e. the set
    of d-th power residues mod the prime q.
    """
    if not _is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if d < 1 or (q - 1) % d != 0:
        raise ValueError(f"d = {d} does not divide q - 1 = {q - 1}")

    def resolve(spec: str | list[int], name: str) -> tuple[int, ...]:
        if spec == "all":
            return tuple(range(q))
        elems = tuple(sorted(set(spec)))
        if len(elems) != len(spec):
            raise ValueError(f"{name} subset has repeated elements")
        if not elems:
            raise ValueError(f"{name} subset is empty")
        if elems[0] < 0 or elems[-1] >= q:
            raise ValueError(f"{name} subset has elements outside F_{q}")
        return elems

    xs = resolve(x_spec, "X")
    ys = resolve(y_spec, "Y")
    h = sorted({pow(v, d, q) for v in range(1, q)})
    in_h = np.zeros(q, dtype=bool)
    in_h[h] = True
    sums = np.add.outer(np.array(xs), np.array(ys)) % q
    return SumCayleyGraph(
        graph=BipartiteGraph.from_matrix(in_h[sums]),
        q=q,
        d=d,
        h=tuple(h),
        x_elements=xs,
        y_elements=ys,
    )


def gen_pg2(q: int) -> BipartiteGraph:
    """Point-line incidence graph of the projective plane PG(2, q), q prime.

    Both sides have q^2 + q + 1 vertices; every degree is q + 1 and every
    pair of distinct points lies on exactly one common line.
    """
    if not _is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    reps = [(0, 0, 1)]
    reps += [(0, 1, c) for c in range(q)]
    reps += [(1, b, c) for b in range(q) for c in range(q)]
    pts = np.array(reps, dtype=np.int64)
    incidence = (pts @ pts.T) % q == 0
    return BipartiteGraph.from_matrix(incidence)


@dataclass(frozen=True)
class MixingAudit:
    form: str
    samples: int
    violations: int
    worst_margin: float              # min over samples of bound - |deviation|
    worst_pair_sizes: tuple[int, int]


def mixing_deviation(
    g: BipartiteGraph,
    a: VertexSet,
    b: VertexSet,
    params: PseudoParams | None = None,
    form: str = "thomason",
    h_size: int | None = None,
    q: int | None = None,
) -> tuple[bool, float, float]:
    """Evaluate one mixing inequality exactly.

    thomason:      |e(A,B) - p*a*b|        <= sqrt(p*n*a*b*(1 + eps*p*a))
    alon_bourgain: |e(A,B) - a*b*h_size/q| <  sqrt(q*a*b)

    Returns (holds, |deviation|, bound) with the last two as floats for
    reporting; the comparison itself is done on exact squares.
    """
    from .graph import edge_count_between

    e = edge_count_between(g, a, b)
    asz, bsz = len(a), len(b)
    if form == "thomason":
        if params is None:
            raise ValueError("thomason form needs params")
        dev = Fraction(e) - params.p * asz * bsz
        bound_sq = params.p * g.n * asz * bsz * (1 + params.eps * params.p * asz)
        holds = dev * dev <= bound_sq
    elif form == "alon_bourgain":
        if h_size is None or q is None:
            raise ValueError("alon_bourgain form needs h_size and q")
        dev = Fraction(e) - Fraction(asz * bsz * h_size, q)
        bound_sq = Fraction(q * asz * bsz)
        holds = dev * dev < bound_sq
    else:
        raise ValueError(f"unknown bound form {form!r}")
    return bool(holds), abs(float(dev)), math.sqrt(float(bound_sq))


def mixing_audit(
    g: BipartiteGraph,
    params: PseudoParams | None,
    samples: int,
    seed: int,
    form: str = "thomason",
    h_size: int | None = None,
    q: int | None = None,
) -> MixingAudit:
    """Sampled refutation tool for the mixing inequality.

    Subset sizes are uniform over their valid ranges and members are drawn
    without replacement, one derived stream per sample. For the thomason
    form |A| >= ceil(1/p) is enforced and (g, params) must verify first.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if form == "thomason":
        if params is None:
            raise ValueError("thomason form needs params")
        if not verify_thomason(g, params).passed:
            raise ValueError("graph does not verify the claimed parameters")
        a_min = math.ceil(1 / params.p)
        if a_min > g.k:
            raise ValueError(f"no valid subset size: ceil(1/p) = {a_min} > k = {g.k}")
    elif form == "alon_bourgain":
        a_min = 1
    else:
        raise ValueError(f"unknown bound form {form!r}")

    violations = 0
    worst_margin = math.inf
    worst_sizes = (0, 0)
    for trial in range(samples):
        rng = SplitMix64(derive_seed(seed, trial))
        asz = a_min + rng.randbelow(g.k - a_min + 1)
        bsz = 1 + rng.randbelow(g.n)
        a = left_set(rng.sample(g.k, asz))
        b = right_set(rng.sample(g.n, bsz))
        holds, dev, bound = mixing_deviation(g, a, b, params, form, h_size, q)
        if not holds:
            violations += 1
        margin = bound - dev
        if margin < worst_margin:
            worst_margin = margin
            worst_sizes = (asz, bsz)
    return MixingAudit(
        form=form,
        samples=samples,
        violations=violations,
        worst_margin=worst_margin,
        worst_pair_sizes=worst_sizes,
    )


@dataclass(frozen=True)
class RobustDeleteResult:
    c_x: VertexSet
    c_y: VertexSet
    p1: Fraction
    eps1: Fraction
    attempts: int
    threshold_t: float
    bad_bound: float        # accepted when |C_X| <= bad_bound = 2k*exp(-2t^2 D)
    reverify: PseudoReport  # induced subgraph checked against (p1, eps1)


def robust_delete(
    g: BipartiteGraph,
    p0: Fraction | float,
    eps0: Fraction | float,
    eps: float,
    d_size: int,
    seed: int,
    max_attempts: int = 100,
) -> RobustDeleteResult:
    """Delete a random D-subset of Y and the left vertices it overloads.

    A left vertex u is bad for the sampled T when |N(u) & T| >= (d(u)/n + t)*D
    with t = eps * p0 * (n/D - 1). The first T whose bad set is within the
    expectation bound 2k*exp(-2 t^2 D) is kept (resampling with derived
    streams; in expectation the first attempt already works). The survivor
    graph is re-verified with p1 = p0*(1 - eps), eps1 = 5*(eps0 + 3*eps).
    """
    params0 = PseudoParams(p0, eps0)
    if not verify_thomason(g, params0).passed:
        raise ValueError("graph does not verify the claimed (p0, eps0)")
    k, n = g.k, g.n
    if params0.p * params0.p * k < 1:
        raise ValueError(f"needs p0 >= 1/sqrt(k); got p0 = {float(params0.p):.6g}, k = {k}")
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    alpha = eps ** 3
    lo, hi = math.ceil(alpha * n / 2), math.floor(alpha * n)
    if not lo <= d_size <= hi:
        raise ValueError(f"D = {d_size} outside [ceil(alpha*n/2), floor(alpha*n)] = [{lo}, {hi}]")

    t = eps * float(params0.p) * (n / d_size - 1)
    bad_bound = 2 * k * math.exp(-2 * t * t * d_size)
    degs = [g.degree(x) for x in range(k)]
    for attempt in range(max_attempts):
        rng = SplitMix64(derive_seed(seed, attempt))
        t_set = set(rng.sample(n, d_size))
        bad = [
            u
            for u in range(k)
            if sum(1 for y in g.adj[u] if y in t_set) >= (degs[u] / n + t) * d_size
        ]
        if len(bad) <= bad_bound:
            c_x = left_set(bad)
            c_y = right_set(t_set)
            p1 = params0.p * (1 - Fraction(eps))
            eps1 = 5 * (params0.eps + 3 * Fraction(eps))
            keep_x = left_set(x for x in range(k) if x not in set(bad))
            keep_y = right_set(y for y in range(n) if y not in t_set)
            sub, _, _ = induced_subgraph(g, keep_x, keep_y)
            if sub is None:
                raise ValueError("deletion emptied a side; graph too small for this D")
            report = verify_thomason(sub, PseudoParams(p1, eps1))
            return RobustDeleteResult(
                c_x=c_x,
                c_y=c_y,
                p1=p1,
                eps1=eps1,
                attempts=attempt + 1,
                threshold_t=t,
                bad_bound=bad_bound,
                reverify=report,
            )
    raise RuntimeError(
        f"no acceptable deletion set in {max_attempts} attempts; re-seed and retry"
    )
