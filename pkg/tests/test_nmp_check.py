from itertools import product

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from nmpkit import (
    BipartiteGraph,
    IndependentPair,
    Verdict,
    build_euclidean_tree,
    check_nmp,
    kleitman_independent_check,
    left_set,
    neighborhood,
    nmp_oracle_bruteforce,
    right_set,
    validate_certificate,
    witness_transfer,
)
from nmpkit.rng import SplitMix64, derive_seed

from conftest import bipartite_graphs, complete_graph


def brute_multiplicity_solutions(g, row_sum, col_sum, cap):
    """Independent oracle: enumerate all integer edge weightings in [0, cap]."""
    edges = list(g.edges())
    sols = []
    for values in product(range(cap + 1), repeat=len(edges)):
        rows = [0] * g.k
        cols = [0] * g.n
        for (x, y), v in zip(edges, values):
            rows[x] += v
            cols[y] += v
        if all(r == row_sum for r in rows) and all(c == col_sum for c in cols):
            sols.append(dict(zip(edges, values)))
    return sols


def test_check_nmp_complete_k23():
    cert = check_nmp(complete_graph(2, 3))
    assert cert.verdict is Verdict.HAS_NMP
    assert (cert.row_sum, cert.col_sum) == (3, 2)
    validate_certificate(complete_graph(2, 3), cert)


def test_check_nmp_isolated_right_vertex():
    g = BipartiteGraph.from_edges(2, 2, [(0, 0), (1, 0)])
    cert = check_nmp(g)
    assert cert.verdict is Verdict.VIOLATED
    assert cert.witness.members == (0, 1)
    assert cert.witness_neighborhood_size == 1
    validate_certificate(g, cert)


def test_check_nmp_t23_multiplicity_is_the_unique_solution():
    g = build_euclidean_tree(2, 3).graph
    # The 4-variable integer system has exactly one solution; confirm by
    # exhaustive search, then require check_nmp to return it.
    sols = brute_multiplicity_solutions(g, row_sum=3, col_sum=2, cap=3)
    assert sols == [{(0, 0): 1, (0, 1): 2, (1, 0): 1, (1, 2): 2}]
    cert = check_nmp(g)
    assert cert.verdict is Verdict.HAS_NMP
    assert cert.multiplicity == sols[0]


def test_oracle_star():
    star = build_euclidean_tree(1, 5).graph
    assert nmp_oracle_bruteforce(star).verdict is Verdict.HAS_NMP


def test_oracle_empty_graph_worst_set():
    g = BipartiteGraph.from_edges(2, 2, [])
    res = nmp_oracle_bruteforce(g)
    assert res.verdict is Verdict.VIOLATED
    assert res.worst_set.members == (0,)
    assert res.worst_ratio_pair == (0, 1)


def test_oracle_k_limit():
    g = complete_graph(23, 23)
    with pytest.raises(ValueError, match="k <= 22"):
        nmp_oracle_bruteforce(g)


@given(bipartite_graphs(max_k=7, max_n=9))
def test_oracle_equivalence_hypothesis(g):
    cert = check_nmp(g)
    validate_certificate(g, cert)
    assert cert.verdict is nmp_oracle_bruteforce(g).verdict


def test_oracle_equivalence_seeded_sweep():
    for trial in range(300):
        rng = SplitMix64(derive_seed(1001, trial))
        k = 1 + rng.randbelow(10)
        n = 1 + rng.randbelow(12)
        p = (1 + rng.randbelow(9)) / 10
        edges = [(x, y) for x in range(k) for y in range(n) if rng.random() < p]
        g = BipartiteGraph.from_edges(k, n, edges)
        cert = check_nmp(g)
        validate_certificate(g, cert)
        assert cert.verdict is nmp_oracle_bruteforce(g).verdict


@given(bipartite_graphs(max_k=6, max_n=8))
def test_side_symmetry(g):
    assert check_nmp(g).verdict is check_nmp(g.swap_sides()).verdict


@given(bipartite_graphs(max_k=5, max_n=6), st.randoms(use_true_random=False))
@settings(max_examples=40)
def test_monotonicity_under_edge_addition(g, rnd):
    cert = check_nmp(g)
    non_edges = [(x, y) for x in range(g.k) for y in range(g.n) if not g.has_edge(x, y)]
    rnd.shuffle(non_edges)
    for x, y in non_edges[:6]:
        g = g.with_edge(x, y)
        new = check_nmp(g)
        if cert.verdict is Verdict.HAS_NMP:
            assert new.verdict is Verdict.HAS_NMP
        cert = new


def test_kleitman_complete():
    g = complete_graph(3, 4)
    assert kleitman_independent_check(g, IndependentPair(left_set([0]), right_set([])))


def test_kleitman_empty_graph_full_sides():
    g = BipartiteGraph.from_edges(2, 2, [])
    pair = IndependentPair(left_set([0, 1]), right_set([0, 1]))
    assert not kleitman_independent_check(g, pair)


def test_kleitman_rejects_dependent_pair():
    g = complete_graph(2, 2)
    with pytest.raises(ValueError, match="independent"):
        kleitman_independent_check(g, IndependentPair(left_set([0]), right_set([0])))


@given(bipartite_graphs(max_k=6, max_n=8))
def test_kleitman_on_violation_witness(g):
    cert = check_nmp(g)
    if cert.verdict is Verdict.VIOLATED:
        s = cert.witness
        ns = set(neighborhood(g, s).members)
        pair = IndependentPair(s, right_set(set(range(g.n)) - ns))
        assert kleitman_independent_check(g, pair) is False


def test_witness_transfer_isolated_right():
    g = BipartiteGraph.from_edges(2, 2, [(0, 1), (1, 1)])
    s = witness_transfer(g, right_set([0]))
    assert s.members == (0, 1)


def test_witness_transfer_empty_graph():
    g = BipartiteGraph.from_edges(2, 2, [])
    assert witness_transfer(g, right_set([0])).members == (0, 1)


def test_witness_transfer_rejects_non_witness():
    g = complete_graph(2, 2)
    with pytest.raises(ValueError, match="not a violating witness"):
        witness_transfer(g, right_set([0]))


@given(bipartite_graphs(max_k=6, max_n=8))
def test_witness_transfer_property(g):
    swapped = check_nmp(g.swap_sides())
    if swapped.verdict is Verdict.VIOLATED:
        t = right_set(swapped.witness.members)  # lives on g's right side
        s = witness_transfer(g, t)
        ns = neighborhood(g, s)
        assert g.k * len(ns) < g.n * len(s)


def test_validate_certificate_catches_tampering():
    g = complete_graph(2, 3)
    cert = check_nmp(g)
    bad = {k: v for k, v in cert.multiplicity.items()}
    bad[(0, 0)] += 1
    from nmpkit import NMPCertificate

    tampered = NMPCertificate(
        verdict=cert.verdict, row_sum=cert.row_sum, col_sum=cert.col_sum, multiplicity=bad
    )
    with pytest.raises(ValueError):
        validate_certificate(g, tampered)
