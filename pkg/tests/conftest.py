import hypothesis.strategies as st
from hypothesis import settings

from nmpkit import BipartiteGraph, TreeCopy, TreeFactor, induced_subgraph, left_set, right_set

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@st.composite
def bipartite_graphs(draw, max_k=8, max_n=10, min_k=1, min_n=1):
    k = draw(st.integers(min_k, max_k))
    n = draw(st.integers(min_n, max_n))
    edges = draw(
        st.sets(
            st.tuples(st.integers(0, k - 1), st.integers(0, n - 1)),
            max_size=k * n,
        )
    )
    return BipartiteGraph.from_edges(k, n, sorted(edges))


def complete_graph(k: int, n: int) -> BipartiteGraph:
    return BipartiteGraph.from_edges(k, n, [(x, y) for x in range(k) for y in range(n)])


def remainder_and_factor(g, trace):
    """Induced remainder after a decomposition plus the factor remapped to it."""
    keep_x = left_set(set(range(g.k)) - set(trace.D_X.members))
    keep_y = right_set(set(range(g.n)) - set(trace.D_Y.members))
    sub, lmap, rmap = induced_subgraph(g, keep_x, keep_y)
    if sub is None:
        return None, None
    li = {o: i for i, o in enumerate(lmap)}
    ri = {o: j for j, o in enumerate(rmap)}
    mapped = TreeFactor(
        trace.ell,
        trace.L,
        tuple(
            TreeCopy(
                tuple(li[h] for h in c.left_by_role),
                tuple(ri[h] for h in c.right_by_role),
                tuple((li[x], ri[y]) for x, y in c.edges),
            )
            for c in trace.factor.copies
        ),
    )
    return sub, mapped
