"""Hypothesis strategies producing small valid graphs."""
from hypothesis import strategies as st

from qgraph.graph import Bond, Graph, VertexCondition

lengths = st.floats(0.2, 2.0)
lams = st.floats(-1.0, 0.9)
conditions = st.one_of(
    st.just(VertexCondition.dirichlet()),
    st.floats(0.0, 3.0).map(VertexCondition.scaling),
)


@st.composite
def graphs(draw, max_vertices=4, max_extra=2, magnetic=True):
    """Connected graph: a random spanning tree plus a few extra bonds."""
    n = draw(st.integers(2, max_vertices))
    pairs = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    for _ in range(draw(st.integers(0, max_extra))):
        i = draw(st.integers(0, n - 2))
        j = draw(st.integers(i + 1, n - 1))
        pairs.append((i, j))
    bonds = tuple(
        Bond(i, j, draw(lengths), draw(lams), draw(st.floats(-1.0, 1.0)) if magnetic else 0.0)
        for i, j in pairs)
    conds = tuple(draw(conditions) for _ in range(n))
    return Graph(n, bonds, conds)
