from fractions import Fraction

from hypothesis import strategies as st

from graphfair.graph import Graph
from graphfair.instances import random_graph
from graphfair.valuation import AdditiveValuation


@st.composite
def graphs(draw, kind="connected", min_m=1, max_m=8):
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    return random_graph(kind, m, seed)


@st.composite
def any_connected_graph(draw, min_m=1, max_m=7):
    """Arbitrary connected graph: a random tree plus any subset of extra edges."""
    m = draw(st.integers(min_value=min_m, max_value=max_m))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, m)}
    extra = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=2 * m))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph(m, frozenset(edges))


def additive(m, max_value=6):
    return st.lists(
        st.integers(0, max_value), min_size=m, max_size=m
    ).map(lambda xs: AdditiveValuation(tuple(Fraction(x) for x in xs)))
