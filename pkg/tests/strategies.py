"""Hypothesis strategies for coefficients, torus elements and basis combinations."""
from hypothesis import strategies as st

from qcluster.bases import ClusterMonomial, F, FormalCombination, One
from qcluster.qcoeff import QLaurent
from qcluster.torus import TorusElement

small_ints = st.integers(min_value=-5, max_value=5)


def qlaurents(max_terms: int = 4, max_e: int = 6, max_c: int = 5):
    return st.dictionaries(
        st.integers(-max_e, max_e), st.integers(-max_c, max_c), max_size=max_terms
    ).map(QLaurent)


def positive_qlaurents(max_terms: int = 4, max_e: int = 6, max_c: int = 5):
    return st.dictionaries(
        st.integers(-max_e, max_e), st.integers(1, max_c), max_size=max_terms
    ).map(QLaurent)


def torus_elements(max_terms: int = 4, box: int = 3):
    pairs = st.tuples(st.integers(-box, box), st.integers(-box, box))
    return st.dictionaries(pairs, qlaurents(3, 4, 3), max_size=max_terms).map(TorusElement)


def small_labels(m_lo: int = -3, m_hi: int = 4, max_degree: int = 2, max_n: int = 3):
    mono = st.builds(
        lambda m, a, b: ClusterMonomial.make(m, a, b),
        st.integers(m_lo, m_hi),
        st.integers(0, max_degree),
        st.integers(0, max_degree),
    ).filter(lambda l: isinstance(l, One) or l.a + l.b <= max_degree)
    return st.one_of(mono, st.integers(1, max_n).map(F))


def combinations(max_terms: int = 3):
    return st.dictionaries(small_labels(), qlaurents(2, 3, 3), max_size=max_terms).map(FormalCombination)
