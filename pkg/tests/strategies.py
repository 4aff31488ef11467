"""Hypothesis strategies for permutations"""

from hypothesis import strategies as st

from src.core.permutation import Permutation


def perms(degree):
    return st.permutations(list(range(1, degree + 1))).map(Permutation)


def even_perms(degree):
    return perms(degree).filter(lambda p: p.is_even())


@st.composite
def perm_pairs(draw, max_degree=8):
    n = draw(st.integers(min_value=1, max_value=max_degree))
    return draw(perms(n)), draw(perms(n))


@st.composite
def perm_triples(draw, max_degree=8):
    n = draw(st.integers(min_value=1, max_value=max_degree))
    return draw(perms(n)), draw(perms(n)), draw(perms(n))
