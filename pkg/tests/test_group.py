import pickle

import numpy as np
import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics import PermutationGroup

from src.core import catalog
from src.core.errors import EnumerationLimitError, GroupError, NotInGroupError, NotNormalError, NotSubgroupError
from src.core.group import (
    PrimeSet,
    commutator_subgroup,
    element_orders_primes,
    enumerate_group,
    generated_subgroup,
    is_pi_element,
    is_pi_group,
    normal_closure,
    o_pi,
    preimage,
    quotient,
)
from src.core.permutation import Permutation, commutator, conjugate, parse_cycles


def P(text, n):
    return parse_cycles(text, n)


def sympy_order(generators, degree):
    gens = [SympyPermutation([v - 1 for v in g.images]) for g in generators]
    if not gens:
        return 1
    return PermutationGroup(gens).order()


def test_enumerate_examples():
    assert enumerate_group([P("(1,2,3)", 3), P("(1,2)", 3)], 3).order == 6
    assert enumerate_group([], 4).order == 1
    assert enumerate_group([Permutation.identity(4)], 4).order == 1
    assert enumerate_group([P("(1,2,3,4,5)", 5), P("(3,4,5)", 5)], 5).order == 60


@pytest.mark.parametrize("gens, degree", [
    (["(1,2,3,4,5,6,7,8)", "(1,3)(4,8)(5,7)"], 8),
    (["(1,2)(3,4)(5,6)", "(2,3)(4,5)", "(1,6)"], 6),
    (["(1,2,3)(4,5,6)", "(1,4)(2,5)(3,6)"], 6),
    (["(1,2,3,4,5,6)", "(1,2)"], 6),
    (["(1,2,3)", "(4,5,6,7)"], 7),
    (["(1,2,4,3,6,7,5)", "(2,3)(6,7)"], 7),
])
def test_enumerate_matches_sympy(gens, degree):
    generators = [P(g, degree) for g in gens]
    G = enumerate_group(generators, degree, max_elements=10 ** 7)
    assert G.order == sympy_order(generators, degree)
    assert G.element(0).is_identity()
    assert all(G.contains(g) for g in generators)


def test_hashed_rows_beyond_radix_degree():
    gens = [P("(1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16)", 16), P("(1,16)", 16)]
    with pytest.raises(EnumerationLimitError) as info:
        enumerate_group(gens, 16, max_elements=500)
    assert info.value.cap == 500
    cyclic = enumerate_group(gens[:1], 16)
    assert cyclic.order == 16
    assert cyclic.index(gens[0] ** 5) > 0


def test_enumeration_cap_is_named():
    with pytest.raises(EnumerationLimitError, match="120"):
        enumerate_group([P("(1,2,3,4,5,6)", 6), P("(1,2)", 6)], 6, max_elements=120)


def test_rows_are_sorted_and_indexable(s4):
    keys = [tuple(r) for r in s4.rows]
    assert keys == sorted(keys)
    for i in (0, 5, 23):
        assert s4.index(s4.element(i)) == i
    with pytest.raises(NotInGroupError):
        catalog.resolve("alternating(4)").index(P("(1,2)", 4))


def test_products_and_commutators_by_index(s4):
    for a in (3, 7, 11):
        bs = np.arange(s4.order)
        found = s4.commutator_indices(a, bs)
        for b in (0, 5, 17, 23):
            expected = commutator(s4.element(a), s4.element(b))
            assert s4.element(int(found[b])) == expected
        by = s4.commutator_indices_by(bs, a)
        assert s4.element(int(by[9])) == commutator(s4.element(9), s4.element(a))
    assert s4.element(s4.compose_index(4, 9)) == s4.element(4) * s4.element(9)
    conj = s4.conjugation_indices(13)
    assert s4.element(int(conj[6])) == conjugate(s4.element(6), s4.element(13))


def test_orders_and_inverses(a5):
    for i in range(0, a5.order, 7):
        p = a5.element(i)
        assert a5.orders[i] == p.order()
        assert a5.element(int(a5.inverse_indices[i])) == ~p
    assert a5.exponent == 30


def test_conjugacy_classes(s4, a5):
    assert len(s4.class_representatives()) == 5
    assert len(a5.class_representatives()) == 5
    mask = np.zeros(s4.order, dtype=bool)
    mask[s4.index(P("(1,2)", 4))] = True
    assert s4.close_under_conjugation(mask).sum() == 6


def test_generated_subgroup_and_normal_closure(s3, s4):
    assert generated_subgroup(s3, [P("(1,2,3)", 3)]).order == 3
    assert generated_subgroup(s3, []).is_trivial()
    V = normal_closure(s4, [P("(1,2)(3,4)", 4)])
    assert V.order == 4
    assert V.is_normal_in(s4)
    assert normal_closure(s4, [P("(1,2)", 4)]).order == 24


def test_is_abelian(s3, s4, q8, c6):
    assert c6.is_abelian()
    assert catalog.resolve("klein4").is_abelian()
    assert not s3.is_abelian()
    assert not q8.is_abelian()
    assert normal_closure(s4, [P("(1,2)(3,4)", 4)]).is_abelian()
    assert not normal_closure(s4, [P("(1,2)", 4)]).is_abelian()
    assert generated_subgroup(s4, []).is_abelian()


def test_commutator_subgroup(s3, s4):
    assert commutator_subgroup(s3, s3, s3).order == 3
    trivial = generated_subgroup(s4, [])
    assert commutator_subgroup(s4, s4, trivial).is_trivial()
    assert commutator_subgroup(s4, s4, s4).order == 12


def test_commutator_subgroup_of_non_normal_parts(s4):
    A = generated_subgroup(s4, [P("(1,2)", 4)])
    B = generated_subgroup(s4, [P("(2,3)", 4)])
    assert commutator_subgroup(s4, A, B).order == 3
    outside = enumerate_group([P("(1,2)", 5)], 5)
    with pytest.raises(GroupError):
        commutator_subgroup(s4, outside, s4)


def test_mask_of_rejects_foreign_subgroups(a4):
    with pytest.raises(NotSubgroupError):
        a4.mask_of(enumerate_group([P("(1,2)", 4)], 4))


def test_subgroup_from_mask_checks_closure(s3):
    mask = np.zeros(s3.order, dtype=bool)
    mask[[0, s3.index(P("(1,2)", 3)), s3.index(P("(1,3)", 3))]] = True
    with pytest.raises(GroupError):
        s3.subgroup_from_mask(mask)


def test_pi_elements_and_groups(s3):
    assert is_pi_element(P("(1,2)(3,4)", 4), {2})
    assert not is_pi_element(P("(1,2,3)", 3), {2})
    assert is_pi_group(s3, {2, 3})
    assert not is_pi_group(s3, PrimeSet(frozenset({3})))
    assert element_orders_primes(s3).primes == {2, 3}
    with pytest.raises(ValueError):
        PrimeSet(frozenset({4}))


def test_o_pi(s3, s4, a5):
    assert o_pi(s4, {2}).order == 4
    assert o_pi(s3, {3}).order == 3
    assert o_pi(a5, {2, 3}).is_trivial()
    assert o_pi(s4, {2, 3}) == s4


def test_quotient(s3, s4):
    V = normal_closure(s4, [P("(1,2)(3,4)", 4)])
    Q, projection = quotient(s4, V)
    assert Q.order == 6
    assert projection(P("(1,2)(3,4)", 4)).is_identity()
    whole, _ = quotient(s4, s4)
    assert whole.is_trivial()
    C3 = generated_subgroup(s3, [P("(1,2,3)", 3)])
    assert quotient(s3, C3)[0].order == 2


def test_quotient_projection_is_a_homomorphism(s4):
    V = normal_closure(s4, [P("(1,2)(3,4)", 4)])
    _, projection = quotient(s4, V)
    for i, j in ((3, 8), (5, 19), (22, 7)):
        x, y = s4.element(i), s4.element(j)
        assert projection(x * y) == projection(x) * projection(y)


def test_quotient_requires_normality(s4):
    H = generated_subgroup(s4, [P("(1,2)", 4)])
    with pytest.raises(NotNormalError):
        quotient(s4, H)


def test_preimage_of_quotient_subgroup(s4):
    V = normal_closure(s4, [P("(1,2)(3,4)", 4)])
    Q, projection = quotient(s4, V)
    C3 = generated_subgroup(Q, [projection(P("(1,2,3)", 4))])
    assert preimage(projection, C3).order == 12


def test_memoize_and_pickle(s3):
    calls = []

    def factory():
        calls.append(1)
        return "value"

    assert s3.memoize(("test", 1), factory) == "value"
    assert s3.memoize(("test", 1), factory) == "value"
    assert len(calls) == 1
    copy = pickle.loads(pickle.dumps(s3))
    assert copy == s3
    assert copy.digest == s3.digest
