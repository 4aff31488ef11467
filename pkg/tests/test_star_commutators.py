import random

import numpy as np
import pytest

from src.core import catalog
from src.core.config import config
from src.core.errors import LemmaPreconditionError
from src.core.group import generated_subgroup, normal_closure
from src.core.permutation import Permutation, parse_cycles
from src.core.series import SeriesKind, series
from src.core.star_commutators import (
    ElementSet,
    StarFamily,
    check_fitting_criterion,
    check_lower_fitting_identity,
    check_nesting_and_normality,
    check_nilpotency_criterion,
    check_pi_theorem,
    check_quotient_lifting,
    commutator_order_primes,
    coprime_commutator_coverage,
    delta_star_set,
    find_lemma_instances,
    gamma_star_set,
    lemma_iterated_check,
    min_delta_trivial_level,
    power_closure,
    star_set,
    star_subgroup,
)


def P(text, n):
    return parse_cycles(text, n)


def as_set(S: ElementSet):
    return {str(p) for p in S.elements()}


def subset(G, texts):
    mask = np.zeros(G.order, dtype=bool)
    for t in texts:
        mask[G.index(P(t, G.degree))] = True
    return ElementSet(G, mask, "subset")


def test_power_closure(s3, a5):
    five = power_closure(subset(a5, ["(1,2,3,4,5)"]))
    assert five.size == 5
    assert as_set(power_closure(subset(s3, ["(1,2)", "(1,2,3)"]))) == {"()", "(1,2)", "(1,2,3)", "(1,3,2)"}
    empty = ElementSet(s3, np.zeros(s3.order, dtype=bool), "empty")
    assert power_closure(empty).size == 0


def test_delta_star_sets_of_s3(s3):
    assert delta_star_set(s3, 0).size == 6
    assert as_set(delta_star_set(s3, 1)) == {"()", "(1,2,3)", "(1,3,2)"}
    assert as_set(delta_star_set(s3, 2)) == {"()"}


def test_gamma_star_sets(s3, q8):
    assert as_set(gamma_star_set(s3, 2)) == {"()", "(1,2,3)", "(1,3,2)"}
    assert gamma_star_set(q8, 2).is_trivial()
    assert gamma_star_set(s3, 1).size == 6
    with pytest.raises(ValueError):
        gamma_star_set(s3, 0)
    with pytest.raises(ValueError):
        delta_star_set(s3, -1)


def test_class_representative_scan_matches_full_scan(s4):
    for k in (1, 2, 3):
        fast = delta_star_set(s4, k)
        full = catalog.entry("symmetric", 4).build()
        slow = delta_star_set(full, k, use_class_representatives=False)
        assert np.array_equal(fast.mask, slow.mask)


def test_star_subgroups(s3, s4, a5):
    assert star_subgroup(s3, "delta", 1).order == 3
    assert star_subgroup(s4, StarFamily.DELTA, 2).order == 4
    assert star_subgroup(a5, StarFamily.DELTA, 3) == a5
    assert star_subgroup(s4, StarFamily.GAMMA, 2).order == 12


def test_min_delta_trivial_level(s3, s4, a5):
    assert min_delta_trivial_level(s3, 5) == 2
    assert min_delta_trivial_level(s4, 5) == 3
    assert min_delta_trivial_level(a5, 6) is None
    assert min_delta_trivial_level(catalog.resolve("cyclic(1)"), 3) == 0
    assert min_delta_trivial_level(s4, 2) is None


def test_commutator_order_primes(s3, q8, a5):
    assert commutator_order_primes(s3, 1).primes == {3}
    assert len(commutator_order_primes(q8, 1)) == 0
    assert commutator_order_primes(a5, 2).primes == {2, 3, 5}


def test_coverage(s3, c6, a5):
    assert coprime_commutator_coverage(a5).complete
    abelian = coprime_commutator_coverage(c6)
    assert as_set(abelian.covered) == {"()"}
    assert abelian.uncovered.size == 5
    symmetric = coprime_commutator_coverage(s3)
    assert as_set(symmetric.covered) == {"()", "(1,2,3)", "(1,3,2)"}
    assert symmetric.witness_for(P("(1,2)", 3)) is None


def test_coverage_witnesses_are_first_pairs(s3):
    report = coprime_commutator_coverage(s3)
    for g, (a, b) in report.witnesses.items():
        assert np.gcd(a.order(), b.order()) == 1
        found = catalog.oracle_coprime_witness(s3, g)
        assert found == (a, b)


def test_coverage_on_workers_matches_inline(a4):
    config.parallel.chunk_size = 4
    inline = coprime_commutator_coverage(a4, threads=1)
    pooled = coprime_commutator_coverage(a4, threads=2)
    assert np.array_equal(inline.witness_a, pooled.witness_a)
    assert np.array_equal(inline.witness_b, pooled.witness_b)


def test_lemma_check_on_generated_instances(s4):
    instances = find_lemma_instances(s4, 1)
    assert instances
    for inst in instances:
        assert lemma_iterated_check(s4, inst.normal_subgroup, inst.ys, inst.k)


def test_lemma_check_with_trivial_subgroup(s3):
    trivial = generated_subgroup(s3, [])
    assert lemma_iterated_check(s3, trivial, [P("(1,2,3)", 3)], 1)


def test_lemma_preconditions_are_collected(s4):
    V = normal_closure(s4, [P("(1,2)(3,4)", 4)])
    with pytest.raises(LemmaPreconditionError) as info:
        lemma_iterated_check(s4, V, [], 0)
    assert len(info.value.violations) == 1
    with pytest.raises(LemmaPreconditionError) as info:
        lemma_iterated_check(s4, V, [P("(1,2)", 4)], 1)
    # not a delta*_1-commutator and of even order
    assert len(info.value.violations) == 2


@pytest.mark.parametrize("name", catalog.soluble_entries())
def test_fitting_criterion(name):
    G = catalog.resolve(name)
    assert check_fitting_criterion(G, 5)


@pytest.mark.parametrize("name", catalog.all_small_entries(max_order=1000))
def test_nilpotency_criterion(name):
    assert check_nilpotency_criterion(catalog.resolve(name))


@pytest.mark.parametrize("name", catalog.soluble_entries())
def test_lower_fitting_identity(name):
    assert check_lower_fitting_identity(catalog.resolve(name))


def test_lower_fitting_identity_skips_insoluble(a5):
    result = check_lower_fitting_identity(a5)
    assert result.ok
    assert result.details["skipped"] == "not soluble"


def test_pi_theorem_on_every_catalog_group(record_property):
    triggered = 0
    for name in catalog.all_small_entries(max_order=1000):
        G = catalog.resolve(name)
        for k in (1, 2, 3):
            result = check_pi_theorem(G, k)
            assert result, (name, k, result.reasons)
            triggered += result.details["triggered"]
    record_property("pi_theorem_triggered", triggered)
    assert triggered >= 5


def test_pi_theorem_triggers_for_one_prime(s3):
    result = check_pi_theorem(s3, 1)
    assert result.details["triggered"]
    assert result.details["fitting_height"] == 2


def _lifting_pool():
    pool = []
    for name in catalog.all_small_entries(max_order=200):
        G = catalog.resolve(name)
        kernels = []
        for kind in (SeriesKind.DERIVED, SeriesKind.LOWER_CENTRAL, SeriesKind.LOWER_FITTING):
            for term in series(G, kind).terms:
                if 1 < term.order < G.order and term not in kernels:
                    kernels.append(term)
        pool.extend((name, G, N, k) for N in kernels for k in (1, 2, 3))
    return pool


def test_quotient_lifting(s4):
    for term in series(s4, SeriesKind.LOWER_FITTING).terms[1:-1]:
        for k in (1, 2):
            assert check_quotient_lifting(s4, term, k)


def test_quotient_lifting_on_sampled_catalog_instances():
    pool = _lifting_pool()
    assert len(pool) >= 20
    for name, G, N, k in random.Random(2024).sample(pool, 20):
        result = check_quotient_lifting(G, N, k)
        assert result, (name, N.order, k, result.reasons)


def test_nesting_and_normality(s4, a5):
    assert check_nesting_and_normality(s4, 4)
    assert check_nesting_and_normality(a5, 3)


@pytest.mark.parametrize("name", catalog.all_small_entries(max_order=1000))
def test_nesting_and_normality_on_catalog(name):
    result = check_nesting_and_normality(catalog.resolve(name), 4)
    assert result, result.reasons


@pytest.mark.parametrize("name", ["alternating(5)", "alternating(6)", "psl27",
                                  pytest.param("alternating(7)", marks=pytest.mark.slow)])
def test_simple_groups_are_covered_by_coprime_commutators(name):
    report = coprime_commutator_coverage(catalog.resolve(name))
    assert report.complete
    assert report.uncovered.size == 0


@pytest.mark.parametrize("name", ["alternating(5)", "psl27"])
def test_simple_groups_are_their_own_star_subgroups(name):
    G = catalog.resolve(name)
    for k in range(1, 5):
        assert star_subgroup(G, StarFamily.DELTA, k) == G


def test_star_set_membership(s3):
    S = star_set(s3, "delta", 1)
    assert P("(1,2,3)", 3) in S
    assert P("(1,2)", 3) not in S
    assert Permutation.identity(4) not in S
