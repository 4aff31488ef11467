import pytest
from hypothesis import given, settings, strategies as st

from tests.strategies import even_perms
from src.core.alternating_witness import (
    CaseTag,
    Witness,
    cycle_type_representative,
    even_cycle_types,
    format_certificate,
    parse_certificate,
    verify_witness,
    witness,
    witness_even_pair,
    witness_odd_cycle,
    witness_sweep,
)
from src.core.config import config
from src.core.errors import EnumerationLimitError, WitnessContractError, WitnessInputError
from src.core.permutation import Permutation, commutator, compose, conjugate, parse_cycles


def P(text, n):
    return parse_cycles(text, n)


def test_odd_cycle_with_even_half():
    y, b = witness_odd_cycle((1, 2, 3, 4, 5))
    assert y == P("(1,3,5,2,4)", 5)
    assert b == P("(1,5)(2,4)", 5)
    assert commutator(y, b) == P("(1,2,3,4,5)", 5)


def test_odd_cycle_with_odd_half():
    y, b = witness_odd_cycle(tuple(range(1, 8)))
    assert y == P("(7,3,6,2,1)", 7)
    assert b == compose(P("(4,5)", 7), P("(6,7)(1,5)(2,4)", 7))
    assert b == P("(1,5,2,4)(6,7)", 7)
    assert b.order() == 4
    assert commutator(y, b) == P("(1,2,3,4,5,6,7)", 7)


@pytest.mark.parametrize("cycle", [(1, 2, 3), (1, 2, 3, 4)])
def test_odd_cycle_contract(cycle):
    with pytest.raises(WitnessContractError):
        witness_odd_cycle(cycle)


def test_even_pair_with_odd_sum():
    y, b = witness_even_pair((1, 2), (3, 4, 5, 6))
    assert y == P("(2,6,1,5,4)", 6)
    assert b == P("(5,2,4,3)(1,6)", 6)
    assert commutator(y, b) == P("(1,2)(3,4,5,6)", 6)


def test_even_pair_with_even_sum_uses_repaired_b():
    y, b = witness_even_pair((1, 2), (3, 4, 5, 6, 7, 8))
    assert y == P("(2,8,7,6,5)", 8)
    assert b == P("(1,6,3,8)(2,5,4,7)", 8)
    assert commutator(y, b) == P("(1,2)(3,4,5,6,7,8)", 8)


def test_even_pair_of_equal_lengths():
    y, b = witness_even_pair((1, 2), (3, 4))
    assert y == P("(2,4,3)", 4)
    assert b == P("(1,4)(2,3)", 4)
    assert commutator(y, b) == P("(1,2)(3,4)", 4)


def test_even_pair_contract():
    with pytest.raises(WitnessContractError):
        witness_even_pair((1, 2, 3), (4, 5))


def test_witness_examples():
    w = witness(Permutation.identity(5))
    assert w.y.is_identity() and w.b.is_identity()
    assert w.case == "none"

    w = witness(P("(1,2,3)", 5))
    assert w.y == P("(1,2,3)", 5)
    assert w.b == P("(2,3)(4,5)", 5)
    assert w.tags == (CaseTag.THREE_CYCLE_REPAIR,)

    w = witness(P("(1,2,3)(4,5,6)", 6))
    assert w.y == P("(1,2,3)(4,5,6)", 6)
    assert w.b == P("(2,3)(5,6)", 6)


def test_witness_of_five_cycle_reports_case():
    w = witness(P("(1,2,3,4,5)", 5))
    assert format_certificate(w) == "x=(1,2,3,4,5) y=(1,3,5,2,4) b=(1,5)(2,4) case=odd_m_even"


@pytest.mark.parametrize("text, n", [
    ("(1,2,3)(4,5,6,7,8)", 8),
    ("(1,2,3)(4,5)(6,7)", 7),
    ("(1,2,3)(4,5,6,7)(8,9)", 9),
    ("(1,2,3)(4,5,6,7,8,9,10)", 10),
    ("(1,2,3)(4,5,6)(7,8,9)", 9),
])
def test_lone_three_cycle_without_spare_points(text, n):
    w = witness(P(text, n))
    assert verify_witness(w)


def test_witness_input_errors():
    with pytest.raises(WitnessInputError):
        witness(P("(1,2,3)", 4))
    with pytest.raises(WitnessInputError):
        witness(P("(1,2)", 5))
    with pytest.raises(WitnessInputError):
        witness(P("(1,2,3)", 6), 5)


def test_verify_rejects_tampering():
    w = witness(P("(1,2,3,4,5,6,7)", 8))
    assert verify_witness(w)
    eight = Permutation.from_cycles([tuple(range(1, 9))], 8)
    tampered = Witness(w.x, w.y, eight)
    verdict = verify_witness(tampered)
    assert not verdict
    assert any("order constraint" in r for r in verdict.reasons)
    wrong_y = Witness(w.x, w.y * w.y, w.b)
    assert any("commutator mismatch" in r for r in verify_witness(wrong_y).reasons)


def test_certificate_parse_and_recheck():
    w = witness(P("(1,2)(3,4)(5,6,7)", 7))
    line = format_certificate(w)
    again = parse_certificate(line, 7)
    assert (again.x, again.y, again.b) == (w.x, w.y, w.b)
    assert again.case == w.case
    assert verify_witness(again)
    with pytest.raises(WitnessInputError):
        parse_certificate("x=(1,2,3) y=()", 5)
    with pytest.raises(WitnessInputError):
        parse_certificate("x=() y=() b=() case=made_up", 5)


@pytest.mark.parametrize("length", [5, 9, 13, 17])
def test_odd_cycle_orders_with_even_half(length):
    w = witness(Permutation.from_cycles([tuple(range(1, length + 1))], length))
    assert w.y.order() == length
    assert w.b.order() == 2


@pytest.mark.parametrize("length", [7, 11, 15])
def test_odd_cycle_orders_with_odd_half(length):
    w = witness(Permutation.from_cycles([tuple(range(1, length + 1))], length))
    assert w.y.order() == (length - 1) // 2 + 2
    assert w.b.order() == 4


@pytest.mark.parametrize("i, j", [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5)])
def test_unequal_even_pair_orders(i, j):
    c1 = tuple(range(1, 2 * i + 1))
    c2 = tuple(range(2 * i + 1, 2 * (i + j) + 1))
    w = witness(Permutation.from_cycles([c1, c2], 2 * (i + j)))
    assert w.y.order() in (i + j + 1, i + j + 2)
    assert w.b.order() == 4


@pytest.mark.parametrize("i", [1, 2, 3])
def test_equal_even_pair_orders(i):
    n = max(4 * i, 5)
    w = witness(Permutation.from_cycles([tuple(range(1, 2 * i + 1)), tuple(range(2 * i + 1, 4 * i + 1))], n))
    assert w.tags == (CaseTag.PAIR_I_EQ_J,)
    assert w.b.order() == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=5, max_value=12).flatmap(lambda n: st.tuples(even_perms(n), even_perms(n))))
def test_relabelling_equivariance(pair):
    x, g = pair
    moved = conjugate(x, g)
    w = witness(moved)
    assert w.x == moved
    assert verify_witness(w)


def test_even_cycle_types():
    assert even_cycle_types(5) == [(), (3,), (5,), (2, 2)]
    assert (3, 3, 2, 2) in even_cycle_types(10)
    assert all(sum(1 for k in t if k % 2 == 0) % 2 == 0 for t in even_cycle_types(12))
    assert cycle_type_representative((3, 2, 2), 7) == P("(1,2,3)(4,5)(6,7)", 7)
    with pytest.raises(WitnessInputError):
        cycle_type_representative((5, 3), 7)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_exhaustive_sweep(n):
    report = witness_sweep(n)
    assert report.ok, report.failures[:3]
    assert report.total == {5: 60, 6: 360, 7: 2520}[n]


@pytest.mark.parametrize("n", range(10, 15))
def test_cycle_type_sweep(n):
    report = witness_sweep(n, cycle_types_only=True)
    assert report.ok, report.failures[:3]
    assert report.total == len(even_cycle_types(n))


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 9])
def test_exhaustive_sweep_large(n):
    report = witness_sweep(n, threads=2)
    assert report.ok, report.failures[:3]
    assert report.total == {8: 20160, 9: 181440}[n]


def test_exhaustive_sweep_respects_the_enumeration_cap():
    with pytest.raises(EnumerationLimitError):
        witness_sweep(12)
    config.engine.max_elements = 100
    with pytest.raises(EnumerationLimitError):
        witness_sweep(6)
    assert witness_sweep(12, cycle_types_only=True).ok
