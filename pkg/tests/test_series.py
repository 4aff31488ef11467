import pytest

from src.core import catalog
from src.core.series import (
    SeriesKind,
    classify,
    derived_length,
    fitting_height,
    fitting_subgroup,
    gamma_infinity,
    nilpotency_class,
    series,
    upper_fitting_series,
)


def test_derived_series_of_s3(s3):
    report = series(s3, SeriesKind.DERIVED)
    assert report.orders == (6, 3, 1)
    assert report.reaches_trivial
    assert not report.stabilized
    assert report.length == 2


def test_lower_central_series_of_abelian_group():
    report = series(catalog.resolve("cyclic(5)"), "lower_central")
    assert report.orders == (5, 1)


def test_lower_fitting_series_of_s4(s4):
    assert series(s4, SeriesKind.LOWER_FITTING).orders == (24, 12, 4, 1)


def test_series_that_stall(s3, a5):
    central = series(s3, SeriesKind.LOWER_CENTRAL)
    assert central.orders == (6, 3, 3)
    assert central.stabilized
    assert central.length is None
    derived = series(a5, SeriesKind.DERIVED)
    assert derived.orders == (60, 60)
    assert "stalls" in derived.summary()


def test_gamma_infinity(s4, q8, a5):
    assert gamma_infinity(s4).order == 12
    assert gamma_infinity(q8).is_trivial()
    assert gamma_infinity(a5) == a5


def test_classify(q8, s3, a5):
    assert classify(q8).is_nilpotent and classify(q8).is_soluble
    assert not classify(s3).is_nilpotent and classify(s3).is_soluble
    assert not classify(a5).is_nilpotent and not classify(a5).is_soluble


@pytest.mark.parametrize("name, height", [
    ("cyclic(1)", 0),
    ("cyclic(6)", 1),
    ("quaternion8", 1),
    ("dihedral(4)", 1),
    ("symmetric(3)", 2),
    ("alternating(4)", 2),
    ("frobenius20", 2),
    ("sl23", 2),
    ("dihedral(6)", 2),
    ("symmetric(4)", 3),
    ("alternating(5)", None),
    ("psl27", None),
])
def test_fitting_height(name, height):
    assert fitting_height(catalog.resolve(name)) == height


def test_lengths(s4, q8):
    assert derived_length(s4) == 3
    assert nilpotency_class(q8) == 2
    assert nilpotency_class(s4) is None


def test_fitting_subgroup(s4, q8, a5):
    assert fitting_subgroup(s4).order == 4
    assert fitting_subgroup(q8) == q8
    assert fitting_subgroup(a5).is_trivial()
    assert fitting_subgroup(catalog.resolve("sl23")).order == 8


def test_upper_fitting_series(s4, a5):
    report = upper_fitting_series(s4)
    assert report.orders == (1, 4, 12, 24)
    assert report.reaches_trivial
    assert report.length == 3
    stalled = upper_fitting_series(a5)
    assert stalled.orders == (1, 1)
    assert stalled.stabilized


def test_series_are_memoised(s4):
    assert series(s4, SeriesKind.DERIVED) is series(s4, SeriesKind.DERIVED)
