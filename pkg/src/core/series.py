"""
Coprimator - Series Module
Derived, lower central and Fitting series; nilpotency, solubility and Fitting height
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from src.core.group import FiniteGroup, commutator_subgroup, o_pi_mask, preimage, quotient
from src.utils.primes import prime_divisors

logger = logging.getLogger(__name__)


class SeriesKind(Enum):
    """Kinds of subgroup series"""
    DERIVED = "derived"
    LOWER_CENTRAL = "lower_central"
    LOWER_FITTING = "lower_fitting"
    UPPER_FITTING = "upper_fitting"


@dataclass(frozen=True)
class SeriesReport:
    """
    Chain of subgroups with stabilization metadata

    Descending kinds start at G; upper_fitting ascends from the trivial
    group. reaches_trivial marks that the chain reached its natural end
    (the trivial group, or G itself for upper_fitting). When the chain stalls
    first, stabilized is set and the last two terms are equal.
    """
    kind: SeriesKind
    terms: Tuple[FiniteGroup, ...]
    stabilized: bool
    reaches_trivial: bool

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(t.order for t in self.terms)

    @property
    def length(self) -> Optional[int]:
        """Number of steps to the natural end, None when the chain stalls"""
        return len(self.terms) - 1 if self.reaches_trivial else None

    def summary(self) -> str:
        end = "reaches end" if self.reaches_trivial else "stalls"
        return f"{self.kind.value}: " + " > ".join(str(o) for o in self.orders) + f" ({end})"


@dataclass(frozen=True)
class Classification:
    is_nilpotent: bool
    is_soluble: bool


def _descend(G: FiniteGroup, kind: SeriesKind, step) -> SeriesReport:
    terms: List[FiniteGroup] = [G]
    while True:
        current = terms[-1]
        if current.is_trivial():
            return SeriesReport(kind, tuple(terms), False, True)
        nxt = step(current)
        terms.append(nxt)
        logger.debug("%s series of %s: term %d has order %d",
                     kind.value, G.label, len(terms) - 1, nxt.order)
        if nxt == current:
            return SeriesReport(kind, tuple(terms), True, False)


def gamma_infinity(G: FiniteGroup) -> FiniteGroup:
    """Last term of the lower central series"""
    report = series(G, SeriesKind.LOWER_CENTRAL)
    return report.terms[-1]


def series(G: FiniteGroup, kind: Union[SeriesKind, str]) -> SeriesReport:
    kind = SeriesKind(kind)

    def memoized(factory):
        return G.memoize(("series", kind.value), factory)

    if kind is SeriesKind.DERIVED:
        return memoized(lambda: _descend(G, kind, lambda T: commutator_subgroup(G, T, T)))
    if kind is SeriesKind.LOWER_CENTRAL:
        return memoized(lambda: _descend(G, kind, lambda T: commutator_subgroup(G, T, G)))
    if kind is SeriesKind.LOWER_FITTING:
        return memoized(lambda: _descend(G, kind, gamma_infinity))
    return memoized(lambda: upper_fitting_series(G))


def classify(G: FiniteGroup) -> Classification:
    return Classification(
        is_nilpotent=series(G, SeriesKind.LOWER_CENTRAL).reaches_trivial,
        is_soluble=series(G, SeriesKind.DERIVED).reaches_trivial,
    )


def fitting_height(G: FiniteGroup) -> Optional[int]:
    """Number of nontrivial lower Fitting terms; None if G is not soluble"""
    return series(G, SeriesKind.LOWER_FITTING).length


def derived_length(G: FiniteGroup) -> Optional[int]:
    return series(G, SeriesKind.DERIVED).length


def nilpotency_class(G: FiniteGroup) -> Optional[int]:
    return series(G, SeriesKind.LOWER_CENTRAL).length


def fitting_subgroup_mask(G: FiniteGroup) -> Tuple[np.ndarray, List[int]]:
    gens: List[int] = []
    for p in sorted(prime_divisors(G.order)):
        _, part = o_pi_mask(G, {p})
        gens.extend(part)
    return G.normal_closure_mask(gens)


def fitting_subgroup(G: FiniteGroup) -> FiniteGroup:
    """Product of the O_p(G) over the primes dividing |G|"""
    mask, gens = fitting_subgroup_mask(G)
    return G.subgroup_from_mask(mask, gens, name=f"Fit({G.label})")


def upper_fitting_series(G: FiniteGroup) -> SeriesReport:
    """F_0 = 1, F_{i+1}/F_i = Fit(G/F_i)"""
    kind = SeriesKind.UPPER_FITTING
    current = G.subgroup_from_mask(G.identity_mask(), [], name="1")
    terms: List[FiniteGroup] = [current]
    while current.order < G.order:
        if current.is_trivial():
            mask, gens = fitting_subgroup_mask(G)
            nxt = G.subgroup_from_mask(mask, gens)
        else:
            Q, projection = quotient(G, current)
            nxt = preimage(projection, fitting_subgroup(Q))
        terms.append(nxt)
        logger.debug("upper Fitting series of %s: term %d has order %d",
                     G.label, len(terms) - 1, nxt.order)
        if nxt.order == current.order:
            return SeriesReport(kind, tuple(terms), True, False)
        current = nxt
    return SeriesReport(kind, tuple(terms), False, True)
