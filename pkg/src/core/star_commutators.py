"""
Coprimator - Star Commutators
gamma*_k and delta*_k commutator sets, their subgroups, and instance checks
of the results built on them

A gamma*_1 and delta*_0 commutator is any element. For higher levels:
  delta*_k: [a, b] with a, b powers of delta*_{k-1}-commutators
  gamma*_k: [a, b] with a a power of a gamma*_{k-1}-commutator, b arbitrary
and in both cases gcd(|a|, |b|) = 1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import config
from src.core.errors import GroupError, LemmaPreconditionError, LevelError
from src.core.group import FiniteGroup, PrimeSet, o_pi, quotient
from src.core.permutation import Permutation
from src.core.series import SeriesKind, classify, fitting_height, series
from src.utils.parallel import chunk_indices, map_chunks
from src.utils.primes import prime_divisors

logger = logging.getLogger(__name__)


class StarFamily(Enum):
    GAMMA = "gamma"
    DELTA = "delta"


@dataclass(frozen=True, eq=False)
class ElementSet:
    """Subset of a group's elements, held as a boolean mask over element indices"""
    group: FiniteGroup
    mask: np.ndarray
    label: str = ""
    normal: bool = False

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.size

    def __contains__(self, p: object) -> bool:
        return isinstance(p, Permutation) and self.group.contains(p) and bool(self.mask[self.group.index(p)])

    def elements(self) -> List[Permutation]:
        return [self.group.element(int(i)) for i in self.members]

    def is_trivial(self) -> bool:
        """Only the identity (or nothing)"""
        return not self.mask[1:].any()

    def issubset(self, other: "ElementSet") -> bool:
        return not np.any(self.mask & ~other.mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash((self.group, self.mask.tobytes()))

    def __repr__(self) -> str:
        return f"ElementSet({self.label!r}, size={self.size}, group={self.group.label!r})"


def power_closure(S: ElementSet) -> ElementSet:
    """{s^m : s in S, m >= 0}; empty for empty S"""
    G = S.group
    mask = np.zeros(G.order, dtype=bool)
    members = S.members
    if members.size:
        mask[0] = True
        base = G.rows[members].astype(np.int64)
        current = base.copy()
        while len(current):
            idx = G.indices_of(current)
            mask[idx] = True
            keep = idx != 0
            base, current = base[keep], current[keep]
            current = np.take_along_axis(base, current, axis=1)
    return ElementSet(G, mask, f"powers of {S.label}", S.normal)


def _scan_chunk(context, chunk: np.ndarray) -> np.ndarray:
    G, right = context
    orders = G.orders
    right_orders = orders[right]
    hit = np.zeros(G.order, dtype=bool)
    for a in chunk:
        partners = right[np.gcd(right_orders, orders[a]) == 1]
        hit[G.commutator_indices(int(a), partners)] = True
    return hit


def _coprime_pair_scan(
    G: FiniteGroup,
    left: ElementSet,
    right: ElementSet,
    threads: Optional[int],
    use_class_representatives: Optional[bool]
) -> np.ndarray:
    """Mask of [a, b] over a in left, b in right with coprime orders"""
    use_reps = config.star.use_class_representatives if use_class_representatives is None \
        else use_class_representatives
    use_reps = use_reps and left.normal and right.normal
    outer = left.members
    if use_reps:
        # [a, b]^g = [a^g, b^g]; conjugating back to a class representative loses nothing
        outer = outer[np.isin(outer, G.class_representatives())]
    chunks = chunk_indices(outer)
    hit = np.zeros(G.order, dtype=bool)
    for part in map_chunks(_scan_chunk, (G, right.members), chunks, threads):
        hit |= part
    if use_reps:
        hit = G.close_under_conjugation(hit)
    return hit


def delta_star_set(G: FiniteGroup, k: int, threads: Optional[int] = None,
                   use_class_representatives: Optional[bool] = None) -> ElementSet:
    if k < 0:
        raise LevelError(f"delta* level must be at least 0, got {k}")
    if k == 0:
        return ElementSet(G, G.full_mask(), "delta*_0 set", normal=True)

    def build() -> ElementSet:
        Y = power_closure(delta_star_set(G, k - 1, threads, use_class_representatives))
        mask = _coprime_pair_scan(G, Y, Y, threads, use_class_representatives)
        logger.debug("delta*_%d set of %s: %d elements", k, G.label, int(mask.sum()))
        return ElementSet(G, mask, f"delta*_{k} set", normal=True)

    return G.memoize(("delta_star", k), build)


def gamma_star_set(G: FiniteGroup, k: int, threads: Optional[int] = None,
                   use_class_representatives: Optional[bool] = None) -> ElementSet:
    if k < 1:
        raise LevelError(f"gamma* level must be at least 1, got {k}")
    everything = ElementSet(G, G.full_mask(), "gamma*_1 set", normal=True)
    if k == 1:
        return everything

    def build() -> ElementSet:
        X = power_closure(gamma_star_set(G, k - 1, threads, use_class_representatives))
        mask = _coprime_pair_scan(G, X, everything, threads, use_class_representatives)
        logger.debug("gamma*_%d set of %s: %d elements", k, G.label, int(mask.sum()))
        return ElementSet(G, mask, f"gamma*_{k} set", normal=True)

    return G.memoize(("gamma_star", k), build)


def star_set(G: FiniteGroup, family: Union[StarFamily, str], k: int,
             threads: Optional[int] = None) -> ElementSet:
    family = StarFamily(family)
    if family is StarFamily.DELTA:
        return delta_star_set(G, k, threads)
    return gamma_star_set(G, k, threads)


def star_subgroup(G: FiniteGroup, family: Union[StarFamily, str], k: int,
                  threads: Optional[int] = None) -> FiniteGroup:
    """Subgroup generated by the star set; always normal in G"""
    family = StarFamily(family)

    def build() -> FiniteGroup:
        S = star_set(G, family, k, threads)
        mask, gens = G.generated_mask(S.members)
        H = G.subgroup_from_mask(mask, gens, name=f"{family.value}*_{k}({G.label})")
        if not H.is_normal_in(G):
            raise GroupError(f"{H.label} is not normal in {G.label}")
        return H

    return G.memoize(("star_subgroup", family.value, k), build)


def min_delta_trivial_level(G: FiniteGroup, k_max: int, threads: Optional[int] = None) -> Optional[int]:
    """Smallest k <= k_max with delta*_k(G) = 1, None if there is none"""
    if k_max < 1:
        raise LevelError(f"k_max must be at least 1, got {k_max}")
    previous: Optional[ElementSet] = None
    for k in range(k_max + 1):
        current = delta_star_set(G, k, threads)
        if current.is_trivial():
            return k
        if previous is not None and current == previous:
            logger.debug("delta* sets of %s stabilise at level %d", G.label, k)
            return None
        previous = current
    return None


def commutator_order_primes(G: FiniteGroup, k: int, threads: Optional[int] = None) -> PrimeSet:
    """Primes dividing the order of some delta*_k-commutator"""
    S = delta_star_set(G, k, threads)
    found = set()
    for o in np.unique(G.orders[S.mask]):
        found |= prime_divisors(int(o))
    return PrimeSet(frozenset(found))


# Coverage by coprime commutators

@dataclass(frozen=True, eq=False)
class CoverageReport:
    """
    First coprime pair (a, b) with g = [a, b] for every element g

    witness_a / witness_b hold element indices, -1 where g is uncovered.
    """
    group: FiniteGroup
    covered: ElementSet
    uncovered: ElementSet
    witness_a: np.ndarray
    witness_b: np.ndarray

    @property
    def complete(self) -> bool:
        return self.uncovered.size == 0

    @property
    def witnesses(self) -> Dict[Permutation, Tuple[Permutation, Permutation]]:
        G = self.group
        return {G.element(int(g)): (G.element(int(self.witness_a[g])), G.element(int(self.witness_b[g])))
                for g in self.covered.members}

    def witness_for(self, g: Permutation) -> Optional[Tuple[Permutation, Permutation]]:
        i = self.group.index(g)
        if self.witness_a[i] < 0:
            return None
        return self.group.element(int(self.witness_a[i])), self.group.element(int(self.witness_b[i]))


def _coverage_chunk(G: FiniteGroup, chunk: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    orders = G.orders
    everything = np.arange(G.order)
    wa = np.full(G.order, -1, dtype=np.int64)
    wb = np.full(G.order, -1, dtype=np.int64)
    for a in chunk:
        partners = everything[np.gcd(orders, orders[a]) == 1]
        products = G.commutator_indices(int(a), partners)
        values, first = np.unique(products, return_index=True)
        fresh = wa[values] < 0
        wa[values[fresh]] = a
        wb[values[fresh]] = partners[first[fresh]]
        if np.all(wa >= 0):
            break
    return wa, wb


def coprime_commutator_coverage(G: FiniteGroup, threads: Optional[int] = None) -> CoverageReport:
    """Lexicographically first coprime witness pair for every element, by index"""
    chunks = chunk_indices(np.arange(G.order))
    wa = np.full(G.order, -1, dtype=np.int64)
    wb = np.full(G.order, -1, dtype=np.int64)
    if (threads or config.parallel.threads) <= 1:
        # inline scan stops as soon as every element is covered
        for chunk in chunks:
            ca, cb = _coverage_chunk(G, chunk)
            fresh = (wa < 0) & (ca >= 0)
            wa[fresh], wb[fresh] = ca[fresh], cb[fresh]
            if np.all(wa >= 0):
                break
    else:
        for ca, cb in map_chunks(_coverage_chunk, G, chunks, threads, desc="coverage"):
            fresh = (wa < 0) & (ca >= 0)
            wa[fresh], wb[fresh] = ca[fresh], cb[fresh]
    covered = wa >= 0
    logger.info("coprime commutator coverage of %s: %d of %d elements",
                G.label, int(covered.sum()), G.order)
    return CoverageReport(
        group=G,
        covered=ElementSet(G, covered, "covered"),
        uncovered=ElementSet(G, ~covered, "uncovered"),
        witness_a=wa,
        witness_b=wb,
    )


# Iterated commutators [x, y_1, ..., y_k]

@dataclass(frozen=True)
class LemmaInstance:
    normal_subgroup: FiniteGroup
    ys: Tuple[Permutation, ...]
    k: int


def _normalizes(G: FiniteGroup, N: FiniteGroup, y: int) -> bool:
    if not N.generators:
        return True
    generators = np.array([G.index(g) for g in N.generators], dtype=np.int64)
    conjugates = G.conjugation_indices(y)[generators]
    return bool(np.all(G.mask_of(N)[conjugates]))


def lemma_iterated_check(G: FiniteGroup, N: FiniteGroup, ys: Sequence[Permutation], k: int) -> bool:
    """
    True iff [x, y_1, ..., y_k] is a delta*_{k+1}-commutator for every x in N

    Preconditions: N is a subgroup of G, k >= 1 and len(ys) == k, and every
    y_i is a delta*_k-commutator normalising N with order coprime to |N|.
    Violations are collected and raised together.
    """
    violations: List[str] = []
    if k < 1:
        violations.append(f"k must be at least 1, got {k}")
    if len(ys) != k:
        violations.append(f"expected {k} elements y_i, got {len(ys)}")
    if not N.is_subgroup_of(G):
        violations.append(f"{N.label} is not a subgroup of {G.label}")
    if violations:
        raise LemmaPreconditionError(violations)

    level = delta_star_set(G, k)
    y_idx: List[int] = []
    for i, y in enumerate(ys, start=1):
        if not G.contains(y):
            violations.append(f"y_{i}={y} is not in {G.label}")
            continue
        j = G.index(y)
        if not level.mask[j]:
            violations.append(f"y_{i}={y} is not a delta*_{k}-commutator")
        if not _normalizes(G, N, j):
            violations.append(f"y_{i}={y} does not normalise {N.label}")
        if np.gcd(int(G.orders[j]), N.order) != 1:
            violations.append(f"y_{i}={y} has order {int(G.orders[j])} not coprime to |N|={N.order}")
        y_idx.append(j)
    if violations:
        raise LemmaPreconditionError(violations)

    current = np.flatnonzero(G.mask_of(N))
    for j in y_idx:
        current = G.commutator_indices_by(current, j)
    target = delta_star_set(G, k + 1)
    return bool(np.all(target.mask[current]))


def _candidate_normal_subgroups(G: FiniteGroup) -> List[FiniteGroup]:
    found: List[FiniteGroup] = []
    for kind in (SeriesKind.DERIVED, SeriesKind.LOWER_FITTING):
        for term in series(G, kind).terms:
            if not term.is_trivial() and term not in found:
                found.append(term)
    for x in G.class_representatives()[1:]:
        mask, gens = G.normal_closure_mask([int(x)])
        N = G.subgroup_from_mask(mask, gens)
        if N not in found:
            found.append(N)
    return found


def find_lemma_instances(G: FiniteGroup, k: int, limit: int = 20) -> List[LemmaInstance]:
    """Valid inputs for lemma_iterated_check: N normal in G, ys drawn from delta*_k"""
    level = delta_star_set(G, k)
    instances: List[LemmaInstance] = []
    for N in _candidate_normal_subgroups(G):
        coprime = np.gcd(G.orders, N.order) == 1
        candidates = np.flatnonzero(level.mask & coprime)[1:]
        if not candidates.size:
            continue
        for start in range(candidates.size):
            picks = [int(candidates[(start + i) % candidates.size]) for i in range(k)]
            instances.append(LemmaInstance(N, tuple(G.element(p) for p in picks), k))
            if len(instances) >= limit:
                return instances
    return instances


# Verifiers

@dataclass
class CheckResult:
    """Outcome of one property check on one group"""
    name: str
    ok: bool
    details: Dict[str, object] = field(default_factory=dict)
    reasons: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _conjugation_closed(G: FiniteGroup, S: ElementSet) -> bool:
    members = S.members
    return all(np.all(S.mask[G.conjugation_indices(int(g))[members]]) for g in G.generator_indices)


def check_nilpotency_criterion(G: FiniteGroup, ks: Sequence[int] = (2, 3, 4)) -> CheckResult:
    """gamma*_k(G) = 1 exactly when G is nilpotent"""
    nilpotent = classify(G).is_nilpotent
    result = CheckResult("nilpotency_criterion", True, {"nilpotent": nilpotent})
    for k in ks:
        trivial = star_subgroup(G, StarFamily.GAMMA, k).is_trivial()
        result.details[f"gamma*_{k} order"] = star_subgroup(G, StarFamily.GAMMA, k).order
        if trivial != nilpotent:
            result.ok = False
            result.reasons.append(f"gamma*_{k} trivial={trivial} but nilpotent={nilpotent}")
    return result


def check_fitting_criterion(G: FiniteGroup, k_max: int) -> CheckResult:
    """delta*_k(G) = 1 exactly when G is soluble of Fitting height at most k"""
    h = fitting_height(G)
    level = min_delta_trivial_level(G, k_max)
    result = CheckResult("fitting_criterion", True, {"fitting_height": h, "min_delta_trivial_level": level})
    expected = h if h is not None and h <= k_max else None
    if level != expected:
        result.ok = False
        result.reasons.append(f"min delta-trivial level {level} but expected {expected}")
    return result


def check_lower_fitting_identity(G: FiniteGroup) -> CheckResult:
    """N_i = delta*_{i-1}(G) along the lower Fitting series of a soluble group"""
    report = series(G, SeriesKind.LOWER_FITTING)
    result = CheckResult("lower_fitting_identity", True, {"terms": list(report.orders)})
    if not report.reaches_trivial:
        result.details["skipped"] = "not soluble"
        return result
    for i, term in enumerate(report.terms, start=1):
        star = star_subgroup(G, StarFamily.DELTA, i - 1)
        if star != term:
            result.ok = False
            result.reasons.append(f"N_{i} has order {term.order} but delta*_{i - 1} has order {star.order}")
    return result


def check_pi_theorem(G: FiniteGroup, k: int) -> CheckResult:
    """
    If the delta*_k-commutators are pi-elements for at most two primes, G is
    soluble and delta*_k(G) <= O_pi(G); for one prime also h(G) <= k + 1
    """
    primes = commutator_order_primes(G, k)
    result = CheckResult("pi_theorem", True, {"k": k, "primes": sorted(primes.primes),
                                              "triggered": len(primes) <= 2})
    if len(primes) > 2:
        return result
    if not classify(G).is_soluble:
        result.ok = False
        result.reasons.append(f"delta*_{k} primes {primes} but group is not soluble")
        return result
    star = star_subgroup(G, StarFamily.DELTA, k)
    if not star.is_subgroup_of(o_pi(G, primes)):
        result.ok = False
        result.reasons.append(f"delta*_{k}(G) is not contained in O_{primes}(G)")
    if len(primes) == 1:
        h = fitting_height(G)
        result.details["fitting_height"] = h
        if h is None or h > k + 1:
            result.ok = False
            result.reasons.append(f"Fitting height {h} exceeds {k + 1}")
    return result


def check_quotient_lifting(G: FiniteGroup, N: FiniteGroup, k: int) -> CheckResult:
    """The image of delta*_k(G) in G/N contains the delta*_k set of G/N"""
    Q, projection = quotient(G, N)
    image = projection.image_mask(delta_star_set(G, k).mask)
    target = delta_star_set(Q, k).mask
    missing = int(np.sum(target & ~image))
    result = CheckResult("quotient_lifting", missing == 0,
                         {"k": k, "kernel_order": N.order, "quotient_order": Q.order})
    if missing:
        result.reasons.append(f"{missing} delta*_{k}-commutators of G/N do not lift")
    return result


def check_nesting_and_normality(G: FiniteGroup, k_max: int) -> CheckResult:
    """Star sets shrink with k, contain the identity and are closed under conjugation"""
    result = CheckResult("nesting_and_normality", True, {"k_max": k_max})
    for family, first in ((StarFamily.DELTA, 0), (StarFamily.GAMMA, 1)):
        previous: Optional[ElementSet] = None
        for k in range(first, k_max + 1):
            S = star_set(G, family, k)
            if not S.mask[0]:
                result.ok = False
                result.reasons.append(f"{S.label} lacks the identity")
            if not _conjugation_closed(G, S):
                result.ok = False
                result.reasons.append(f"{S.label} is not closed under conjugation")
            if previous is not None and not S.issubset(previous):
                result.ok = False
                result.reasons.append(f"{S.label} is not contained in {previous.label}")
            previous = S
    return result
