"""
Coprimator - Group Engine
Exhaustive enumeration of permutation groups, subgroups, normal closures and quotients

Elements of a group are stored as an (order x degree) int16 array of 0-based
images, sorted lexicographically, so element indices are dense and
deterministic. Index 0 is always the identity. Subsets of a group are numpy
boolean masks over those indices.
"""

import hashlib
import logging
import threading
from dataclasses import dataclass
from math import lcm
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.config import config
from src.core.errors import (
    DegreeMismatchError,
    EnumerationLimitError,
    GroupError,
    NotInGroupError,
    NotNormalError,
    NotSubgroupError,
)
from src.core.permutation import Permutation
from src.utils.primes import all_prime, is_pi_number, prime_divisors

logger = logging.getLogger(__name__)

# n ** n must fit into int64
RADIX_KEY_LIMIT = 15


def _use_radix_keys(degree: int) -> bool:
    return degree <= min(config.engine.radix_key_max_degree, RADIX_KEY_LIMIT)


def _radix_keys(rows: np.ndarray) -> np.ndarray:
    """Mixed radix keys (most significant digit first); key order equals row order"""
    n = rows.shape[1]
    weights = np.int64(n) ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return rows.astype(np.int64) @ weights


def _sort_rows(rows: np.ndarray) -> np.ndarray:
    if _use_radix_keys(rows.shape[1]):
        return rows[np.argsort(_radix_keys(rows), kind="stable")]
    return rows[np.lexsort(rows.T[::-1])]


class _RowIndex:
    """Maps image rows to element indices of a sorted row table"""

    def __init__(self, rows: np.ndarray):
        self._keyed = _use_radix_keys(rows.shape[1])
        if self._keyed:
            self._keys = _radix_keys(rows)
        else:
            self._lookup = {row.tobytes(): i for i, row in enumerate(rows)}

    def find(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given rows, -1 where a row is not an element"""
        rows = np.ascontiguousarray(rows, dtype=np.int16)
        if rows.ndim == 1:
            rows = rows[None, :]
        if self._keyed:
            keys = _radix_keys(rows)
            pos = np.searchsorted(self._keys, keys)
            clipped = np.minimum(pos, len(self._keys) - 1)
            hit = self._keys[clipped] == keys
            return np.where(hit, clipped, -1)
        return np.fromiter((self._lookup.get(r.tobytes(), -1) for r in rows),
                           dtype=np.int64, count=len(rows))


class FiniteGroup:
    """
    Fully enumerated permutation group

    Immutable after construction. Derived tables (element orders, inverses,
    conjugacy classes) are computed lazily under a lock and cached.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        rows: np.ndarray,
        name: Optional[str] = None
    ):
        self.degree = degree
        self.generators: Tuple[Permutation, ...] = tuple(generators)
        self.name = name
        self._rows = np.ascontiguousarray(rows, dtype=np.int16)
        self._rows.setflags(write=False)
        self._lock = threading.RLock()
        self._reset_caches()

    def _reset_caches(self):
        self._index: Optional[_RowIndex] = None
        self._orders: Optional[np.ndarray] = None
        self._inverses: Optional[np.ndarray] = None
        self._inverse_rows: Optional[np.ndarray] = None
        self._class_labels: Optional[np.ndarray] = None
        self._generator_indices: Optional[np.ndarray] = None
        self._conjugation: Dict[int, np.ndarray] = {}
        self._digest: Optional[str] = None
        self._memo: Dict[tuple, object] = {}

    # Basic views

    @property
    def order(self) -> int:
        return int(self._rows.shape[0])

    def __len__(self) -> int:
        return self.order

    @property
    def rows(self) -> np.ndarray:
        """Read-only (order x degree) table of 0-based images"""
        return self._rows

    @property
    def label(self) -> str:
        return self.name or f"<group of order {self.order} on {self.degree} points>"

    def element(self, i: int) -> Permutation:
        return Permutation.from_array(self._rows[i])

    def __iter__(self) -> Iterator[Permutation]:
        for i in range(self.order):
            yield self.element(i)

    def is_trivial(self) -> bool:
        return self.order == 1

    def _row_index(self) -> _RowIndex:
        if self._index is None:
            with self._lock:
                if self._index is None:
                    self._index = _RowIndex(self._rows)
        return self._index

    def indices_of(self, rows: np.ndarray) -> np.ndarray:
        """Vectorised lookup; -1 marks rows outside the group"""
        return self._row_index().find(rows)

    def index(self, p: Permutation) -> int:
        if p.degree != self.degree:
            raise DegreeMismatchError(p.degree, self.degree)
        i = int(self.indices_of(p.to_array())[0])
        if i < 0:
            raise NotInGroupError(f"{p} is not an element of {self.label}")
        return i

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return int(self.indices_of(p.to_array())[0]) >= 0

    def __contains__(self, p: object) -> bool:
        return isinstance(p, Permutation) and self.contains(p)

    def mask_of(self, subset: "FiniteGroup") -> np.ndarray:
        """Boolean mask of this group's elements lying in subset"""
        if subset.degree != self.degree:
            raise DegreeMismatchError(subset.degree, self.degree)
        idx = self.indices_of(subset.rows)
        if np.any(idx < 0):
            raise NotSubgroupError(f"{subset.label} is not contained in {self.label}")
        mask = np.zeros(self.order, dtype=bool)
        mask[idx] = True
        return mask

    def full_mask(self) -> np.ndarray:
        return np.ones(self.order, dtype=bool)

    def identity_mask(self) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        return mask

    # Cached tables

    @property
    def generator_indices(self) -> np.ndarray:
        if self._generator_indices is None:
            with self._lock:
                rows = np.array([g.to_array() for g in self.generators], dtype=np.int16)
                if rows.size == 0:
                    self._generator_indices = np.zeros(0, dtype=np.int64)
                else:
                    self._generator_indices = self.indices_of(rows.reshape(-1, self.degree))
        return self._generator_indices

    @property
    def orders(self) -> np.ndarray:
        """Element order of every index"""
        if self._orders is None:
            with self._lock:
                if self._orders is None:
                    self._orders = _element_orders(self._rows)
        return self._orders

    @property
    def inverse_rows(self) -> np.ndarray:
        if self._inverse_rows is None:
            with self._lock:
                if self._inverse_rows is None:
                    self._inverse_rows = np.argsort(self._rows, axis=1).astype(np.int16)
        return self._inverse_rows

    @property
    def inverse_indices(self) -> np.ndarray:
        if self._inverses is None:
            with self._lock:
                if self._inverses is None:
                    self._inverses = self.indices_of(self.inverse_rows)
        return self._inverses

    def conjugation_indices(self, g: int) -> np.ndarray:
        """Index of g^-1 x g for every element x"""
        table = self._conjugation.get(g)
        if table is None:
            g_row = self._rows[g]
            g_inv = self.inverse_rows[g]
            table = self.indices_of(g_row[self._rows[:, g_inv]])
            with self._lock:
                self._conjugation[g] = table
        return table

    def right_multiply_indices(self, xs: np.ndarray, g: int) -> np.ndarray:
        """Indices of x * g for the given element indices"""
        return self.indices_of(self._rows[g][self._rows[xs]])

    def compose_index(self, i: int, j: int) -> int:
        return int(self.indices_of(self._rows[j][self._rows[i]])[0])

    def commutator_indices(self, a: int, bs: np.ndarray) -> np.ndarray:
        """Indices of [a, b] = a^-1 b^-1 a b for every b in bs"""
        a_row = self._rows[a]
        a_inv = self.inverse_rows[a]
        step = self.inverse_rows[bs][:, a_inv]
        step = a_row[step]
        step = np.take_along_axis(self._rows[bs], step.astype(np.int64), axis=1)
        return self.indices_of(step)

    def commutator_indices_by(self, xs: np.ndarray, b: int) -> np.ndarray:
        """Indices of [x, b] = x^-1 x^b for every x in xs"""
        conjugates = self.conjugation_indices(b)[xs]
        step = np.take_along_axis(self._rows[conjugates].astype(np.int64),
                                  self.inverse_rows[xs].astype(np.int64), axis=1)
        return self.indices_of(step)

    @property
    def conjugacy_class_labels(self) -> np.ndarray:
        """Smallest element index of each element's conjugacy class"""
        if self._class_labels is None:
            with self._lock:
                if self._class_labels is None:
                    self._class_labels = self._propagate_class_labels()
        return self._class_labels

    def _propagate_class_labels(self) -> np.ndarray:
        labels = np.arange(self.order)
        tables = [self.conjugation_indices(int(g)) for g in self.generator_indices]
        while True:
            new = labels.copy()
            for table in tables:
                np.minimum(new, new[table], out=new)
            new = new[new]
            if np.array_equal(new, labels):
                return labels
            labels = new

    def class_representatives(self) -> np.ndarray:
        labels = self.conjugacy_class_labels
        return np.flatnonzero(labels == np.arange(self.order))

    def close_under_conjugation(self, mask: np.ndarray) -> np.ndarray:
        """Union of the conjugacy classes meeting mask"""
        labels = self.conjugacy_class_labels
        hit = np.zeros(self.order, dtype=bool)
        hit[labels[mask]] = True
        return hit[labels]

    # Structural predicates

    def is_subgroup_of(self, other: "FiniteGroup") -> bool:
        if self.degree != other.degree or other.order % self.order:
            return False
        return bool(np.all(other.indices_of(self._rows) >= 0))

    def is_normal_in(self, other: "FiniteGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        for g in other.generators:
            g_row = g.to_array()
            g_inv = np.argsort(g_row)
            for h in self.generators:
                conj = g_row[h.to_array()[g_inv]]
                if self.indices_of(conj)[0] < 0:
                    return False
        return True

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(gens[i] * gens[j] == gens[j] * gens[i]
                   for i in range(len(gens)) for j in range(i + 1, len(gens)))

    @property
    def exponent(self) -> int:
        return lcm(1, *(int(o) for o in np.unique(self.orders)))

    # Subgroup construction inside this group

    def _right_products(self, xs: np.ndarray, gens: Sequence[int]) -> np.ndarray:
        return np.concatenate([self.right_multiply_indices(xs, g) for g in gens])

    def _extend_closure(self, mask: np.ndarray, gens: List[int], g: int):
        """Add generator g to the subgroup (mask, gens) in place"""
        gens.append(g)
        products = self.right_multiply_indices(np.flatnonzero(mask), g)
        frontier = np.unique(products[~mask[products]])
        while frontier.size:
            mask[frontier] = True
            products = self._right_products(frontier, gens)
            frontier = np.unique(products[~mask[products]])

    def generated_mask(self, seeds: Iterable[int],
                       start: Optional[Tuple[np.ndarray, List[int]]] = None) -> Tuple[np.ndarray, List[int]]:
        """Subgroup generated by element indices; returns (mask, generator indices)"""
        if start is None:
            mask, gens = self.identity_mask(), []
        else:
            mask, gens = start[0].copy(), list(start[1])
        for s in seeds:
            s = int(s)
            if not mask[s]:
                self._extend_closure(mask, gens, s)
        return mask, gens

    def normal_closure_mask(self, seeds: Iterable[int]) -> Tuple[np.ndarray, List[int]]:
        mask, gens = self.generated_mask(seeds)
        tables = [self.conjugation_indices(int(g)) for g in self.generator_indices]
        while True:
            members = np.flatnonzero(mask)
            outside = np.unique(np.concatenate(
                [t[members] for t in tables] or [np.zeros(0, dtype=np.int64)]))
            outside = outside[~mask[outside]]
            if not outside.size:
                return mask, gens
            mask, gens = self.generated_mask(outside, start=(mask, gens))

    def subgroup_from_mask(
        self,
        mask: np.ndarray,
        generators: Optional[Sequence[int]] = None,
        name: Optional[str] = None
    ) -> "FiniteGroup":
        """Wrap a closed subset of this group as a FiniteGroup of its own"""
        count = int(mask.sum())
        if count == 0 or self.order % count:
            raise GroupError(f"subset of size {count} cannot be a subgroup of {self.label} "
                             f"(order {self.order})")
        if generators is None:
            closed, generators = self.generated_mask(np.flatnonzero(mask))
            if not np.array_equal(closed, mask):
                raise GroupError("subset is not closed under multiplication")
        gens = [self.element(int(i)) for i in generators]
        return FiniteGroup(self.degree, gens, self._rows[mask], name)

    def memoize(self, key: tuple, factory: Callable[[], object]):
        """Per-group memo table: concurrent readers, one writer per key"""
        value = self._memo.get(key)
        if value is None:
            with self._lock:
                value = self._memo.get(key)
                if value is None:
                    value = factory()
                    self._memo[key] = value
        return value

    # Protocol

    @property
    def digest(self) -> str:
        if self._digest is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(str(self.degree).encode())
            h.update(self._rows.tobytes())
            self._digest = h.hexdigest()
        return self._digest

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return (self.degree == other.degree and self.order == other.order
                and np.array_equal(self._rows, other._rows))

    def __hash__(self) -> int:
        return hash((self.degree, self.order, self.digest))

    def __repr__(self) -> str:
        return f"FiniteGroup(name={self.name!r}, degree={self.degree}, order={self.order})"

    def __getstate__(self):
        return {"degree": self.degree, "generators": self.generators,
                "rows": np.array(self._rows), "name": self.name}

    def __setstate__(self, state):
        self.__init__(state["degree"], state["generators"], state["rows"], state["name"])


def _element_orders(rows: np.ndarray) -> np.ndarray:
    """Vectorised power loop: order of every row"""
    count, n = rows.shape
    identity = np.arange(n, dtype=rows.dtype)
    orders = np.zeros(count, dtype=np.int64)
    pending = np.arange(count)
    current = np.array(rows, dtype=np.int64)
    k = 1
    while pending.size:
        done = np.all(current == identity, axis=1)
        orders[pending[done]] = k
        pending = pending[~done]
        current = np.take_along_axis(rows[pending].astype(np.int64), current[~done], axis=1)
        k += 1
    return orders


# Enumeration

def _closure_keyed(gen_rows: List[np.ndarray], degree: int, cap: int) -> np.ndarray:
    identity = np.arange(degree, dtype=np.int16)[None, :]
    seen = _radix_keys(identity)
    frontier = identity
    parts = [identity]
    while frontier.shape[0]:
        candidates = np.concatenate([g[frontier] for g in gen_rows])
        keys, first = np.unique(_radix_keys(candidates), return_index=True)
        fresh = ~np.isin(keys, seen, assume_unique=True)
        frontier = candidates[first[fresh]]
        seen = np.union1d(seen, keys[fresh])
        if seen.size > cap:
            raise EnumerationLimitError(cap)
        parts.append(frontier)
    return np.concatenate(parts)


def _closure_hashed(gen_rows: List[np.ndarray], degree: int, cap: int) -> np.ndarray:
    identity = np.arange(degree, dtype=np.int16)[None, :]
    seen = {identity[0].tobytes()}
    frontier = identity
    parts = [identity]
    while frontier.shape[0]:
        candidates = np.concatenate([g[frontier] for g in gen_rows])
        fresh = []
        for row in candidates:
            key = row.tobytes()
            if key not in seen:
                seen.add(key)
                fresh.append(row)
        if len(seen) > cap:
            raise EnumerationLimitError(cap)
        frontier = np.array(fresh, dtype=np.int16).reshape(-1, degree)
        parts.append(frontier)
    return np.concatenate(parts)


def enumerate_group(
    generators: Iterable[Permutation],
    degree: int,
    name: Optional[str] = None,
    max_elements: Optional[int] = None
) -> FiniteGroup:
    """
    Breadth-first closure of the generators

    Raises EnumerationLimitError when the group has more than max_elements
    elements (default: config.engine.max_elements).
    """
    gens = tuple(generators)
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(g.degree, degree)
    cap = max_elements if max_elements is not None else config.engine.max_elements
    gen_rows = [g.to_array() for g in gens if not g.is_identity()]

    if not gen_rows:
        rows = np.arange(degree, dtype=np.int16)[None, :]
    elif _use_radix_keys(degree):
        rows = _closure_keyed(gen_rows, degree, cap)
    else:
        rows = _closure_hashed(gen_rows, degree, cap)

    group = FiniteGroup(degree, gens, _sort_rows(rows), name)
    logger.info("enumerated %s: order %d", group.label, group.order)
    return group


def _seed_indices(G: FiniteGroup, seed: Iterable[Permutation]) -> List[int]:
    return sorted({G.index(p) for p in seed})


def generated_subgroup(G: FiniteGroup, seed: Iterable[Permutation], name: Optional[str] = None) -> FiniteGroup:
    """Smallest subgroup of G containing seed"""
    mask, gens = G.generated_mask(_seed_indices(G, seed))
    return G.subgroup_from_mask(mask, gens, name)


def normal_closure(G: FiniteGroup, seed: Iterable[Permutation], name: Optional[str] = None) -> FiniteGroup:
    """Smallest normal subgroup of G containing seed"""
    mask, gens = G.normal_closure_mask(_seed_indices(G, seed))
    return G.subgroup_from_mask(mask, gens, name)


def commutator_subgroup(G: FiniteGroup, A: FiniteGroup, B: FiniteGroup,
                        name: Optional[str] = None) -> FiniteGroup:
    """[A, B] = <[a, b] : a in A, b in B>"""
    for part in (A, B):
        if not part.is_subgroup_of(G):
            raise NotSubgroupError(f"{part.label} is not a subgroup of {G.label}")

    if A.is_normal_in(G) and B.is_normal_in(G):
        # normal closure of generator commutators suffices for normal A, B
        seeds = [G.index(a) for a in A.generators]
        partners = np.array([G.index(b) for b in B.generators], dtype=np.int64)
        found = [G.commutator_indices(a, partners) for a in seeds if partners.size]
        flat = np.unique(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)
        mask, gens = G.normal_closure_mask(flat)
    else:
        a_idx = np.flatnonzero(G.mask_of(A))
        b_idx = np.flatnonzero(G.mask_of(B))
        hit = np.zeros(G.order, dtype=bool)
        for a in a_idx:
            hit[G.commutator_indices(int(a), b_idx)] = True
        mask, gens = G.generated_mask(np.flatnonzero(hit))
    return G.subgroup_from_mask(mask, gens, name)


# Prime sets and pi-parts

@dataclass(frozen=True)
class PrimeSet:
    """A set of primes (pi)"""
    primes: FrozenSet[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "primes", frozenset(int(p) for p in self.primes))
        if not all_prime(self.primes):
            raise ValueError(f"not all members are prime: {sorted(self.primes)}")

    @classmethod
    def coerce(cls, value: Union["PrimeSet", Iterable[int]]) -> "PrimeSet":
        return value if isinstance(value, PrimeSet) else cls(frozenset(value))

    def admits(self, n: int) -> bool:
        """True if every prime divisor of n lies in this set"""
        return is_pi_number(int(n), self.primes)

    def __contains__(self, p: object) -> bool:
        return p in self.primes

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.primes))

    def __len__(self) -> int:
        return len(self.primes)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self) + "}"


def is_pi_element(x: Permutation, primes: Union[PrimeSet, Iterable[int]]) -> bool:
    return PrimeSet.coerce(primes).admits(x.order())


def is_pi_group(G: FiniteGroup, primes: Union[PrimeSet, Iterable[int]]) -> bool:
    return PrimeSet.coerce(primes).admits(G.order)


def element_orders_primes(G: FiniteGroup) -> PrimeSet:
    found = set()
    for o in np.unique(G.orders):
        found |= prime_divisors(int(o))
    return PrimeSet(frozenset(found))


def _pi_element_mask(G: FiniteGroup, pi: PrimeSet) -> np.ndarray:
    admitted = [o for o in np.unique(G.orders) if pi.admits(int(o))]
    return np.isin(G.orders, admitted)


def o_pi_mask(G: FiniteGroup, primes: Union[PrimeSet, Iterable[int]]) -> Tuple[np.ndarray, List[int]]:
    pi = PrimeSet.coerce(primes)
    pi_elements = _pi_element_mask(G, pi)
    mask, gens = G.identity_mask(), []
    for x in G.class_representatives():
        x = int(x)
        if mask[x] or not pi_elements[x]:
            continue
        closure, _ = G.normal_closure_mask([x])
        if not pi.admits(int(closure.sum())):
            continue
        mask, gens = G.normal_closure_mask(gens + [x])
    if not pi.admits(int(mask.sum())):
        raise GroupError(f"O_pi computation for {pi} produced a non-pi subgroup")
    return mask, gens


def o_pi(G: FiniteGroup, primes: Union[PrimeSet, Iterable[int]]) -> FiniteGroup:
    """Largest normal pi-subgroup of G"""
    pi = PrimeSet.coerce(primes)
    mask, gens = o_pi_mask(G, pi)
    result = G.subgroup_from_mask(mask, gens, name=f"O_{pi}({G.label})")
    if not result.is_normal_in(G):
        raise GroupError(f"O_pi computation for {pi} produced a non-normal subgroup")
    return result


# Quotients

@dataclass(frozen=True, eq=False)
class QuotientMap:
    """
    Projection G -> G/N realised on right cosets

    table[i] is the 0-based coset permutation induced by element i; coset c
    is sent to the coset of rep_c * g.
    """
    source: FiniteGroup
    kernel: FiniteGroup
    target: FiniteGroup
    coset_labels: np.ndarray
    table: np.ndarray
    image_index: np.ndarray

    def __call__(self, p: Permutation) -> Permutation:
        return Permutation.from_array(self.table[self.source.index(p)])

    def image_indices(self, indices: np.ndarray) -> np.ndarray:
        return self.image_index[np.asarray(indices, dtype=np.int64)]

    def image_mask(self, mask: np.ndarray) -> np.ndarray:
        result = np.zeros(self.target.order, dtype=bool)
        result[self.image_index[mask]] = True
        return result

    def preimage_mask(self, target_mask: np.ndarray) -> np.ndarray:
        return target_mask[self.image_index]


def quotient(G: FiniteGroup, N: FiniteGroup) -> Tuple[FiniteGroup, QuotientMap]:
    """G/N as a permutation group on the right cosets of N"""
    if not N.is_normal_in(G):
        raise NotNormalError(f"{N.label} is not a normal subgroup of {G.label}")
    index = G.order // N.order
    if index > np.iinfo(np.int16).max:
        raise GroupError(f"index {index} too large for a coset action")

    labels = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    while True:
        unassigned = np.flatnonzero(labels < 0)
        if not unassigned.size:
            break
        x = int(unassigned[0])
        labels[G.indices_of(G.rows[x][N.rows])] = len(reps)
        reps.append(x)

    table = np.empty((G.order, index), dtype=np.int16)
    for c, r in enumerate(reps):
        table[:, c] = labels[G.indices_of(G.rows[:, G.rows[r]])]

    q_rows = np.unique(table, axis=0)
    gens = [Permutation.from_array(table[int(g)]) for g in G.generator_indices]
    name = f"{G.label}/{N.label}" if G.name and N.name else None
    target = FiniteGroup(index, gens, _sort_rows(q_rows), name)
    projection = QuotientMap(G, N, target, labels, table, target.indices_of(table))
    logger.debug("quotient %s: index %d", target.label, index)
    return target, projection


def preimage(projection: QuotientMap, H: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """Full preimage of a subgroup of G/N"""
    target_mask = projection.target.mask_of(H)
    mask = projection.preimage_mask(target_mask)
    G = projection.source
    seeds = [G.index(k) for k in projection.kernel.generators]
    for h in H.generators:
        j = projection.target.index(h)
        seeds.append(int(np.flatnonzero(projection.image_index == j)[0]))
    closed, gens = G.generated_mask(seeds)
    if not np.array_equal(closed, mask):
        raise GroupError("preimage generators do not generate the full preimage")
    return G.subgroup_from_mask(mask, gens, name)
