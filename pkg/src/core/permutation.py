"""
Coprimator - Permutation Module
Exact arithmetic on permutations of {1..n} with cycle notation I/O

Products are executed from left to right: compose(p, q) maps t to q(p(t)).
Many libraries use the opposite convention, so keep this in mind when
comparing against other tools.
"""

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from math import lcm
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import CycleParseError, DegreeMismatchError, PermutationError

DIGITS = "0123456789"


class Parity(Enum):
    """Parity of a permutation"""
    EVEN = "even"
    ODD = "odd"

    def __xor__(self, other: "Parity") -> "Parity":
        return Parity.EVEN if self is other else Parity.ODD


@dataclass(frozen=True)
class CycleDecomposition:
    """Canonical disjoint cycle form (smallest point first, cycles sorted)"""
    degree: int
    cycles: Tuple[Tuple[int, ...], ...]

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(p for cycle in self.cycles for p in cycle)

    @property
    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths in descending order (fixed points excluded)"""
        return tuple(sorted((len(c) for c in self.cycles), reverse=True))

    def to_permutation(self) -> "Permutation":
        return Permutation.from_cycles(self.cycles, self.degree)

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter(self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def __str__(self) -> str:
        if not self.cycles:
            return "()"
        return "".join("(" + ",".join(str(p) for p in c) + ")" for c in self.cycles)


@total_ordering
class Permutation:
    """
    Immutable bijection of {1..n}

    images[t - 1] is the image of point t. Equality, hashing and ordering
    use the image sequence, which is the single source of truth; cycles are
    derived on demand.
    """

    __slots__ = ("_images", "_cycles")

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(v) for v in images)
        n = len(imgs)
        if n < 1:
            raise PermutationError("degree must be a positive integer")
        if sorted(imgs) != list(range(1, n + 1)):
            raise PermutationError(f"images {imgs} are not a bijection of 1..{n}")
        self._images = imgs
        self._cycles: Optional[CycleDecomposition] = None

    # Construction

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from disjoint cycles; points not listed are fixed"""
        images = list(range(1, degree + 1))
        seen = set()
        for cycle in cycles:
            for p in cycle:
                if not 1 <= p <= degree:
                    raise PermutationError(f"point {p} outside 1..{degree}")
                if p in seen:
                    raise PermutationError(f"point {p} appears twice")
                seen.add(p)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def transposition(cls, i: int, j: int, degree: int) -> "Permutation":
        return cls.from_cycles([(i, j)], degree)

    @classmethod
    def from_array(cls, row: Sequence[int]) -> "Permutation":
        """Build from a 0-based image row (numpy engine representation)"""
        return cls([int(v) + 1 for v in row])

    def to_array(self) -> np.ndarray:
        """0-based image row"""
        return np.asarray(self._images, dtype=np.int16) - 1

    # Views

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def images(self) -> Tuple[int, ...]:
        return self._images

    def __call__(self, point: int) -> int:
        return self._images[point - 1]

    @property
    def cycles(self) -> CycleDecomposition:
        if self._cycles is None:
            self._cycles = _decompose(self._images)
        return self._cycles

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(t for t, v in enumerate(self._images, start=1) if t != v)

    def is_identity(self) -> bool:
        return all(t == v for t, v in enumerate(self._images, start=1))

    # Arithmetic

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __pow__(self, m: int) -> "Permutation":
        return power(self, m)

    def order(self) -> int:
        return order(self)

    def parity(self) -> Parity:
        return parity(self)

    def is_even(self) -> bool:
        return parity(self) is Parity.EVEN

    # Protocol

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __lt__(self, other: "Permutation") -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return (len(self._images), self._images) < (len(other._images), other._images)

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)

    def __getstate__(self):
        return self._images

    def __setstate__(self, state):
        self._images = state
        self._cycles = None


def _decompose(images: Tuple[int, ...]) -> CycleDecomposition:
    n = len(images)
    seen = [False] * (n + 1)
    cycles: List[Tuple[int, ...]] = []
    for start in range(1, n + 1):
        if seen[start] or images[start - 1] == start:
            continue
        cycle = []
        t = start
        while not seen[t]:
            seen[t] = True
            cycle.append(t)
            t = images[t - 1]
        # start is the smallest unseen point, so the cycle is already min-first
        cycles.append(tuple(cycle))
    return CycleDecomposition(degree=n, cycles=tuple(cycles))


def _check_degrees(p: Permutation, q: Permutation):
    if p.degree != q.degree:
        raise DegreeMismatchError(p.degree, q.degree)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: the result maps t to q(p(t))"""
    _check_degrees(p, q)
    qi = q.images
    return Permutation([qi[v - 1] for v in p.images])


def inverse(p: Permutation) -> Permutation:
    result = [0] * p.degree
    for t, v in enumerate(p.images, start=1):
        result[v - 1] = t
    return Permutation(result)


def commutator(p: Permutation, q: Permutation) -> Permutation:
    """[p, q] = p^-1 q^-1 p q"""
    _check_degrees(p, q)
    return compose(compose(inverse(p), inverse(q)), compose(p, q))


def left_normed_commutator(x: Permutation, ys: Sequence[Permutation]) -> Permutation:
    """[x, y_1, ..., y_k] = [[x, y_1, ..., y_{k-1}], y_k]"""
    result = x
    for y in ys:
        result = commutator(result, y)
    return result


def power(p: Permutation, m: int) -> Permutation:
    if m < 0:
        return power(inverse(p), -m)
    if m <= 3:
        result = Permutation.identity(p.degree)
        for _ in range(m):
            result = compose(result, p)
        return result
    # repeated squaring
    result = Permutation.identity(p.degree)
    base = p
    while m:
        if m & 1:
            result = compose(result, base)
        base = compose(base, base)
        m >>= 1
    return result


def order(p: Permutation) -> int:
    return lcm(1, *(len(c) for c in p.cycles))


def parity(p: Permutation) -> Parity:
    transpositions = sum(len(c) - 1 for c in p.cycles)
    return Parity.EVEN if transpositions % 2 == 0 else Parity.ODD


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    return p.cycles


def cycle_type(p: Permutation) -> Tuple[int, ...]:
    return p.cycles.cycle_type


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """p^g = g^-1 p g; cycles of p with every point t replaced by g(t)"""
    _check_degrees(p, g)
    return compose(compose(inverse(g), p), g)


def relabel(p: Permutation, mapping: Mapping[int, int], degree: int) -> Permutation:
    """Push the cycles of p through a point map into a permutation of the given degree"""
    return Permutation.from_cycles(
        [tuple(mapping[t] for t in cycle) for cycle in p.cycles], degree)


def extend(p: Permutation, degree: int) -> Permutation:
    """Embed p into a larger degree, fixing the new points"""
    if degree < p.degree:
        raise PermutationError(f"cannot shrink degree {p.degree} to {degree}")
    return Permutation(list(p.images) + list(range(p.degree + 1, degree + 1)))


# Cycle notation

def format_cycles(p: Permutation) -> str:
    """Canonical cycle notation without whitespace; identity is "()" """
    return str(p.cycles)


def parse_cycles(text: str, degree: int) -> Permutation:
    """
    Parse cycle notation

    expression := "id" | "()" | cycle+
    cycle      := "(" int ("," int)+ ")"

    Whitespace is ignored and points are 1-based.
    """
    if degree < 1:
        raise PermutationError("degree must be a positive integer")
    stripped = "".join(text.split())
    if stripped in ("id", "()"):
        return Permutation.identity(degree)
    if not stripped:
        raise CycleParseError("empty permutation text", 0)

    cycles: List[Tuple[int, ...]] = []
    seen: Dict[int, int] = {}
    pos = 0
    n = len(text)

    def skip_ws(i: int) -> int:
        while i < n and text[i].isspace():
            i += 1
        return i

    pos = skip_ws(pos)
    while pos < n:
        if text[pos] != "(":
            raise CycleParseError(f"expected '(' but found {text[pos]!r}", pos)
        pos = skip_ws(pos + 1)
        cycle: List[int] = []
        while True:
            start = pos
            while pos < n and text[pos] in DIGITS:
                pos += 1
            if start == pos:
                found = repr(text[pos]) if pos < n else "end of text"
                raise CycleParseError(f"expected a point but found {found}", pos)
            point = int(text[start:pos])
            if not 1 <= point <= degree:
                raise CycleParseError(f"point {point} out of range 1..{degree}", start)
            if point in seen:
                raise CycleParseError(f"repeated point {point}", start)
            seen[point] = start
            cycle.append(point)
            pos = skip_ws(pos)
            if pos >= n:
                raise CycleParseError("unterminated cycle", pos)
            if text[pos] == ",":
                pos = skip_ws(pos + 1)
                continue
            if text[pos] == ")":
                break
            raise CycleParseError(f"expected ',' or ')' but found {text[pos]!r}", pos)
        if len(cycle) < 2:
            raise CycleParseError("a cycle needs at least two points", pos)
        cycles.append(tuple(cycle))
        pos = skip_ws(pos + 1)
    return Permutation.from_cycles(cycles, degree)
