"""
Coprimator - Alternating Group Witnesses
Every even permutation x of n >= 5 points is written as x = [y, b] with
|y| odd and |b| dividing 4, both even

Each block (an odd cycle of length >= 5, a pair of even cycles, a pair of
3-cycles) is solved on canonical labels 1..L and relabelled onto the actual
points. Blocks have disjoint supports, so the block solutions multiply. A
lone 3-cycle only admits an odd b-part; its parity is balanced by two fixed
points of x, by switching another block to its odd companion, or by a
bounded search over the 3-cycle joined with one other block.
"""

import itertools
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import factorial, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy.utilities.iterables import partitions

from src.core.config import config
from src.core.errors import (
    EnumerationLimitError,
    WitnessContractError,
    WitnessError,
    WitnessInputError,
    WitnessSearchExhausted,
)
from src.core.permutation import (
    Parity,
    Permutation,
    commutator,
    compose,
    format_cycles,
    parse_cycles,
    relabel,
)
from src.core.group import enumerate_group
from src.utils.parallel import chunk_indices, map_chunks

logger = logging.getLogger(__name__)

Cycle = Tuple[int, ...]
Pair = Tuple[Permutation, Permutation]


class CaseTag(Enum):
    """Construction used for a block"""
    ODD_M_EVEN = "odd_m_even"
    ODD_M_ODD = "odd_m_odd"
    PAIR_I_LT_J_EVEN = "pair_i_lt_j_even"
    PAIR_I_LT_J_ODD = "pair_i_lt_j_odd"
    PAIR_I_EQ_J = "pair_i_eq_j"
    THREE_CYCLE_REPAIR = "three_cycle_repair"
    FALLBACK_SEARCH = "fallback_search"


@dataclass(frozen=True)
class WitnessPart:
    """Cycles of x handled together and the construction used for them"""
    cycles: Tuple[Cycle, ...]
    tag: CaseTag


@dataclass(frozen=True)
class Witness:
    x: Permutation
    y: Permutation
    b: Permutation
    parts: Tuple[WitnessPart, ...] = ()

    @property
    def tags(self) -> Tuple[CaseTag, ...]:
        seen: List[CaseTag] = []
        for part in self.parts:
            if part.tag not in seen:
                seen.append(part.tag)
        return tuple(seen)

    @property
    def case(self) -> str:
        return ",".join(t.value for t in self.tags) or "none"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reasons: Tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# Canonical block constructions (labels 1..L)

def _cycle(points: Sequence[int], degree: int) -> Permutation:
    return Permutation.from_cycles([tuple(points)], degree)


def _involution(pairs: Sequence[Tuple[int, int]], degree: int) -> Permutation:
    return Permutation.from_cycles(pairs, degree)


def _y1(n: int, m: int) -> Permutation:
    """(n, m, n-1, m-1, m-2, ..., 2, 1)"""
    return _cycle([n, m, n - 1] + list(range(m - 1, 0, -1)), n)


def _shifted_reflection(n: int, m: int) -> Permutation:
    """(n-1, n)(1, n-2)(2, n-3)...(m-1, m+1)"""
    return _involution([(n - 1, n)] + [(t, n - 1 - t) for t in range(1, m)], n)


@lru_cache(maxsize=None)
def _odd_cycle_canonical(length: int, odd_companion: bool) -> Optional[Tuple[Permutation, Permutation, CaseTag]]:
    n = length
    m = (n - 1) // 2
    if m % 2 == 0:
        if not odd_companion:
            x = _cycle(range(1, n + 1), n)
            b = _involution([(t, n + 1 - t) for t in range(1, m + 1)], n)
            return x ** m, b, CaseTag.ODD_M_EVEN
        if n < 9:
            return None
        y = compose(Permutation.transposition(1, n - 2, n), _y1(n, m))
        b = compose(Permutation.transposition(m + 1, m + 2, n), _shifted_reflection(n, m))
        return y, b, CaseTag.ODD_M_EVEN
    b = _shifted_reflection(n, m)
    if not odd_companion:
        b = compose(Permutation.transposition(m + 1, m + 2, n), b)
    return _y1(n, m), b, CaseTag.ODD_M_ODD


@lru_cache(maxsize=None)
def _even_pair_canonical(i: int, j: int, odd_companion: bool) -> Optional[Tuple[Permutation, Permutation, CaseTag]]:
    n = 2 * (i + j)
    y2 = _cycle([2 * i] + list(range(n, i + j, -1)), n)
    if i == j:
        a3 = _involution([(t, n + 1 - t) for t in range(1, 2 * i + 1)], n)
        if not odd_companion:
            return y2, a3, CaseTag.PAIR_I_EQ_J
        if i < 2:
            return None
        return y2, compose(Permutation.transposition(1, 2, n), a3), CaseTag.PAIR_I_EQ_J

    a2 = Permutation.from_cycles(
        [(2 * j + 1, 2 * i, i + j + 1, i + j)]
        + [(t, n + 1 - t) for t in range(1, i + j + 1) if t not in (2 * i, i + j)],
        n,
    )
    if (i + j) % 2:
        y3 = compose(Permutation.transposition(1, n, n), y2)
        if not odd_companion:
            return y3, a2, CaseTag.PAIR_I_LT_J_ODD
        free = [t for t in range(2, i + j) if t != 2 * i]
        if len(free) < 2:
            return None
        return y3, compose(Permutation.transposition(free[0], free[1], n), a2), CaseTag.PAIR_I_LT_J_ODD

    if odd_companion:
        return y2, a2, CaseTag.PAIR_I_LT_J_EVEN
    # b_0 on two points below i+j+1 that y_2 fixes
    free = [t for t in range(1, i + j + 1) if t not in (2 * i, i + j)]
    b0 = Permutation.transposition(free[0], free[1], n)
    return y2, compose(b0, a2), CaseTag.PAIR_I_LT_J_EVEN


def _relabel_pair(pair: Pair, points: Sequence[int], degree: int) -> Pair:
    mapping = {k: p for k, p in enumerate(points, start=1)}
    return relabel(pair[0], mapping, degree), relabel(pair[1], mapping, degree)


def _degree_for(points: Sequence[int], degree: Optional[int]) -> int:
    return degree if degree is not None else max(points)


def witness_odd_cycle(cycle: Sequence[int], degree: Optional[int] = None) -> Pair:
    """(y, b) with [y, b] = cycle for an odd cycle of length at least 5"""
    length = len(cycle)
    if length % 2 == 0 or length < 5:
        raise WitnessContractError(f"odd cycle construction needs odd length >= 5, got {length}")
    y, b, _ = _odd_cycle_canonical(length, False)
    return _relabel_pair((y, b), cycle, _degree_for(cycle, degree))


def witness_even_pair(c1: Sequence[int], c2: Sequence[int], degree: Optional[int] = None) -> Pair:
    """(y, b) with [y, b] = c1 * c2 for two disjoint even cycles"""
    if len(c1) % 2 or len(c2) % 2 or not c1 or not c2:
        raise WitnessContractError(f"even pair construction needs two even cycles, got {len(c1)} and {len(c2)}")
    if len(c1) > len(c2):
        c1, c2 = c2, c1
    y, b, _ = _even_pair_canonical(len(c1) // 2, len(c2) // 2, False)
    points = list(c1) + list(c2)
    return _relabel_pair((y, b), points, _degree_for(points, degree))


# Blocks

@dataclass
class _Block:
    cycles: Tuple[Cycle, ...]
    tag: CaseTag
    y: Permutation
    b: Permutation
    companion: Optional[Pair] = None  # same commutator, odd b

    @property
    def points(self) -> List[int]:
        return [p for c in self.cycles for p in c]


def _odd_cycle_block(cycle: Cycle, n: int) -> _Block:
    y, b, tag = _odd_cycle_canonical(len(cycle), False)
    block = _Block((cycle,), tag, *_relabel_pair((y, b), cycle, n))
    odd = _odd_cycle_canonical(len(cycle), True)
    if odd is not None:
        block.companion = _relabel_pair(odd[:2], cycle, n)
    return block


def _even_pair_block(c1: Cycle, c2: Cycle, n: int) -> _Block:
    if len(c1) > len(c2):
        c1, c2 = c2, c1
    i, j = len(c1) // 2, len(c2) // 2
    points = list(c1) + list(c2)
    y, b, tag = _even_pair_canonical(i, j, False)
    block = _Block((c1, c2), tag, *_relabel_pair((y, b), points, n))
    odd = _even_pair_canonical(i, j, True)
    if odd is not None:
        block.companion = _relabel_pair(odd[:2], points, n)
    return block


def _three_cycle_pair_block(c: Cycle, d: Cycle, n: int) -> _Block:
    y = Permutation.from_cycles([c, d], n)
    b = _involution([(c[1], c[2]), (d[1], d[2])], n)
    # swapping the cycles while inverting them: three transpositions
    odd_b = _involution([(c[0], d[0]), (c[1], d[2]), (c[2], d[1])], n)
    return _Block((c, d), CaseTag.THREE_CYCLE_REPAIR, y, b, (y, odd_b))


def _plan_blocks(x: Permutation) -> Tuple[List[_Block], Optional[Cycle]]:
    n = x.degree
    cycles = list(x.cycles.cycles)
    even = sorted((c for c in cycles if len(c) % 2 == 0), key=lambda c: (-len(c), c[0]))
    threes = [c for c in cycles if len(c) == 3]
    odd = [c for c in cycles if len(c) % 2 == 1 and len(c) >= 5]

    blocks: List[_Block] = []
    # longest even cycle with the shortest
    while even:
        longest, shortest = even.pop(0), even.pop()
        blocks.append(_even_pair_block(longest, shortest, n))
    for c in odd:
        blocks.append(_odd_cycle_block(c, n))
    for k in range(0, len(threes) - 1, 2):
        blocks.append(_three_cycle_pair_block(threes[k], threes[k + 1], n))
    lone = threes[-1] if len(threes) % 2 else None
    return blocks, lone


def _merge(perms: Sequence[Permutation], n: int) -> Permutation:
    images = list(range(1, n + 1))
    for p in perms:
        for t in p.support:
            images[t - 1] = p(t)
    return Permutation(images)


def _block_x(cycles: Sequence[Cycle], n: int) -> Permutation:
    return Permutation.from_cycles(cycles, n)


# Bounded fallback search

def _reflection(cycle: Cycle, s: int) -> List[Tuple[int, int]]:
    """Transpositions of c_t -> c_{s-t}"""
    length = len(cycle)
    pairs = []
    for t in range(length):
        u = (s - t) % length
        if t < u:
            pairs.append((cycle[t], cycle[u]))
    return pairs


def _conjugators(b_pairs: List[Tuple[int, int]], b_fixed: List[int],
                 u_pairs: List[Tuple[int, int]], u_fixed: List[int], degree: int) -> Iterator[Permutation]:
    """Every y with y^-1 b y = u: y carries b's transpositions and fixed points onto u's"""
    for order in itertools.permutations(u_pairs):
        for flips in itertools.product((False, True), repeat=len(b_pairs)):
            images = list(range(1, degree + 1))
            for (s, t), (p, q), flip in zip(b_pairs, order, flips):
                images[s - 1], images[t - 1] = (q, p) if flip else (p, q)
            for fixed_images in itertools.permutations(u_fixed):
                for s, p in zip(b_fixed, fixed_images):
                    images[s - 1] = p
                yield Permutation(images)


def _involution_pair_search(x: Permutation, budget: int) -> Optional[Pair]:
    """
    Look for b = r_{s+1} (a product of cycle reflections) with u = x * b = r_s
    and y of odd order conjugating b onto u. Then [y, b] = x. An odd b is
    fixed up by a transposition of two points fixed by y that b moves on
    different orbits.
    """
    n = x.degree
    cycles = list(x.cycles.cycles)
    points = list(range(1, n + 1))
    tried = 0
    for shifts in itertools.product(*(range(len(c)) for c in cycles)):
        u_pairs = [p for c, s in zip(cycles, shifts) for p in _reflection(c, s)]
        b_pairs = [p for c, s in zip(cycles, shifts) for p in _reflection(c, s + 1)]
        if len(u_pairs) != len(b_pairs):
            continue
        u_moved = {p for pair in u_pairs for p in pair}
        b_moved = {p for pair in b_pairs for p in pair}
        u_fixed = [p for p in points if p not in u_moved]
        b_fixed = [p for p in points if p not in b_moved]
        b = _involution(b_pairs, n)
        for y in _conjugators(b_pairs, b_fixed, u_pairs, u_fixed, n):
            tried += 1
            if tried > budget:
                return None
            if y.order() % 2 == 0:
                continue
            if b.is_even():
                return y, b
            partner = {s: t for pair in b_pairs for s, t in (pair, pair[::-1])}
            still = sorted(p for p in b_moved if y(p) == p)
            for p1, p2 in itertools.combinations(still, 2):
                if partner[p1] != p2:
                    return y, compose(Permutation.transposition(p1, p2, n), b)
    return None


@lru_cache(maxsize=None)
def _fallback_canonical(shape: Tuple[int, ...], spare: bool, budget: int) -> Optional[Pair]:
    degree = sum(shape) + (1 if spare else 0)
    cycles, start = [], 1
    for length in shape:
        cycles.append(tuple(range(start, start + length)))
        start += length
    x = Permutation.from_cycles(cycles, degree)
    found = _involution_pair_search(x, budget)
    logger.debug("fallback search for shape %s (spare=%s): %s", shape, spare,
                 "found" if found else "nothing")
    return found


def _fallback_block(lone: Cycle, partner: _Block, fixed: List[int], n: int) -> Optional[_Block]:
    shape = (3,) + tuple(len(c) for c in partner.cycles)
    budget = config.witness.fallback_budget
    points = list(lone) + partner.points
    options = [[]] + ([fixed[:1]] if fixed else [])
    for spare in options:
        found = _fallback_canonical(shape, bool(spare), budget)
        if found is not None:
            y, b = _relabel_pair(found, points + list(spare), n)
            return _Block((lone,) + partner.cycles, CaseTag.FALLBACK_SEARCH, y, b)
    return None


# Assembly

def _checked_companion(block: _Block, n: int) -> Optional[Pair]:
    if block.companion is None:
        return None
    y, b = block.companion
    if b.is_even() or commutator(y, b) != _block_x(block.cycles, n):
        return None
    return block.companion


def _repair_lone(blocks: List[_Block], lone: Cycle, x: Permutation) -> List[_Block]:
    n = x.degree
    p, q, r = lone
    fixed = sorted(set(range(1, n + 1)) - x.support)
    y = _cycle(lone, n)

    if len(fixed) >= 2:
        b = _involution([(q, r), (fixed[0], fixed[1])], n)
        return blocks + [_Block((lone,), CaseTag.THREE_CYCLE_REPAIR, y, b)]

    lone_block = _Block((lone,), CaseTag.THREE_CYCLE_REPAIR, y, Permutation.transposition(q, r, n))
    for k, block in enumerate(blocks):
        companion = _checked_companion(block, n)
        if companion is not None:
            flipped = _Block(block.cycles, block.tag, companion[0], companion[1])
            return blocks[:k] + [flipped] + blocks[k + 1:] + [lone_block]

    for k, block in enumerate(blocks):
        joined = _fallback_block(lone, block, fixed, n)
        if joined is not None:
            return blocks[:k] + [joined] + blocks[k + 1:]

    dump = (f"x={format_cycles(x)} lone={lone} blocks="
            + ";".join(f"{b.tag.value}:{b.cycles}" for b in blocks)
            + f" budget={config.witness.fallback_budget}")
    raise WitnessSearchExhausted("no parity repair for a lone 3-cycle", dump)


def witness(x: Permutation, n: Optional[int] = None) -> Witness:
    """Decompose an even permutation as [y, b] with |y| odd and |b| dividing 4"""
    n = x.degree if n is None else n
    if n < 5:
        raise WitnessInputError(f"witnesses need n >= 5, got {n}")
    if x.degree != n:
        raise WitnessInputError(f"permutation has degree {x.degree}, expected {n}")
    if not x.is_even():
        raise WitnessInputError(f"{format_cycles(x)} is odd, not an element of A_{n}")

    if x.is_identity():
        ident = Permutation.identity(n)
        return Witness(x, ident, ident, ())

    blocks, lone = _plan_blocks(x)
    if lone is not None:
        blocks = _repair_lone(blocks, lone, x)

    y = _merge([blk.y for blk in blocks], n)
    b = _merge([blk.b for blk in blocks], n)
    result = Witness(x, y, b, tuple(WitnessPart(blk.cycles, blk.tag) for blk in blocks))

    verdict = verify_witness(result)
    if not verdict:
        dump = f"x={format_cycles(x)} y={format_cycles(y)} b={format_cycles(b)} case={result.case}"
        raise WitnessError("constructed witness failed verification: "
                           + "; ".join(verdict.reasons) + "\n" + dump)
    return result


def verify_witness(w: Witness) -> Verdict:
    """Re-check a witness from its raw permutations"""
    reasons: List[str] = []
    if not (w.x.degree == w.y.degree == w.b.degree):
        return Verdict(False, ("degrees differ",))
    if commutator(w.y, w.b) != w.x:
        reasons.append("commutator mismatch: [y,b] != x")
    oy, ob = w.y.order(), w.b.order()
    if oy % 2 == 0:
        reasons.append(f"order constraint: |y|={oy} is even")
    if ob not in (1, 2, 4):
        reasons.append(f"order constraint: |b|={ob} does not divide 4")
    if gcd(oy, ob) != 1:
        reasons.append(f"orders {oy} and {ob} are not coprime")
    if w.y.parity() is not Parity.EVEN:
        reasons.append("y is odd")
    if w.b.parity() is not Parity.EVEN:
        reasons.append("b is odd")
    return Verdict(not reasons, tuple(reasons))


# Certificates

def format_certificate(w: Witness) -> str:
    return f"x={format_cycles(w.x)} y={format_cycles(w.y)} b={format_cycles(w.b)} case={w.case}"


def parse_certificate(line: str, n: int) -> Witness:
    """Inverse of format_certificate; parts keep only their case tags"""
    fields: Dict[str, str] = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep or key not in ("x", "y", "b", "case"):
            raise WitnessInputError(f"malformed certificate token {token!r}")
        fields[key] = value
    missing = [k for k in ("x", "y", "b", "case") if k not in fields]
    if missing:
        raise WitnessInputError(f"certificate lacks {', '.join(missing)}")
    try:
        tags = () if fields["case"] == "none" else tuple(CaseTag(t) for t in fields["case"].split(","))
    except ValueError as e:
        raise WitnessInputError(f"unknown case tag in {fields['case']!r}") from e
    return Witness(
        x=parse_cycles(fields["x"], n),
        y=parse_cycles(fields["y"], n),
        b=parse_cycles(fields["b"], n),
        parts=tuple(WitnessPart((), t) for t in tags),
    )


# Sweeps

def even_cycle_types(n: int) -> List[Tuple[int, ...]]:
    """Cycle types (lengths >= 2, descending) of the elements of A_n"""
    types = []
    for parts in partitions(n):
        lengths = tuple(sorted((k for k, mult in parts.items() if k > 1 for _ in range(mult)), reverse=True))
        if sum(1 for k in lengths if k % 2 == 0) % 2 == 0:
            types.append(lengths)
    return sorted(set(types), key=lambda t: (len(t), t))


def cycle_type_representative(lengths: Sequence[int], n: int) -> Permutation:
    """Consecutive cycles (1..l_1)(l_1+1..l_1+l_2)..."""
    if sum(lengths) > n:
        raise WitnessInputError(f"cycle type {tuple(lengths)} does not fit into {n} points")
    cycles, start = [], 1
    for length in lengths:
        cycles.append(tuple(range(start, start + length)))
        start += length
    return Permutation.from_cycles(cycles, n)


@dataclass
class SweepReport:
    n: int
    mode: str
    total: int = 0
    counts: Dict[str, int] = field(default_factory=dict)
    failures: List[Tuple[str, str]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def _sweep_chunk(context, rows: np.ndarray):
    n, verify = context
    total = 0
    counts: Counter = Counter()
    failures: List[Tuple[str, str]] = []
    for row in rows:
        x = Permutation(row)
        total += 1
        try:
            w = witness(x, n)
        except WitnessError as e:
            failures.append((format_cycles(x), str(e)))
            continue
        if verify:
            verdict = verify_witness(w)
            if not verdict:
                failures.append((format_cycles(x), "; ".join(verdict.reasons)))
                continue
        counts.update(t.value for t in w.tags)
    return total, counts, failures


def _alternating_rows(n: int) -> np.ndarray:
    """1-based image rows of every element of A_n, bounded by the enumeration cap"""
    cap = config.engine.max_elements
    if factorial(n) // 2 > cap:
        raise EnumerationLimitError(cap)
    long_cycle = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
    gens = [Permutation.from_cycles([(1, 2, 3)], n), Permutation.from_cycles([long_cycle], n)]
    return enumerate_group(gens, n, f"A_{n}", cap).rows + 1


def witness_sweep(n: int, cycle_types_only: bool = False, threads: Optional[int] = None) -> SweepReport:
    """Build and verify witnesses for all of A_n, or one element per cycle type"""
    if n < 5:
        raise WitnessInputError(f"witnesses need n >= 5, got {n}")
    started = time.perf_counter()
    if cycle_types_only:
        rows = np.array([cycle_type_representative(t, n).images for t in even_cycle_types(n)], dtype=np.int16)
        mode = "cycle_types"
    else:
        rows = _alternating_rows(n)
        mode = "exhaustive"

    report = SweepReport(n, mode)
    context = (n, config.witness.verify)
    counts: Counter = Counter()
    for total, part_counts, failures in map_chunks(_sweep_chunk, context, chunk_indices(rows),
                                                   threads, desc=f"A_{n} witnesses"):
        report.total += total
        counts.update(part_counts)
        report.failures.extend(failures)
    report.counts = dict(sorted(counts.items()))
    report.elapsed = time.perf_counter() - started
    logger.info("witness sweep A_%d (%s): %d elements, %d failures in %.1fs",
                n, mode, report.total, len(report.failures), report.elapsed)
    return report
