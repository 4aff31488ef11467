"""
Coprimator - Catalog
Built-in test groups with their expected properties, plus brute-force
oracles that do not share code paths with the engine's fast routines
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, gcd
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from sympy import isprime

from src.core.errors import CatalogError, GroupFileError
from src.core.group import FiniteGroup, enumerate_group
from src.core.permutation import Permutation, commutator
from src.core.series import SeriesReport, upper_fitting_series
from src.utils.group_file import parse_catalog_text

logger = logging.getLogger(__name__)

DATA_FILE = Path(__file__).resolve().parent.parent / "data" / "catalog.grp"

# name -> supported parameter range (inclusive)
PARAMETRIC: Dict[str, Tuple[int, int]] = {
    "symmetric": (1, 9),
    "alternating": (3, 9),
    "dihedral": (3, 50),
    "cyclic": (1, 60),
}

_NAME_PATTERN = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*(?:\(\s*(\d+)\s*\))?\s*$")


@dataclass(frozen=True)
class ExpectedProperties:
    nilpotent: Optional[bool] = None
    soluble: Optional[bool] = None
    fitting_height: Optional[int] = None
    simple: Optional[bool] = None


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    degree: int
    generators: Tuple[Permutation, ...]
    expected_order: int
    expected: ExpectedProperties
    source: str

    def build(self, max_elements: Optional[int] = None) -> FiniteGroup:
        group = enumerate_group(self.generators, self.degree, self.name, max_elements)
        if group.order != self.expected_order:
            raise CatalogError(f"{self.name} enumerates to order {group.order}, "
                               f"expected {self.expected_order}")
        return group


# Parametric families

def _is_power_of_two(m: int) -> bool:
    return m & (m - 1) == 0


def _symmetric(n: int) -> CatalogEntry:
    gens = []
    if n >= 2:
        gens.append(Permutation.transposition(1, 2, n))
    if n >= 3:
        gens.insert(0, Permutation.from_cycles([tuple(range(1, n + 1))], n))
    heights = {1: 0, 2: 1, 3: 2, 4: 3}
    return CatalogEntry(
        f"symmetric({n})", n, tuple(gens), factorial(n),
        ExpectedProperties(nilpotent=n <= 2, soluble=n <= 4, fitting_height=heights.get(n), simple=n == 2),
        "formula",
    )


def _alternating(n: int) -> CatalogEntry:
    gens = [Permutation.from_cycles([(1, 2, 3)], n)]
    if n >= 4:
        long_cycle = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
        gens.append(Permutation.from_cycles([long_cycle], n))
    heights = {3: 1, 4: 2}
    return CatalogEntry(
        f"alternating({n})", n, tuple(gens), factorial(n) // 2,
        ExpectedProperties(nilpotent=n == 3, soluble=n <= 4, fitting_height=heights.get(n),
                           simple=n == 3 or n >= 5),
        "formula",
    )


def _dihedral(m: int) -> CatalogEntry:
    rotation = Permutation.from_cycles([tuple(range(1, m + 1))], m)
    reflection = Permutation.from_cycles([(t, m + 1 - t) for t in range(1, m // 2 + 1)], m)
    nilpotent = _is_power_of_two(m)
    return CatalogEntry(
        f"dihedral({m})", m, (rotation, reflection), 2 * m,
        ExpectedProperties(nilpotent=nilpotent, soluble=True, fitting_height=1 if nilpotent else 2, simple=False),
        "formula",
    )


def _cyclic(m: int) -> CatalogEntry:
    gens = (Permutation.from_cycles([tuple(range(1, m + 1))], m),) if m >= 2 else ()
    return CatalogEntry(
        f"cyclic({m})", m, gens, m,
        ExpectedProperties(nilpotent=True, soluble=True, fitting_height=1 if m > 1 else 0, simple=isprime(m)),
        "formula",
    )


_BUILDERS = {
    "symmetric": _symmetric,
    "alternating": _alternating,
    "dihedral": _dihedral,
    "cyclic": _cyclic,
}


@lru_cache(maxsize=1)
def _fixed_entries() -> Dict[str, CatalogEntry]:
    try:
        text = DATA_FILE.read_text(encoding="utf-8")
    except OSError as e:
        raise CatalogError(f"cannot read catalog data {DATA_FILE}: {e}") from e
    entries = {}
    for definition in parse_catalog_text(text):
        exp = definition.expectations
        if "expect_order" not in exp:
            raise GroupFileError(f"{definition.name} lacks expect_order", definition.line)
        entries[definition.name] = CatalogEntry(
            definition.name, definition.degree, tuple(definition.generators), exp["expect_order"],
            ExpectedProperties(
                nilpotent=exp.get("expect_nilpotent"),
                soluble=exp.get("expect_soluble"),
                fitting_height=exp.get("expect_fitting_height"),
                simple=exp.get("expect_simple"),
            ),
            DATA_FILE.name,
        )
    return entries


def names() -> List[str]:
    return [f"{family}(n)" for family in PARAMETRIC] + sorted(_fixed_entries())


def entry(name: str, param: Optional[int] = None) -> CatalogEntry:
    if name in _BUILDERS:
        if param is None:
            raise CatalogError(f"{name} needs a parameter, e.g. {name}(5)")
        low, high = PARAMETRIC[name]
        if not low <= param <= high:
            raise CatalogError(f"{name}({param}) is outside the supported range {low}..{high}")
        return _BUILDERS[name](param)
    fixed = _fixed_entries()
    if name not in fixed:
        raise CatalogError(f"unknown catalog group {name!r}; known: {', '.join(names())}")
    if param is not None:
        raise CatalogError(f"{name} takes no parameter")
    return fixed[name]


def parse_name(text: str) -> Tuple[str, Optional[int]]:
    """'alternating(5)' -> ('alternating', 5)"""
    match = _NAME_PATTERN.match(text)
    if not match:
        raise CatalogError(f"cannot read catalog name {text!r}")
    name, param = match.groups()
    return name, int(param) if param is not None else None


@lru_cache(maxsize=64)
def get(name: str, param: Optional[int] = None) -> FiniteGroup:
    """Enumerated catalog group; its order is checked against the entry"""
    group = entry(name, param).build()
    logger.debug("catalog group %s ready (order %d)", group.label, group.order)
    return group


def resolve(text: str) -> FiniteGroup:
    return get(*parse_name(text))


def resolve_entry(text: str) -> CatalogEntry:
    return entry(*parse_name(text))


def soluble_entries() -> List[str]:
    """Soluble groups with known Fitting heights used for the criterion checks"""
    return ["symmetric(3)", "alternating(4)", "symmetric(4)", "dihedral(4)", "quaternion8",
            "frobenius20", "sl23", "klein4", "cyclic(6)", "dihedral(5)", "dihedral(6)"]


def all_small_entries(max_order: int = 1000) -> List[str]:
    candidates = ["cyclic(1)", "cyclic(5)", "cyclic(6)", "klein4", "symmetric(3)", "quaternion8",
                  "dihedral(4)", "dihedral(5)", "dihedral(6)", "dihedral(8)", "alternating(4)",
                  "frobenius20", "sl23", "symmetric(4)", "alternating(5)", "symmetric(5)",
                  "psl27", "psl27_fano_b", "alternating(6)", "symmetric(6)"]
    return [c for c in candidates if resolve_entry(c).expected_order <= max_order]


# Independent oracles

def fitting_height_upper_series(G: FiniteGroup) -> SeriesReport:
    """Ascending Fitting chain F_0 = 1, F_{i+1}/F_i = Fit(G/F_i)"""
    return upper_fitting_series(G)


def oracle_fitting_height_upper(G: FiniteGroup) -> Optional[int]:
    return fitting_height_upper_series(G).length


def oracle_coprime_witness(G: FiniteGroup, g: Permutation) -> Optional[Tuple[Permutation, Permutation]]:
    """First (a, b) in element order with g = [a, b] and coprime orders"""
    if not G.contains(g):
        raise CatalogError(f"{g} is not an element of {G.label}")
    elements = list(G)
    orders = [p.order() for p in elements]
    for a, oa in zip(elements, orders):
        for b, ob in zip(elements, orders):
            if gcd(oa, ob) == 1 and commutator(a, b) == g:
                return a, b
    return None
