"""
Coprimator - Group Files
Line-oriented group definitions:

    # comment
    name: S4
    degree: 4
    gen: (1,2,3,4)
    gen: (1,2)

Catalog files hold several definitions, each opened by a name line, and may
add expect_order / expect_nilpotent / expect_soluble / expect_fitting_height /
expect_simple assertion lines.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from src.core.errors import GroupFileError, PermutationError
from src.core.group import FiniteGroup, enumerate_group
from src.core.permutation import Permutation, parse_cycles

logger = logging.getLogger(__name__)

GROUP_KEYS = ("degree", "gen", "name")
EXPECT_KEYS = ("expect_order", "expect_nilpotent", "expect_soluble",
               "expect_fitting_height", "expect_simple")


@dataclass
class GroupDefinition:
    degree: int
    generators: List[Permutation]
    name: Optional[str] = None
    expectations: Dict[str, object] = field(default_factory=dict)
    line: int = 1

    def build(self, max_elements: Optional[int] = None) -> FiniteGroup:
        group = enumerate_group(self.generators, self.degree, self.name, max_elements)
        expected = self.expectations.get("expect_order")
        if expected is not None and group.order != expected:
            raise GroupFileError(
                f"{self.name or 'group'} enumerates to order {group.order}, expected {expected}", self.line)
        return group


def _parse_bool(value: str, line: int) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes"):
        return True
    if lowered in ("false", "no"):
        return False
    raise GroupFileError(f"expected true or false, got {value!r}", line)


def _parse_int(value: str, line: int, allow_none: bool = False) -> Optional[int]:
    if allow_none and value.lower() == "none":
        return None
    try:
        return int(value)
    except ValueError:
        raise GroupFileError(f"expected an integer, got {value!r}", line) from None


def _split(text: str) -> List[Tuple[int, str, str]]:
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, sep, value = stripped.partition(":")
        if not sep:
            raise GroupFileError(f"expected 'key: value', got {stripped!r}", number)
        entries.append((number, key.strip(), value.strip()))
    return entries


def _definition(lines: List[Tuple[int, str, str]], allow_expectations: bool) -> GroupDefinition:
    degree: Optional[int] = None
    name: Optional[str] = None
    gen_texts: List[Tuple[int, str]] = []
    expectations: Dict[str, object] = {}
    first = lines[0][0] if lines else 1

    for number, key, value in lines:
        if key == "degree":
            if degree is not None:
                raise GroupFileError("duplicate degree line", number)
            degree = _parse_int(value, number)
            if degree < 1:
                raise GroupFileError(f"degree must be positive, got {degree}", number)
        elif key == "gen":
            gen_texts.append((number, value))
        elif key == "name":
            name = value
        elif allow_expectations and key in EXPECT_KEYS:
            if key == "expect_order":
                expectations[key] = _parse_int(value, number)
            elif key == "expect_fitting_height":
                expectations[key] = _parse_int(value, number, allow_none=True)
            else:
                expectations[key] = _parse_bool(value, number)
        else:
            raise GroupFileError(f"unknown key {key!r}", number)

    if degree is None:
        raise GroupFileError("missing degree line", first)
    if not gen_texts:
        raise GroupFileError("at least one gen line is required", first)

    generators = []
    for number, text in gen_texts:
        try:
            generators.append(parse_cycles(text, degree))
        except PermutationError as e:
            raise GroupFileError(str(e), number) from e
    return GroupDefinition(degree, generators, name, expectations, first)


def parse_group_text(text: str) -> GroupDefinition:
    return _definition(_split(text), allow_expectations=False)


def read_group_file(path: Union[str, Path]) -> GroupDefinition:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise GroupFileError(f"cannot read {path}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise GroupFileError(f"{path} is not UTF-8 text: {e.reason} at byte {e.start}") from e
    return parse_group_text(text)


def parse_catalog_text(text: str) -> List[GroupDefinition]:
    """Split on name lines; every definition must start with one"""
    blocks: List[List[Tuple[int, str, str]]] = []
    for entry in _split(text):
        if entry[1] == "name":
            blocks.append([])
        elif not blocks:
            raise GroupFileError("catalog definitions must start with a name line", entry[0])
        blocks[-1].append(entry)
    definitions = [_definition(block, allow_expectations=True) for block in blocks]
    logger.debug("parsed %d catalog definitions", len(definitions))
    return definitions
