"""
Coprimator - Errors
Exception hierarchy shared by the engine, the catalog and the CLI
"""

from typing import Optional, Sequence


class CoprimatorError(Exception):
    """Base class for every error raised by the package"""


class ConfigError(CoprimatorError):
    """Invalid configuration value or environment override"""


class PermutationError(CoprimatorError):
    """Malformed permutation data"""


class DegreeMismatchError(PermutationError):
    """Operands act on different point sets"""

    def __init__(self, left: int, right: int):
        super().__init__(f"incompatible domains: degree {left} vs degree {right}")
        self.left = left
        self.right = right


class CycleParseError(PermutationError):
    """Cycle notation that does not follow the grammar"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GroupError(CoprimatorError):
    """Base class for group engine errors"""


class EnumerationLimitError(GroupError):
    """Closure grew beyond the configured element cap"""

    def __init__(self, cap: int):
        super().__init__(
            f"group enumeration exceeded the cap of {cap} elements "
            f"(raise it with --max-elements or COPRIMATOR_MAX_ELEMENTS)"
        )
        self.cap = cap


class NotInGroupError(GroupError):
    """An element is not a member of the ambient group"""


class NotSubgroupError(GroupError):
    """A subgroup argument is not contained in the ambient group"""


class NotNormalError(GroupError):
    """A subgroup is not normal where normality is required"""


class GroupFileError(CoprimatorError):
    """Group definition or catalog file problem"""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


class CatalogError(CoprimatorError):
    """Unknown catalog entry or parameter out of range"""


class LevelError(CoprimatorError, ValueError):
    """Commutator level outside the range the family defines"""


class WitnessError(CoprimatorError):
    """Base class for witness construction errors"""


class WitnessContractError(WitnessError):
    """Block construction called outside its contract"""


class WitnessInputError(WitnessError):
    """Element cannot be decomposed (n < 5, odd permutation, wrong degree)"""


class WitnessSearchExhausted(WitnessError):
    """Bounded fallback search found nothing; carries a diagnostic dump"""

    def __init__(self, message: str, dump: str):
        super().__init__(f"{message}\n{dump}")
        self.dump = dump


class LemmaPreconditionError(CoprimatorError):
    """Inputs to the iterated commutator check violate its hypotheses"""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)
