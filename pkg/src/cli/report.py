"""
Coprimator - Reports
One result record per command, rendered either as JSON or as text
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Union

import numpy as np

from src.core.permutation import Permutation
from src.version import __version__


@dataclass
class ReportEnvelope:
    command: List[str]
    input_digest: str
    results: Dict[str, Any]
    timing: Dict[str, float] = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": list(self.command),
            "input_digest": self.input_digest,
            "results": plain(self.results),
            "timing": plain(self.timing),
            "version": self.version,
        }


def digest_inputs(*parts: Union[str, bytes]) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8") if isinstance(part, str) else part)
        h.update(b"\0")
    return h.hexdigest()[:16]


def plain(value: Any) -> Any:
    """JSON-ready copy: numpy scalars, tuples and permutations converted"""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [plain(v) for v in items]
    if isinstance(value, Permutation):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def render_json(envelope: ReportEnvelope, indent: int = 2) -> str:
    return json.dumps(envelope.to_dict(), indent=indent)


def _scalar(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}={_scalar(v)}" for k, v in value.items()) + "}"
    return str(value)


def render_text(envelope: ReportEnvelope) -> str:
    """
    Scalar results go on the first line as key=value; nested records follow,
    one per line. Timing is left out so the text is reproducible.
    """
    results = plain(envelope.results)
    head = [f"{k}={_scalar(v)}" for k, v in results.items() if not isinstance(v, dict)
            and not (isinstance(v, list) and v and isinstance(v[0], dict))]
    lines = [" ".join(head)] if head else []
    for key, value in results.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {_scalar(v)}" for k, v in value.items())
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            for item in value:
                lines.append("  - " + " ".join(f"{k}={_scalar(v)}" for k, v in item.items()))
    return "\n".join(lines) + "\n"
