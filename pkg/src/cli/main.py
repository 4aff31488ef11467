"""
Coprimator - Command Line
Subcommands over the group engine, the star commutator sets and the
alternating group witnesses

Exit codes: 0 success, 1 a checked property or expectation failed,
2 usage or input error. Reports go to stdout, logs to stderr.
"""

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from src.cli.report import ReportEnvelope, digest_inputs, render_json, render_text
from src.core import catalog
from src.core.alternating_witness import (
    format_certificate,
    parse_certificate,
    verify_witness,
    witness,
    witness_sweep,
)
from src.core.config import config
from src.core.errors import ConfigError, CoprimatorError, WitnessError, WitnessInputError
from src.core.group import FiniteGroup
from src.core.permutation import parse_cycles
from src.core.series import SeriesKind, classify, derived_length, fitting_height, nilpotency_class, series
from src.core.star_commutators import (
    StarFamily,
    check_fitting_criterion,
    check_lower_fitting_identity,
    check_nesting_and_normality,
    check_nilpotency_criterion,
    check_pi_theorem,
    check_quotient_lifting,
    coprime_commutator_coverage,
    star_set,
    star_subgroup,
)
from src.utils.group_file import read_group_file
from src.utils.primes import prime_divisors
from src.version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
LISTED_LIMIT = 20


@dataclass
class CommandResult:
    results: Dict[str, Any]
    inputs: List[Union[str, bytes]] = field(default_factory=list)
    exit_code: int = EXIT_OK


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _configure_logging(level: str):
    root = logging.getLogger()
    if not any(isinstance(h, _StderrHandler) for h in root.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level.upper())


def _apply_settings(args: argparse.Namespace):
    """flag > environment > settings file > defaults"""
    config.reset()
    if args.settings and not os.path.exists(args.settings):
        raise ConfigError(f"settings file {args.settings} does not exist")
    config.load(args.settings or config.config_file)
    config.apply_env()
    if args.max_elements is not None:
        if args.max_elements <= 0:
            raise ConfigError(f"--max-elements must be positive, got {args.max_elements}")
        config.engine.max_elements = args.max_elements
    if args.threads is not None:
        if args.threads <= 0:
            raise ConfigError(f"--threads must be positive, got {args.threads}")
        config.parallel.threads = args.threads
    if args.log_level:
        config.log_level = args.log_level.upper()
    if getattr(args, "json", False):
        config.output.progress = False


def _load_group(args: argparse.Namespace) -> Tuple[FiniteGroup, Union[str, bytes]]:
    if getattr(args, "group", None):
        definition = read_group_file(args.group)
        return definition.build(config.engine.max_elements), Path(args.group).read_bytes()
    return catalog.resolve(args.catalog), args.catalog


def _primes_of_orders(G: FiniteGroup, mask: np.ndarray) -> List[int]:
    found = set()
    for o in np.unique(G.orders[mask]):
        found |= prime_divisors(int(o))
    return sorted(found)


# Commands

def cmd_analyze(args) -> CommandResult:
    G, source = _load_group(args)
    kinds = classify(G)
    results = {
        "group": G.label,
        "order": G.order,
        "soluble": kinds.is_soluble,
        "nilpotent": kinds.is_nilpotent,
        "abelian": G.is_abelian(),
        "fitting_height": fitting_height(G),
        "derived_length": derived_length(G),
        "nilpotency_class": nilpotency_class(G),
        "series": {
            kind.value: list(series(G, kind).orders)
            for kind in (SeriesKind.DERIVED, SeriesKind.LOWER_CENTRAL, SeriesKind.LOWER_FITTING)
        },
    }
    return CommandResult(results, [source])


def cmd_star(args) -> CommandResult:
    G, source = _load_group(args)
    S = star_set(G, args.family, args.k)
    results = {
        "group": G.label,
        "family": args.family,
        "k": args.k,
        "set_size": S.size,
        "primes": _primes_of_orders(G, S.mask),
    }
    if args.subgroup:
        results["subgroup_order"] = star_subgroup(G, args.family, args.k).order
    return CommandResult(results, [source, args.family, str(args.k)])


def cmd_height(args) -> CommandResult:
    G, source = _load_group(args)
    k_max = config.star.default_k_max if args.k_max is None else args.k_max
    check = check_fitting_criterion(G, k_max)
    results = {
        "group": G.label,
        "k_max": k_max,
        "min_delta_trivial_level": check.details["min_delta_trivial_level"],
        "fitting_height": check.details["fitting_height"],
        "agree": check.ok,
    }
    return CommandResult(results, [source, str(k_max)], EXIT_OK if check.ok else EXIT_VIOLATION)


def cmd_witness(args) -> CommandResult:
    x = parse_cycles(args.perm, args.n)
    w = witness(x, args.n)
    verdict = verify_witness(w)
    if args.certificate:
        with open(args.certificate, "a", encoding="utf-8") as f:
            f.write(format_certificate(w) + "\n")
    results = {"x": w.x, "y": w.y, "b": w.b, "case": w.case, "verified": verdict.ok}
    return CommandResult(results, [str(args.n), args.perm], EXIT_OK if verdict else EXIT_VIOLATION)


def cmd_witness_sweep(args) -> CommandResult:
    report = witness_sweep(args.n, args.cycle_types_only, config.parallel.threads)
    results = {
        "n": report.n,
        "mode": report.mode,
        "total": report.total,
        "failures": len(report.failures),
        "counts": report.counts,
        "failed": [{"x": x, "reason": reason} for x, reason in report.failures[:LISTED_LIMIT]],
    }
    return CommandResult(results, [str(args.n), report.mode], EXIT_OK if report.ok else EXIT_VIOLATION)


def cmd_conjecture(args) -> CommandResult:
    G, source = _load_group(args)
    coverage = coprime_commutator_coverage(G, config.parallel.threads)
    uncovered = coverage.uncovered.members
    results = {
        "group": G.label,
        "order": G.order,
        "covered": coverage.covered.size,
        "uncovered": int(uncovered.size),
        "uncovered_elements": [str(G.element(int(i))) for i in uncovered[:LISTED_LIMIT]],
    }
    return CommandResult(results, [source], EXIT_OK if coverage.complete else EXIT_VIOLATION)


def cmd_catalog_list(args) -> CommandResult:
    return CommandResult({"groups": catalog.names()}, ["catalog"])


def cmd_catalog_show(args) -> CommandResult:
    item = catalog.resolve_entry(args.name)
    expected = item.expected
    results = {
        "name": item.name,
        "degree": item.degree,
        "order": item.expected_order,
        "source": item.source,
        "generators": [str(g) for g in item.generators],
        "expected": {
            "nilpotent": expected.nilpotent,
            "soluble": expected.soluble,
            "fitting_height": expected.fitting_height,
            "simple": expected.simple,
        },
    }
    return CommandResult(results, [args.name])


def cmd_recheck(args) -> CommandResult:
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as e:
        raise WitnessInputError(f"cannot read certificate file {args.certificate}: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise WitnessInputError(f"certificate file {args.certificate} is not UTF-8 text: {e.reason}") from e
    failures = []
    total = 0
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        total += 1
        try:
            verdict = verify_witness(parse_certificate(line, args.n))
        except CoprimatorError as e:
            failures.append({"line": number, "reasons": [str(e)]})
            continue
        if not verdict:
            failures.append({"line": number, "reasons": list(verdict.reasons)})
    results = {
        "certificates": total,
        "passed": total - len(failures),
        "failed": len(failures),
        "failures": failures[:LISTED_LIMIT],
    }
    return CommandResult(results, [str(args.n), text], EXIT_VIOLATION if failures else EXIT_OK)


def _lifting_kernels(G: FiniteGroup) -> List[FiniteGroup]:
    kernels: List[FiniteGroup] = []
    for kind in (SeriesKind.DERIVED, SeriesKind.LOWER_FITTING):
        for term in series(G, kind).terms:
            if 1 < term.order < G.order and term not in kernels:
                kernels.append(term)
    return kernels


def cmd_verify(args) -> CommandResult:
    G = catalog.resolve(args.catalog)
    checks = [
        check_nilpotency_criterion(G),
        check_fitting_criterion(G, args.k_max),
        check_lower_fitting_identity(G),
    ]
    checks.extend(check_pi_theorem(G, k) for k in range(1, 4))
    checks.append(check_nesting_and_normality(G, min(args.k_max, 4)))
    for N in _lifting_kernels(G):
        checks.extend(check_quotient_lifting(G, N, k) for k in (1, 2))
    passed = all(c.ok for c in checks)
    results = {
        "group": G.label,
        "passed": passed,
        "checks": [{"name": c.name, "ok": c.ok, "details": c.details, "reasons": c.reasons} for c in checks],
    }
    return CommandResult(results, [args.catalog, str(args.k_max)], EXIT_OK if passed else EXIT_VIOLATION)


# Parser

def _add_group_source(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--group", metavar="FILE", help="group definition file")
    source.add_argument("--catalog", metavar="NAME", help="catalog group, e.g. alternating(5)")


def _add_threads(parser: argparse.ArgumentParser):
    # SUPPRESS keeps a global --threads when the subcommand flag is absent
    parser.add_argument("--threads", type=int, metavar="T", default=argparse.SUPPRESS,
                        help="worker processes (same as the global flag)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coprimator",
        description="Coprime commutators, Fitting height and alternating group witnesses",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--settings", metavar="FILE", help="settings file (default: settings.json)")
    parser.add_argument("--max-elements", type=int, metavar="N", help="group enumeration cap")
    parser.add_argument("--threads", type=int, metavar="T", help="worker processes for pair scans and sweeps")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR",
                                                "debug", "info", "warning", "error"])

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a single JSON document")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="order, solubility, nilpotency, Fitting height")
    _add_group_source(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("star", parents=[common], help="gamma*/delta* commutator sets")
    _add_group_source(p)
    p.add_argument("--family", choices=[f.value for f in StarFamily], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subgroup", action="store_true", help="also report the generated subgroup")
    p.set_defaults(handler=cmd_star)

    p = sub.add_parser("height", parents=[common], help="delta* trivial level against Fitting height")
    _add_group_source(p)
    p.add_argument("--k-max", type=int, help="highest level to try (default: star.default_k_max)")
    p.set_defaults(handler=cmd_height)

    p = sub.add_parser("witness", parents=[common], help="write x in A_n as [y, b]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", required=True, metavar="CYCLES")
    p.add_argument("--certificate", metavar="OUT", help="append a certificate line to OUT")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("witness-sweep", parents=[common], help="witnesses for all of A_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cycle-types-only", action="store_true")
    _add_threads(p)
    p.set_defaults(handler=cmd_witness_sweep)

    p = sub.add_parser("conjecture", parents=[common], help="coprime commutator coverage")
    _add_group_source(p)
    _add_threads(p)
    p.set_defaults(handler=cmd_conjecture)

    p = sub.add_parser("catalog", help="built-in groups")
    catalog_sub = p.add_subparsers(dest="catalog_command", required=True)
    q = catalog_sub.add_parser("list", parents=[common])
    q.set_defaults(handler=cmd_catalog_list)
    q = catalog_sub.add_parser("show", parents=[common])
    q.add_argument("name")
    q.set_defaults(handler=cmd_catalog_show)

    p = sub.add_parser("recheck", parents=[common], help="re-verify certificate lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--certificate", required=True, metavar="FILE")
    p.set_defaults(handler=cmd_recheck)

    p = sub.add_parser("verify", parents=[common], help="run the property checks on a catalog group")
    p.add_argument("--catalog", required=True, metavar="NAME")
    p.add_argument("--k-max", type=int, default=5)
    p.set_defaults(handler=cmd_verify)

    return parser


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        _apply_settings(args)
    except CoprimatorError as e:
        _configure_logging("WARNING")
        logger.error("%s", e)
        return EXIT_USAGE
    _configure_logging(config.log_level)

    started = time.perf_counter()
    try:
        outcome = args.handler(args)
    except WitnessInputError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except WitnessError as e:
        logger.error("witness construction failed: %s", e)
        return EXIT_VIOLATION
    except CoprimatorError as e:
        logger.error("%s", e)
        return EXIT_USAGE

    envelope = ReportEnvelope(
        command=argv,
        input_digest=digest_inputs(*outcome.inputs),
        results=outcome.results,
        timing={"elapsed_seconds": round(time.perf_counter() - started, 6)},
    )
    if args.json:
        out.write(render_json(envelope, config.output.json_indent) + "\n")
    else:
        out.write(render_text(envelope))
    return outcome.exit_code


def main():
    sys.exit(run())
