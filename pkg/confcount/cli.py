"""Command-line front end: analyze, bound, count, verify, table and dump."""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TextIO

import voluptuous as vol

from .bounds import bound_report
from .catalog import CATALOG, TABLE, TableCheck, async_check_entry
from .const import (
    DEFAULT_PRIMES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EXIT_BAD_INPUT,
    EXIT_INCONSISTENT,
    EXIT_OK,
    EXIT_RESOURCE_LIMIT,
    FORMAT_JSON,
    FORMAT_TEXT,
    MIN_R,
    SATURATION_DENOMINATORS,
    SATURATION_MODES,
    SCHEMA_VERSION,
)
from .diagnostics import (
    instance_diagnostics,
    report_to_dict,
    reports_to_dict,
    sections_to_dict,
)
from .engine import (
    CountOptions,
    CountReport,
    Status,
    analyze_instance,
    stochastic_count,
    verify_oracles,
    verify_theorem_B,
)
from .exceptions import (
    ConfCountError,
    FieldError,
    InvalidInstanceError,
    ResourceLimitExceeded,
    SamplingError,
)
from .ffield import check_prime, make_rng, trial_streams
from .instance import Instance, parse_instance
from .polysys import build_system, dump_system
from .reduce import fully_reduce
from .report_fields import SECTIONS, render_text

_LOGGER = logging.getLogger(__name__)

COMMANDS = ("analyze", "bound", "count", "verify", "table", "dump")
INSTANCE_COMMANDS = frozenset(COMMANDS) - {"table"}
MAX_TRIALS = 1000
MAX_JOBS = 256


def _prime(value: Any) -> int:
    """Voluptuous validator for a prime below 2^31."""
    try:
        return check_prime(int(value))
    except (FieldError, TypeError, ValueError) as err:
        raise vol.Invalid(str(err)) from err


CLI_SCHEMA = vol.Schema(
    {
        vol.Required("command"): vol.In(COMMANDS),
        vol.Optional("instance", default=None): vol.Any(None, str),
        vol.Optional("json_path", default=None): vol.Any(None, str),
        vol.Optional("r", default=None): vol.Any(None, vol.All(int, vol.Range(min=MIN_R))),
        vol.Optional("n", default=None): vol.Any(None, vol.All(int, vol.Range(min=1))),
        vol.Required("trials"): vol.All(int, vol.Range(min=1, max=MAX_TRIALS)),
        vol.Required("seed"): vol.All(int, vol.Range(min=0)),
        vol.Required("primes"): vol.All([_prime], vol.Length(min=1)),
        vol.Required("saturation"): vol.In(SATURATION_MODES),
        vol.Required("reduce"): bool,
        vol.Required("format"): vol.In((FORMAT_TEXT, FORMAT_JSON)),
        vol.Required("jobs"): vol.All(int, vol.Range(min=1, max=MAX_JOBS)),
        vol.Required("verbose"): vol.All(int, vol.Range(min=0)),
        vol.Optional("with_count", default=False): bool,
        vol.Optional("entries", default=None): vol.Any(None, [vol.In(sorted(CATALOG))]),
    }
)


@dataclass(frozen=True, kw_only=True)
class CliConfig:
    """Validated command-line configuration."""

    command: str
    instance: str | None
    json_path: str | None
    r: int | None
    n: int | None
    trials: int
    seed: int
    primes: tuple[int, ...]
    saturation: str
    reduce: bool
    format: str
    jobs: int
    verbose: int
    with_count: bool = False
    entries: tuple[str, ...] | None = None

    @classmethod
    def from_mapping(cls, raw: dict[str, Any]) -> CliConfig:
        """Validate a raw mapping (e.g. ``vars(namespace)``) into a config."""
        data = CLI_SCHEMA(raw)
        if data["command"] in INSTANCE_COMMANDS:
            sources = [data["instance"] is not None, data["json_path"] is not None]
            if sum(sources) != 1:
                raise vol.Invalid("give exactly one instance: a compact string or --json FILE")
            if data["instance"] is not None and data["r"] is None:
                raise vol.Invalid("a compact instance needs --r")
        return cls(
            **{
                **data,
                "primes": tuple(data["primes"]),
                "entries": tuple(data["entries"]) if data["entries"] is not None else None,
            }
        )

    def load_instance(self) -> Instance:
        """Parse the configured instance source."""
        if self.json_path is not None:
            try:
                text = Path(self.json_path).read_text(encoding="utf-8")
            except OSError as err:
                raise InvalidInstanceError(f"cannot read {self.json_path}: {err}") from err
            return parse_instance(text, "json")
        if self.instance is None:
            raise InvalidInstanceError("no instance given")
        return parse_instance(self.instance, r=self.r, n=self.n)

    def count_options(self) -> CountOptions:
        """Return the counting options these flags describe."""
        return CountOptions(
            trials=self.trials,
            seed=self.seed,
            saturation=self.saturation,
            reduce_first=self.reduce,
            primes=self.primes,
            jobs=self.jobs,
        )


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    parser = argparse.ArgumentParser(
        prog="confcount",
        description="Bound, reduce and count projective configuration counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=(FORMAT_TEXT, FORMAT_JSON), default=FORMAT_TEXT)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="count", default=0)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("instance", nargs="?", help='compact instance, e.g. "12345,23456"')
    source.add_argument("--r", type=int, help="projective dimension plus one")
    source.add_argument("--n", type=int, help="number of markings (checked against k+r+1)")
    source.add_argument("--json", dest="json_path", metavar="FILE", help="JSON instance file")

    trials = argparse.ArgumentParser(add_help=False)
    trials.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    trials.add_argument("--seed", type=int, default=DEFAULT_SEED)
    trials.add_argument(
        "--prime", dest="primes", type=int, action="append", help="repeat for several primes"
    )
    trials.add_argument("--saturation", choices=SATURATION_MODES, default=SATURATION_DENOMINATORS)
    trials.add_argument("--no-reduce", dest="reduce", action="store_false")

    sub.add_parser("analyze", parents=[common, source], help="structural diagnostics")
    sub.add_parser("bound", parents=[common, source], help="transversal upper bounds")
    sub.add_parser("count", parents=[common, source, trials], help="stochastic count")
    sub.add_parser("verify", parents=[common, source, trials], help="oracle cross-checks")
    sub.add_parser("dump", parents=[common, source, trials], help="print the first system")
    table = sub.add_parser("table", parents=[common, trials], help="reproduce the catalog")
    table.add_argument("--count", dest="with_count", action="store_true")
    table.add_argument("--entry", dest="entries", action="append", choices=sorted(CATALOG))
    return parser


def parse_config(argv: Sequence[str] | None = None) -> CliConfig:
    """Parse and validate command-line arguments."""
    namespace = build_parser().parse_args(argv)
    raw = {
        "instance": None,
        "json_path": None,
        "r": None,
        "n": None,
        "trials": DEFAULT_TRIALS,
        "seed": DEFAULT_SEED,
        "primes": None,
        "saturation": SATURATION_DENOMINATORS,
        "reduce": True,
        **vars(namespace),
    }
    if raw["primes"] is None:
        raw["primes"] = list(DEFAULT_PRIMES)
    return CliConfig.from_mapping(raw)


def _emit(out: TextIO, cfg: CliConfig, text: str, document: dict[str, Any]) -> None:
    if cfg.format == FORMAT_JSON:
        out.write(json.dumps(document, indent=2, sort_keys=False) + "\n")
    else:
        out.write(text + "\n")


def _emit_report(out: TextIO, cfg: CliConfig, report: Any, section: str) -> None:
    text = render_text(report, section, SECTIONS[section])
    _emit(out, cfg, text, report_to_dict(report, section))


def _count_exit(report: CountReport) -> int:
    if report.status is Status.OK:
        return EXIT_OK
    if report.status is Status.RESOURCE_LIMIT:
        return EXIT_RESOURCE_LIMIT
    return EXIT_INCONSISTENT


def cmd_analyze(cfg: CliConfig, out: TextIO) -> int:
    """Print dimension, surplus, common markings and the reduction trail."""
    inst = cfg.load_instance()
    if cfg.format == FORMAT_JSON:
        _emit(out, cfg, "", instance_diagnostics(inst))
    else:
        _emit_report(out, cfg, analyze_instance(inst), "analyze")
    return EXIT_OK


def cmd_bound(cfg: CliConfig, out: TextIO) -> int:
    """Print the bound tables."""
    report = bound_report(cfg.load_instance(), jobs=cfg.jobs)
    _emit_report(out, cfg, report, "bound")
    return EXIT_OK


def cmd_count(cfg: CliConfig, out: TextIO) -> int:
    """Run the stochastic count."""
    opts = cfg.count_options()
    report = stochastic_count(
        cfg.load_instance(),
        opts.trials,
        opts.seed,
        opts.saturation,
        reduce_first=opts.reduce_first,
        primes=opts.primes,
        jobs=opts.jobs,
    )
    _emit_report(out, cfg, report, "count")
    return _count_exit(report)


def cmd_verify(cfg: CliConfig, out: TextIO) -> int:
    """Cross-check the transversal DP against the class product and, if possible, reduction."""
    inst = cfg.load_instance()
    oracles = verify_oracles(inst)
    check = None
    if fully_reduce(inst).reduced:
        check = verify_theorem_B(
            inst,
            cfg.trials,
            cfg.seed,
            saturation=cfg.saturation,
            primes=cfg.primes,
            jobs=cfg.jobs,
        )
    parts = [render_text(oracles, "oracles", SECTIONS["oracles"])]
    if check is not None:
        parts.append(render_text(check, "reduction", SECTIONS["reduction"]))
    _emit(
        out,
        cfg,
        "\n\n".join(parts),
        sections_to_dict("verify", {"oracles": oracles, "reduction": check}),
    )

    if not oracles.passed:
        return EXIT_INCONSISTENT
    if check is None or check.passed:
        return EXIT_OK
    if Status.RESOURCE_LIMIT in (check.original.status, check.reduced.status):
        return EXIT_RESOURCE_LIMIT
    return EXIT_INCONSISTENT


def cmd_table(cfg: CliConfig, out: TextIO) -> int:
    """Recompute catalog entries and compare them with their published values."""
    entries = [CATALOG[key] for key in cfg.entries] if cfg.entries else list(TABLE)
    options = cfg.count_options()

    async def run_all() -> list[TableCheck]:
        return [
            await async_check_entry(entry, with_count=cfg.with_count, options=options)
            for entry in entries
        ]

    checks = asyncio.run(run_all())
    text = "\n\n".join(render_text(check, "table", SECTIONS["table"]) for check in checks)
    _emit(out, cfg, text, reports_to_dict(checks, "table"))
    if all(check.passed for check in checks):
        return EXIT_OK
    if any(
        check.count is not None and check.count.status is Status.RESOURCE_LIMIT
        for check in checks
    ):
        return EXIT_RESOURCE_LIMIT
    return EXIT_INCONSISTENT


def cmd_dump(cfg: CliConfig, out: TextIO) -> int:
    """Print the polynomial system of the first trial."""
    inst = cfg.load_instance()
    target = fully_reduce(inst).final if cfg.reduce else inst
    stream = trial_streams(cfg.seed, 1)[0]
    system = build_system(target, cfg.primes[0], make_rng(stream), cfg.saturation)
    document = {
        "schema": SCHEMA_VERSION,
        "kind": "dump",
        "variables": list(system.variables),
        "p": system.p,
        "equations": [eq.to_text(system.variables) for eq in system.equations],
    }
    _emit(out, cfg, dump_system(system).rstrip("\n"), document)
    return EXIT_OK


HANDLERS = {
    "analyze": cmd_analyze,
    "bound": cmd_bound,
    "count": cmd_count,
    "verify": cmd_verify,
    "table": cmd_table,
    "dump": cmd_dump,
}


def configure_logging(verbose: int) -> None:
    """Send log records to stderr; -v for info, -vv for debug."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Run the command line and return the exit code."""
    out = out or sys.stdout
    try:
        cfg = parse_config(argv)
    except vol.Invalid as err:
        sys.stderr.write(f"confcount: {err}\n")
        return EXIT_BAD_INPUT
    configure_logging(cfg.verbose)

    try:
        return HANDLERS[cfg.command](cfg, out)
    except InvalidInstanceError as err:
        _LOGGER.error("%s", err)
        for violation in err.violations:
            sys.stderr.write(f"  - {violation}\n")
        return EXIT_BAD_INPUT
    except (ResourceLimitExceeded, SamplingError) as err:
        _LOGGER.error("%s", err)
        return EXIT_RESOURCE_LIMIT
    except ConfCountError as err:
        _LOGGER.error("%s", err)
        return EXIT_INCONSISTENT
    except Exception:
        _LOGGER.exception("Unexpected error running %s", cfg.command)
        return EXIT_INCONSISTENT
