"""Declarative text rendering of reports."""

from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Any

from .bounds import BoundReport, BoundTable
from .catalog import TableCheck
from .engine import CountReport, InstanceAnalysis, OracleReport, ReductionCheck
from .reduce import ReductionTrail


@dataclass(frozen=True, kw_only=True)
class ReportFieldDescription[T]:
    """Describes one line of a text report."""

    key: str
    translation_key: str
    value_fn: Callable[[T], object]


@cache
def load_strings() -> dict[str, Any]:
    """Return the bundled strings.json."""
    text = resources.files(__package__).joinpath("strings.json").read_text(encoding="utf-8")
    data: dict[str, Any] = json.loads(text)
    return data


def field_name(section: str, translation_key: str) -> str:
    """Return the display name of a field."""
    return str(load_strings()["report"][section][translation_key]["name"])


def _trail_fn(trail: ReductionTrail) -> str:
    """Render a reduction trail as "removed 7: r=2 n=6 (1234,3456,1256)"."""
    if not trail.reduced:
        return "none"
    return "; ".join(f"removed {step.removed}: {step.after}" for step in trail.steps)


def _bounds_fn(table: BoundTable) -> str:
    """Render distinct bounds ascending with the best one starred."""
    values = [f"*{v}*" if v == table.best else str(v) for v in table.distinct_bounds]
    return f"{', '.join(values)}; best {table.best} at S={list(table.argmin)}"


def _trials_fn(report: CountReport) -> str:
    if report.short_circuited:
        return "skipped"
    return ", ".join(
        str(t.dimension) if t.succeeded else f"failed ({t.failure})" for t in report.trials
    )


def _published_fn(check: TableCheck) -> str:
    entry = check.entry
    values = ", ".join(str(v) for v in entry.bounds)
    if not entry.bounds_complete:
        values += f", ..., {entry.largest_bound}"
    return f"d={entry.count}; bounds {values}"


def format_value(value: object) -> str:
    """Format one field value for text output."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.2f}"
    if isinstance(value, tuple | list):
        return ", ".join(format_value(v) for v in value) or "none"
    return str(value)


ANALYZE_FIELDS: tuple[ReportFieldDescription[InstanceAnalysis], ...] = (
    ReportFieldDescription(
        key="instance",
        translation_key="instance",
        value_fn=lambda a: a.instance,
    ),
    ReportFieldDescription(key="n", translation_key="markings", value_fn=lambda a: a.instance.n),
    ReportFieldDescription(key="k", translation_key="constraints", value_fn=lambda a: a.instance.k),
    ReportFieldDescription(
        key="dimension",
        translation_key="dimension",
        value_fn=lambda a: a.dimension,
    ),
    ReportFieldDescription(key="surplus", translation_key="surplus", value_fn=lambda a: a.surplus),
    ReportFieldDescription(
        key="surplus_witness",
        translation_key="surplus_witness",
        value_fn=lambda a: a.surplus_witness,
    ),
    ReportFieldDescription(
        key="surplus_condition",
        translation_key="surplus_condition",
        value_fn=lambda a: a.surplus_condition,
    ),
    ReportFieldDescription(
        key="surplus_condition_via_matchings",
        translation_key="surplus_condition_via_matchings",
        value_fn=lambda a: a.surplus_condition_via_matchings,
    ),
    ReportFieldDescription(
        key="common_markings",
        translation_key="common_markings",
        value_fn=lambda a: a.common_markings,
    ),
    ReportFieldDescription(
        key="uncovered_markings",
        translation_key="uncovered_markings",
        value_fn=lambda a: a.uncovered_markings,
    ),
    ReportFieldDescription(
        key="reduction",
        translation_key="reduction",
        value_fn=lambda a: _trail_fn(a.trail),
    ),
)

BOUND_FIELDS: tuple[ReportFieldDescription[BoundReport], ...] = (
    ReportFieldDescription(
        key="instance",
        translation_key="instance",
        value_fn=lambda b: b.as_given.instance,
    ),
    ReportFieldDescription(
        key="as_given",
        translation_key="as_given",
        value_fn=lambda b: _bounds_fn(b.as_given),
    ),
    ReportFieldDescription(
        key="reduced_instance",
        translation_key="reduced_instance",
        value_fn=lambda b: b.reduced.instance if b.reduced is not None else None,
    ),
    ReportFieldDescription(
        key="reduced",
        translation_key="reduced",
        value_fn=lambda b: _bounds_fn(b.reduced) if b.reduced is not None else None,
    ),
    ReportFieldDescription(key="best", translation_key="best", value_fn=lambda b: b.best),
)

COUNT_FIELDS: tuple[ReportFieldDescription[CountReport], ...] = (
    ReportFieldDescription(
        key="instance",
        translation_key="instance",
        value_fn=lambda c: c.instance,
    ),
    ReportFieldDescription(
        key="counted_instance",
        translation_key="counted_instance",
        value_fn=lambda c: c.counted_instance,
    ),
    ReportFieldDescription(key="count", translation_key="count", value_fn=lambda c: c.count),
    ReportFieldDescription(
        key="agreement",
        translation_key="agreement",
        value_fn=lambda c: f"{c.votes}/{len(c.trials)}" if c.trials else "-",
    ),
    ReportFieldDescription(
        key="status",
        translation_key="status",
        value_fn=lambda c: str(c.status),
    ),
    ReportFieldDescription(
        key="guards",
        translation_key="guards",
        value_fn=lambda c: [str(g) for g in c.guards],
    ),
    ReportFieldDescription(key="bound", translation_key="bound", value_fn=lambda c: c.bound),
    ReportFieldDescription(key="surplus", translation_key="surplus", value_fn=lambda c: c.surplus),
    ReportFieldDescription(
        key="surplus_condition",
        translation_key="surplus_condition",
        value_fn=lambda c: c.surplus_condition,
    ),
    ReportFieldDescription(
        key="conjecture_consistent",
        translation_key="conjecture_consistent",
        value_fn=lambda c: c.conjecture_consistent,
    ),
    ReportFieldDescription(key="trials", translation_key="trials", value_fn=_trials_fn),
)

ORACLE_FIELDS: tuple[ReportFieldDescription[OracleReport], ...] = (
    ReportFieldDescription(
        key="instance",
        translation_key="instance",
        value_fn=lambda o: o.instance,
    ),
    ReportFieldDescription(
        key="prunings",
        translation_key="prunings",
        value_fn=lambda o: len(o.rows),
    ),
    ReportFieldDescription(key="passed", translation_key="passed", value_fn=lambda o: o.passed),
    ReportFieldDescription(
        key="mismatches",
        translation_key="mismatches",
        value_fn=lambda o: [
            f"S={list(row.pruned)} dp={row.transversals} chow={row.intersection}"
            for row in o.mismatches
        ],
    ),
)

REDUCTION_FIELDS: tuple[ReportFieldDescription[ReductionCheck], ...] = (
    ReportFieldDescription(
        key="original",
        translation_key="original",
        value_fn=lambda v: v.original.count,
    ),
    ReportFieldDescription(
        key="reduced",
        translation_key="reduced",
        value_fn=lambda v: v.reduced.count,
    ),
    ReportFieldDescription(
        key="reduced_instance",
        translation_key="reduced_instance",
        value_fn=lambda v: v.reduced.instance,
    ),
    ReportFieldDescription(key="passed", translation_key="passed", value_fn=lambda v: v.passed),
)

TABLE_FIELDS: tuple[ReportFieldDescription[TableCheck], ...] = (
    ReportFieldDescription(
        key="entry",
        translation_key="entry",
        value_fn=lambda t: f"{t.entry.key}: {t.table.instance}",
    ),
    ReportFieldDescription(
        key="bounds",
        translation_key="bounds",
        value_fn=lambda t: _bounds_fn(t.table),
    ),
    ReportFieldDescription(
        key="published",
        translation_key="published",
        value_fn=_published_fn,
    ),
    ReportFieldDescription(
        key="count",
        translation_key="count",
        value_fn=lambda t: t.count.count if t.count is not None else None,
    ),
    ReportFieldDescription(
        key="match",
        translation_key="match",
        value_fn=lambda t: t.passed,
    ),
)

SECTIONS: dict[str, tuple[ReportFieldDescription[Any], ...]] = {
    "table": TABLE_FIELDS,
    "analyze": ANALYZE_FIELDS,
    "bound": BOUND_FIELDS,
    "count": COUNT_FIELDS,
    "oracles": ORACLE_FIELDS,
    "reduction": REDUCTION_FIELDS,
}


def render_text[T](
    report: T, section: str, descriptions: Sequence[ReportFieldDescription[T]]
) -> str:
    """Render one report as aligned "Name: value" lines."""
    rows = [
        (field_name(section, d.translation_key), format_value(d.value_fn(report)))
        for d in descriptions
    ]
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in rows)
