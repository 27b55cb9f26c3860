"""JSON conversion of reports."""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from typing import Any, Protocol

from .const import SCHEMA_VERSION
from .engine import analyze_instance
from .instance import Instance


class SupportsAsDict(Protocol):
    """Anything that renders itself as a mapping."""

    def as_dict(self) -> dict[str, Any]:
        """Return a mapping."""
        ...


def _json_value(value: Any) -> Any:
    """Recursively convert a value to plain JSON types."""
    if hasattr(value, "as_dict"):
        return _json_dict(value.as_dict())
    if isinstance(value, dict):
        return _json_dict(value)
    if isinstance(value, list | tuple | frozenset | set):
        items = sorted(value) if isinstance(value, frozenset | set) else value
        return [_json_value(item) for item in items]
    if isinstance(value, Enum):
        return value.value
    return value


def _json_dict(data: dict[Any, Any]) -> dict[str, Any]:
    """Recursively convert a mapping, stringifying keys."""
    return {str(key): _json_value(value) for key, value in data.items()}


def report_to_dict(report: SupportsAsDict, kind: str) -> dict[str, Any]:
    """Return the versioned JSON document for one report."""
    return {"schema": SCHEMA_VERSION, "kind": kind, **_json_dict(report.as_dict())}


def reports_to_dict(reports: Sequence[SupportsAsDict], kind: str) -> dict[str, Any]:
    """Return the versioned JSON document for a list of reports."""
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "items": [_json_dict(report.as_dict()) for report in reports],
    }


def instance_diagnostics(inst: Instance) -> dict[str, Any]:
    """Return the JSON analysis document of an instance."""
    return report_to_dict(analyze_instance(inst), "analyze")


def sections_to_dict(kind: str, sections: dict[str, SupportsAsDict | None]) -> dict[str, Any]:
    """Return the versioned JSON document for a report made of named parts."""
    return {
        "schema": SCHEMA_VERSION,
        "kind": kind,
        **{
            name: _json_dict(part.as_dict()) if part is not None else None
            for name, part in sections.items()
        },
    }
