"""Exact computation, bounding and reduction of projective configuration counts."""

from __future__ import annotations

from .bounds import BoundReport, BoundTable, best_bound, bound_for_S, bound_report
from .engine import CountReport, stochastic_count, verify_oracles, verify_theorem_B
from .exceptions import ConfCountError, InvalidInstanceError
from .instance import Instance, parse_instance

__all__ = [
    "BoundReport",
    "BoundTable",
    "ConfCountError",
    "CountReport",
    "Instance",
    "InvalidInstanceError",
    "best_bound",
    "bound_for_S",
    "bound_report",
    "parse_instance",
    "stochastic_count",
    "verify_oracles",
    "verify_theorem_B",
]
