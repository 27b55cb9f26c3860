"""Weighted-transversal upper bounds over all prunings."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Any

from .combinatorics import build_graph, count_weighted_transversals, prune
from .exceptions import GraphError
from .instance import Instance, instance_to_dict
from .reduce import ReductionTrail, fully_reduce

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundRow:
    """The bound |T_{r-1}(graph minus S)| for one pruning set S."""

    pruned: tuple[int, ...]
    bound: int


@dataclass(frozen=True)
class BoundTable:
    """All per-pruning bounds of one instance, sorted lexicographically by S."""

    instance: Instance
    rows: tuple[BoundRow, ...]
    reduced_first: bool
    trail: ReductionTrail

    @property
    def best(self) -> int:
        """Return the smallest bound."""
        return min(row.bound for row in self.rows)

    @property
    def argmin(self) -> tuple[int, ...]:
        """Return the lexicographically first S attaining the smallest bound."""
        best = self.best
        return next(row.pruned for row in self.rows if row.bound == best)

    @property
    def distinct_bounds(self) -> tuple[int, ...]:
        """Return the distinct bound values, ascending."""
        return tuple(sorted({row.bound for row in self.rows}))

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON-ready bound report."""
        return {
            "best": self.best,
            "argmin_S": list(self.argmin),
            "distinct_bounds": list(self.distinct_bounds),
            "instance": instance_to_dict(self.instance),
            "reduced": self.trail.as_dict() if self.reduced_first else None,
        }


def _check_pruning(inst: Instance, pruned: Iterable[int]) -> tuple[int, ...]:
    chosen = tuple(sorted(set(pruned)))
    if len(chosen) != inst.r + 1:
        raise GraphError(f"pruning set must have r+1={inst.r + 1} markings, got {len(chosen)}")
    if any(not 1 <= i <= inst.n for i in chosen):
        raise GraphError(f"pruning set {list(chosen)} is not a subset of 1..{inst.n}")
    return chosen


def bound_for_S(inst: Instance, pruned: Iterable[int]) -> int:
    """Return |T_{r-1}(graph minus S)|; for r=2 this is the perfect-matching count."""
    chosen = _check_pruning(inst, pruned)
    return count_weighted_transversals(prune(build_graph(inst), chosen), inst.r - 1)


def _bound_task(task: tuple[Instance, tuple[int, ...]]) -> BoundRow:
    inst, pruned = task
    return BoundRow(pruned=pruned, bound=bound_for_S(inst, pruned))


def bound_table(inst: Instance, *, jobs: int = 1) -> BoundTable:
    """Return the bound table of ``inst`` itself, without reduction."""
    return _table(inst, ReductionTrail(original=inst, steps=()), reduced_first=False, jobs=jobs)


def best_bound(inst: Instance, reduce_first: bool = True, *, jobs: int = 1) -> BoundTable:
    """Enumerate every (r+1)-pruning and return the bound table.

    With ``reduce_first`` the instance is fully reduced first; by dimension
    reduction the count is unchanged, so the reduced table bounds the original.
    """
    trail = fully_reduce(inst) if reduce_first else ReductionTrail(original=inst, steps=())
    return _table(trail.final, trail, reduced_first=reduce_first, jobs=jobs)


def _table(inst: Instance, trail: ReductionTrail, *, reduced_first: bool, jobs: int) -> BoundTable:
    tasks = [(inst, pruned) for pruned in combinations(inst.markings, inst.r + 1)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows: Sequence[BoundRow] = list(pool.map(_bound_task, tasks, chunksize=8))
    else:
        rows = [_bound_task(task) for task in tasks]
    _LOGGER.debug("Computed %d pruning bounds for %s", len(rows), inst)
    return BoundTable(instance=inst, rows=tuple(rows), reduced_first=reduced_first, trail=trail)


def naive_matching_bound(inst: Instance) -> int:
    """Return the minimum perfect-matching count over all prunings.

    This is the r=2 bound carried over verbatim; for r >= 3 it is only a
    diagnostic and may fall below the true count.
    """
    g = build_graph(inst)
    return min(
        count_weighted_transversals(prune(g, pruned), 1)
        for pruned in combinations(inst.markings, inst.r + 1)
    )


def monotonicity_profile(
    inst: Instance, pruned: Iterable[int], levels: Iterable[int]
) -> dict[int, int]:
    """Return |T_m(graph minus S)| for each requested level m."""
    chosen = _check_pruning(inst, pruned)
    g = prune(build_graph(inst), chosen)
    return {m: count_weighted_transversals(g, m) for m in levels}


@dataclass(frozen=True)
class BoundReport:
    """The as-given bound table and, when the instance reduces, the reduced one."""

    as_given: BoundTable
    reduced: BoundTable | None

    @property
    def tables(self) -> tuple[BoundTable, ...]:
        """Return the available tables, as-given first."""
        return (self.as_given,) if self.reduced is None else (self.as_given, self.reduced)

    @property
    def best_table(self) -> BoundTable:
        """Return the table attaining the smallest bound, as-given on ties."""
        return min(self.tables, key=lambda table: table.best)

    @property
    def best(self) -> int:
        """Return the smallest bound over both tables."""
        return self.best_table.best

    def as_dict(self) -> dict[str, Any]:
        """Return the JSON-ready report of both tables."""
        best = self.best_table
        return {
            "best": best.best,
            "argmin_S": list(best.argmin),
            "distinct_bounds": list(best.distinct_bounds),
            "as_given": self.as_given.as_dict(),
            "reduced": self.reduced.as_dict() if self.reduced is not None else None,
        }


def bound_report(inst: Instance, *, jobs: int = 1) -> BoundReport:
    """Return the as-given table plus the fully reduced table if a reduction applies."""
    reduced = best_bound(inst, reduce_first=True, jobs=jobs)
    return BoundReport(
        as_given=bound_table(inst, jobs=jobs),
        reduced=reduced if reduced.trail.reduced else None,
    )
