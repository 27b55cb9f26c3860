"""Built-in instances with published counts and bound columns."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from .bounds import BoundTable, bound_table
from .engine import CountCoordinator, CountOptions, CountReport
from .instance import Instance, instance_to_dict, parse_instance

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, kw_only=True)
class CatalogEntry:
    """A named instance with its known count and bound column."""

    key: str
    r: int
    compact: str
    count: int | None = None
    bounds: tuple[int, ...] = ()
    bounds_complete: bool = True
    largest_bound: int | None = None
    slow: bool = False

    @property
    def instance(self) -> Instance:
        """Return the parsed instance."""
        return parse_instance(self.compact, r=self.r)

    @property
    def best(self) -> int | None:
        """Return the smallest published bound."""
        return self.bounds[0] if self.bounds else None


TABLE: tuple[CatalogEntry, ...] = (
    CatalogEntry(key="row1", r=3, compact="12345,23456", count=1, bounds=(1, 3)),
    CatalogEntry(key="row2", r=3, compact="12347,34567,12567", count=2, bounds=(3, 6)),
    CatalogEntry(
        key="row3",
        r=3,
        compact="12345,34567,56781,78123",
        count=3,
        bounds=(3, 6, 10, 14, 15, 20, 42),
        slow=True,
    ),
    CatalogEntry(
        key="row4",
        r=3,
        compact="12345,12367,14578,14689,34569",
        count=4,
        bounds=(6, 10, 14, 15, 20, 21),
        bounds_complete=False,
        largest_bound=187,
        slow=True,
    ),
)

EXAMPLES: tuple[CatalogEntry, ...] = (
    CatalogEntry(key="reduced_row2", r=2, compact="1234,3456,1256", count=2),
    CatalogEntry(key="single", r=3, compact="12345", count=1),
    CatalogEntry(key="repeated", r=2, compact="1234,1234", count=0),
)

CATALOG: dict[str, CatalogEntry] = {entry.key: entry for entry in (*TABLE, *EXAMPLES)}

# r=3, n=8 table row three pruned at S = {1,3,5,7}
WORKED_PRUNING: tuple[int, ...] = (1, 3, 5, 7)
WORKED_TRANSVERSALS = 3
WORKED_MATCHINGS = 2


@dataclass(frozen=True)
class TableCheck:
    """A recomputed catalog entry compared with its published values."""

    entry: CatalogEntry
    table: BoundTable
    count: CountReport | None = None

    @property
    def bounds_match(self) -> bool:
        """Return True when the recomputed distinct bounds reproduce the published ones."""
        values = self.table.distinct_bounds
        published = self.entry.bounds
        if not published:
            return True
        if self.entry.bounds_complete:
            return values == published
        return (
            values[: len(published)] == published
            and (self.entry.largest_bound is None or values[-1] == self.entry.largest_bound)
        )

    @property
    def count_match(self) -> bool | None:
        """Return whether the voted count equals the published count (None if not counted)."""
        if self.count is None or self.entry.count is None:
            return None
        return self.count.count == self.entry.count

    @property
    def passed(self) -> bool:
        """Return True when nothing recomputed disagrees with the published values."""
        return self.bounds_match and self.count_match is not False

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "entry": self.entry.key,
            "instance": instance_to_dict(self.table.instance),
            "distinct_bounds": list(self.table.distinct_bounds),
            "best": self.table.best,
            "published_bounds": list(self.entry.bounds),
            "published_count": self.entry.count,
            "bounds_match": self.bounds_match,
            "count": self.count.as_dict() if self.count is not None else None,
            "count_match": self.count_match,
        }


async def async_check_entry(
    entry: CatalogEntry, *, with_count: bool = False, options: CountOptions | None = None
) -> TableCheck:
    """Recompute the as-given bound table and, optionally, the count of one entry."""
    options = options or CountOptions()
    inst = entry.instance
    table = bound_table(inst, jobs=options.jobs)
    count = await CountCoordinator(inst, options).async_run() if with_count else None
    check = TableCheck(entry=entry, table=table, count=count)
    if not check.passed:
        _LOGGER.error("Catalog entry %s does not reproduce its published values", entry.key)
    return check
