"""Dimension reduction: strip a marking common to every constraint."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

from .const import MIN_R
from .instance import Instance, instance_to_dict

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductionStep:
    """One reduction: the removed marking and the relabeling of the survivors."""

    removed: int
    relabel: tuple[tuple[int, int], ...]
    before: Instance
    after: Instance

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "removed": self.removed,
            "relabel": {str(old): new for old, new in self.relabel},
            "result": instance_to_dict(self.after),
        }


@dataclass(frozen=True)
class ReductionTrail:
    """The full sequence of reductions applied to an instance."""

    original: Instance
    steps: tuple[ReductionStep, ...]

    @property
    def final(self) -> Instance:
        """Return the fully reduced instance."""
        return self.steps[-1].after if self.steps else self.original

    @property
    def reduced(self) -> bool:
        """Return True if at least one step was applied."""
        return bool(self.steps)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "original": instance_to_dict(self.original),
            "final": instance_to_dict(self.final),
            "steps": [step.as_dict() for step in self.steps],
        }


def common_markings(inst: Instance) -> frozenset[int]:
    """Return the markings contained in every constraint."""
    if not inst.constraints:
        return frozenset()
    common = set(inst.constraints[0])
    for constraint in inst.constraints[1:]:
        common &= set(constraint)
    return frozenset(common)


def reduce_once(inst: Instance) -> tuple[Instance, ReductionStep | None]:
    """Remove the largest common marking, lowering (r, n) by one.

    Returns the instance unchanged (and no step) when r is already at the floor
    of 2 or when no marking is common to all constraints.
    """
    if inst.r <= MIN_R:
        return inst, None
    common = common_markings(inst)
    if not common:
        return inst, None

    removed = max(common)
    relabel = tuple(
        (old, new)
        for new, old in enumerate((i for i in inst.markings if i != removed), start=1)
    )
    mapping = dict(relabel)
    reduced = Instance.create(
        r=inst.r - 1,
        n=inst.n - 1,
        constraints=([mapping[i] for i in c if i != removed] for c in inst.constraints),
    )
    _LOGGER.debug("Removed common marking %d: %s -> %s", removed, inst, reduced)
    return reduced, ReductionStep(removed=removed, relabel=relabel, before=inst, after=reduced)


def fully_reduce(inst: Instance) -> ReductionTrail:
    """Apply :func:`reduce_once` until nothing changes."""
    steps: list[ReductionStep] = []
    current = inst
    while True:
        current, step = reduce_once(current)
        if step is None:
            break
        steps.append(step)
    return ReductionTrail(original=inst, steps=tuple(steps))


def append_marking(inst: Instance) -> Instance:
    """Append the fresh marking n+1 to every constraint, raising (r, n) by one."""
    fresh = inst.n + 1
    return Instance.create(
        r=inst.r + 1,
        n=fresh,
        constraints=((*c, fresh) for c in inst.constraints),
    )
