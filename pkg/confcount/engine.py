"""Stochastic counting trials, voting and consistency guards."""

from __future__ import annotations

import asyncio
import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import StrEnum
from itertools import combinations
from typing import Any

import numpy as np

from .bounds import bound_for_S, bound_report
from .chow import intersection_number
from .combinatorics import (
    surplus,
    surplus_condition,
    surplus_condition_via_matchings,
    surplus_witness,
    uncovered_markings,
)
from .const import (
    AGREEMENT_THRESHOLD,
    DEFAULT_PRIMES,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    SATURATION_DENOMINATORS,
)
from .exceptions import PreconditionError, ResourceLimitExceeded, SamplingError
from .ffield import check_prime, make_rng, trial_streams
from .groebner import DEFAULT_LIMITS, GroebnerLimits, buchberger, quotient_dimension
from .instance import Instance, ensure_valid, instance_to_dict, moduli_dimension
from .polysys import build_system
from .reduce import ReductionTrail, common_markings, fully_reduce

_LOGGER = logging.getLogger(__name__)


class Status(StrEnum):
    """Outcome of a counting run."""

    OK = "ok"
    INCONCLUSIVE = "inconclusive"
    INCONSISTENT = "inconsistent"
    RESOURCE_LIMIT = "resource_limit"


class Guard(StrEnum):
    """Consistency guards that can fire during a counting run."""

    UNCOVERED_MARKING = "uncovered_marking"
    SURPLUS_FAILED = "surplus_condition_failed"
    DISAGREEMENT = "trial_disagreement"
    INFINITE_DIMENSION = "infinite_dimension"
    EXCEEDS_BOUND = "count_exceeds_bound"
    BELOW_THRESHOLD = "agreement_below_threshold"
    ALL_TRIALS_FAILED = "all_trials_failed"


@dataclass(frozen=True)
class CountOptions:
    """Knobs of one counting run; every field feeds reproducibility."""

    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    saturation: str = SATURATION_DENOMINATORS
    reduce_first: bool = True
    primes: tuple[int, ...] = DEFAULT_PRIMES
    jobs: int = 1
    limits: GroebnerLimits = DEFAULT_LIMITS

    def __post_init__(self) -> None:
        """Reject option combinations that cannot run."""
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.primes:
            raise ValueError("at least one prime is required")
        for p in self.primes:
            check_prime(p)


@dataclass(frozen=True)
class TrialTask:
    """Everything a worker needs to run one trial."""

    index: int
    instance: Instance
    prime: int
    stream: np.random.SeedSequence
    saturation: str
    limits: GroebnerLimits


@dataclass(frozen=True)
class TrialRecord:
    """Result of one trial: a quotient dimension or a failure reason."""

    index: int
    prime: int
    spawn_key: tuple[int, ...]
    dimension: int | None = None
    infinite: bool = False
    failure: str | None = None
    basis_size: int | None = None

    @property
    def succeeded(self) -> bool:
        """Return True when the trial produced a finite dimension."""
        return self.dimension is not None

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "index": self.index,
            "prime": self.prime,
            "spawn_key": list(self.spawn_key),
            "dimension": "infinite" if self.infinite else self.dimension,
            "failure": self.failure,
            "basis_size": self.basis_size,
        }


@dataclass(frozen=True)
class CountReport:
    """The voted count of an instance plus every guard that was checked."""

    instance: Instance
    trail: ReductionTrail
    options: CountOptions
    trials: tuple[TrialRecord, ...]
    count: int | None
    agreement: float
    status: Status
    guards: tuple[Guard, ...]
    bound: int
    surplus: int
    surplus_condition: bool
    short_circuited: bool = False

    @property
    def counted_instance(self) -> Instance:
        """Return the instance the trials actually ran on."""
        return self.trail.final if self.options.reduce_first else self.instance

    @property
    def votes(self) -> int:
        """Return the number of trials agreeing with the voted count."""
        if self.count is None:
            return 0
        return sum(1 for t in self.trials if t.dimension == self.count)

    @property
    def conjecture_consistent(self) -> bool | None:
        """Return whether the result agrees with "surplus condition implies nonzero"."""
        if self.count is None:
            return None
        return not (self.surplus_condition and self.count == 0)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping (without the schema marker)."""
        return {
            "instance": instance_to_dict(self.instance),
            "reduced": self.trail.as_dict() if self.options.reduce_first else None,
            "count": self.count,
            "agreement": self.agreement,
            "votes": self.votes,
            "status": str(self.status),
            "guards": [str(g) for g in self.guards],
            "bound": self.bound,
            "surplus": self.surplus,
            "surplus_condition": self.surplus_condition,
            "conjecture_consistent": self.conjecture_consistent,
            "short_circuited": self.short_circuited,
            "seed": self.options.seed,
            "saturation": self.options.saturation,
            "primes": list(self.options.primes),
            "trials": [t.as_dict() for t in self.trials],
        }


def run_trial(task: TrialTask) -> TrialRecord:
    """Build, solve and count one randomized system; failures are recorded, not raised."""
    base = TrialRecord(
        index=task.index, prime=task.prime, spawn_key=tuple(task.stream.spawn_key)
    )
    try:
        system = build_system(
            task.instance, task.prime, make_rng(task.stream), task.saturation
        )
        basis = buchberger(list(system.equations), limits=task.limits)
    except (SamplingError, ResourceLimitExceeded) as err:
        _LOGGER.warning("Trial %d (p=%d) failed: %s", task.index, task.prime, err)
        return replace(base, failure=str(err))

    dimension = quotient_dimension(basis)
    if dimension is None:
        _LOGGER.warning("Trial %d (p=%d): positive-dimensional fiber", task.index, task.prime)
        return replace(
            base,
            infinite=True,
            failure="infinite quotient dimension",
            basis_size=len(basis.polys),
        )
    _LOGGER.info("Trial %d (p=%d): quotient dimension %d", task.index, task.prime, dimension)
    return replace(base, dimension=dimension, basis_size=len(basis.polys))


def vote(
    records: Sequence[TrialRecord], threshold: float = AGREEMENT_THRESHOLD
) -> tuple[int | None, float, list[Guard]]:
    """Return (count, agreement, guards) for a sequence of trial records.

    The count is the most frequent finite dimension (ties go to the smaller
    value); agreement is its share of all trials. Below ``threshold`` no count
    is returned.
    """
    guards: list[Guard] = []
    tally = Counter(r.dimension for r in records if r.dimension is not None)
    if any(r.infinite for r in records):
        guards.append(Guard.INFINITE_DIMENSION)
    if not tally:
        guards.append(Guard.ALL_TRIALS_FAILED)
        return None, 0.0, guards
    if len(tally) > 1:
        guards.append(Guard.DISAGREEMENT)
    winner, votes = min(tally.items(), key=lambda item: (-item[1], item[0]))
    agreement = votes / len(records)
    if agreement < threshold:
        guards.append(Guard.BELOW_THRESHOLD)
        return None, agreement, guards
    return winner, agreement, guards


class CountCoordinator:
    """Runs the trials of one instance and folds them into a CountReport.

    Setup computes the reduction, bound and surplus once; trials then run
    inline or on a process pool, and are folded in trial-index order.
    """

    def __init__(self, inst: Instance, options: CountOptions | None = None) -> None:
        """Initialize the coordinator."""
        self.instance = ensure_valid(inst)
        self.options = options or CountOptions()
        self.trail: ReductionTrail | None = None
        self.bound: int | None = None
        self.records: list[TrialRecord] = []

    @property
    def target(self) -> Instance:
        """Return the instance the trials run on."""
        if self.trail is None:
            raise PreconditionError("coordinator setup has not run")
        return self.trail.final if self.options.reduce_first else self.instance

    async def _async_setup(self) -> tuple[ReductionTrail, int]:
        """Reduce the instance and compute the best bound."""
        self.trail = fully_reduce(self.instance)
        self.bound = bound_report(self.instance, jobs=self.options.jobs).best
        return self.trail, self.bound

    def tasks(self) -> list[TrialTask]:
        """Return one task per trial; trial t uses prime t mod len(primes)."""
        opts = self.options
        streams = trial_streams(opts.seed, opts.trials)
        return [
            TrialTask(
                index=t,
                instance=self.target,
                prime=opts.primes[t % len(opts.primes)],
                stream=streams[t],
                saturation=opts.saturation,
                limits=opts.limits,
            )
            for t in range(opts.trials)
        ]

    async def _async_run_trials(self) -> list[TrialRecord]:
        tasks = self.tasks()
        if self.options.jobs > 1 and len(tasks) > 1:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=self.options.jobs) as pool:
                futures = [loop.run_in_executor(pool, run_trial, task) for task in tasks]
                records = await asyncio.gather(*futures)
        else:
            records = [run_trial(task) for task in tasks]
        return sorted(records, key=lambda rec: rec.index)

    async def async_run(self) -> CountReport:
        """Run setup, the short-circuit guards and all trials."""
        trail, bound = await self._async_setup()
        inst = self.instance
        holds = surplus_condition(inst)
        shell = CountReport(
            instance=inst,
            trail=trail,
            options=self.options,
            trials=(),
            count=0,
            agreement=1.0,
            status=Status.OK,
            guards=(),
            bound=bound,
            surplus=surplus(inst),
            surplus_condition=holds,
        )

        uncovered = uncovered_markings(inst)
        if uncovered or not holds:
            fired = [Guard.UNCOVERED_MARKING] if uncovered else []
            if not holds:
                fired.append(Guard.SURPLUS_FAILED)
            _LOGGER.info("Count of %s is 0 without trials (%s)", inst, ", ".join(fired))
            return replace(shell, guards=tuple(fired), short_circuited=True)

        _LOGGER.debug("Running %d trials on %s", self.options.trials, self.target)
        self.records = await self._async_run_trials()
        count, agreement, guards = vote(self.records)
        if count is not None and count > bound:
            guards.append(Guard.EXCEEDS_BOUND)

        if Guard.ALL_TRIALS_FAILED in guards and not any(r.infinite for r in self.records):
            status = Status.RESOURCE_LIMIT
        elif {Guard.DISAGREEMENT, Guard.INFINITE_DIMENSION, Guard.EXCEEDS_BOUND} & set(guards):
            status = Status.INCONSISTENT
        elif count is None:
            status = Status.INCONCLUSIVE
        else:
            status = Status.OK
        if status is not Status.OK:
            _LOGGER.warning(
                "Count of %s is %s (guards: %s); retry with other primes or seeds",
                inst,
                status,
                ", ".join(guards),
            )
        return replace(
            shell,
            trials=tuple(self.records),
            count=count,
            agreement=agreement,
            status=status,
            guards=tuple(guards),
        )


def stochastic_count(
    inst: Instance,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    saturation: str = SATURATION_DENOMINATORS,
    *,
    reduce_first: bool = True,
    primes: Sequence[int] = DEFAULT_PRIMES,
    jobs: int = 1,
    limits: GroebnerLimits = DEFAULT_LIMITS,
) -> CountReport:
    """Count the instance by majority vote over independent randomized trials."""
    options = CountOptions(
        trials=trials,
        seed=seed,
        saturation=saturation,
        reduce_first=reduce_first,
        primes=tuple(primes),
        jobs=jobs,
        limits=limits,
    )
    return asyncio.run(CountCoordinator(inst, options).async_run())


@dataclass(frozen=True)
class ReductionCheck:
    """Counts of an instance and of its reduction, which must agree."""

    original: CountReport
    reduced: CountReport

    @property
    def passed(self) -> bool:
        """Return True when both counts exist and are equal."""
        return self.original.count is not None and self.original.count == self.reduced.count

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "passed": self.passed,
            "original": self.original.as_dict(),
            "reduced": self.reduced.as_dict(),
        }


def verify_theorem_B(
    inst: Instance,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    *,
    saturation: str = SATURATION_DENOMINATORS,
    primes: Sequence[int] = DEFAULT_PRIMES,
    jobs: int = 1,
    limits: GroebnerLimits = DEFAULT_LIMITS,
) -> ReductionCheck:
    """Count the instance as given and fully reduced; the counts must agree."""
    inst = ensure_valid(inst)
    trail = fully_reduce(inst)
    if not trail.reduced:
        raise PreconditionError(f"{inst} has no marking common to every constraint")

    def count(target: Instance) -> CountReport:
        return stochastic_count(
            target,
            trials,
            seed,
            saturation,
            reduce_first=False,
            primes=primes,
            jobs=jobs,
            limits=limits,
        )

    check = ReductionCheck(original=count(inst), reduced=count(trail.final))
    _LOGGER.info(
        "Reduction check %s: %s vs %s",
        "passed" if check.passed else "failed",
        check.original.count,
        check.reduced.count,
    )
    return check


@dataclass(frozen=True)
class OracleRow:
    """Transversal count and class-product count for one pruning."""

    pruned: tuple[int, ...]
    transversals: int
    intersection: int

    @property
    def agrees(self) -> bool:
        """Return True when the two counts match."""
        return self.transversals == self.intersection


@dataclass(frozen=True)
class OracleReport:
    """Transversal DP against the class-product oracle over every pruning."""

    instance: Instance
    rows: tuple[OracleRow, ...]

    @property
    def passed(self) -> bool:
        """Return True when every pruning agrees."""
        return all(row.agrees for row in self.rows)

    @property
    def mismatches(self) -> tuple[OracleRow, ...]:
        """Return the disagreeing prunings."""
        return tuple(row for row in self.rows if not row.agrees)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "instance": instance_to_dict(self.instance),
            "prunings": len(self.rows),
            "passed": self.passed,
            "mismatches": [
                {"S": list(row.pruned), "dp": row.transversals, "chow": row.intersection}
                for row in self.mismatches
            ],
        }


def verify_oracles(inst: Instance, prunings: Iterable[Sequence[int]] | None = None) -> OracleReport:
    """Compare the transversal DP with the class-product coefficient for each pruning."""
    inst = ensure_valid(inst)
    chosen = (
        [tuple(sorted(s)) for s in prunings]
        if prunings is not None
        else list(combinations(inst.markings, inst.r + 1))
    )
    rows = tuple(
        OracleRow(
            pruned=s,
            transversals=bound_for_S(inst, s),
            intersection=intersection_number(inst, s),
        )
        for s in chosen
    )
    if not all(row.agrees for row in rows):
        _LOGGER.error("Oracle mismatch on %s", inst)
    return OracleReport(instance=inst, rows=rows)


@dataclass(frozen=True)
class InstanceAnalysis:
    """Structural facts about an instance that need no randomness."""

    instance: Instance
    dimension: int
    surplus: int
    surplus_witness: tuple[int, ...]
    surplus_condition: bool
    surplus_condition_via_matchings: bool
    common_markings: tuple[int, ...]
    uncovered_markings: tuple[int, ...]
    trail: ReductionTrail

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "instance": instance_to_dict(self.instance),
            "n": self.instance.n,
            "k": self.instance.k,
            "dimension": self.dimension,
            "surplus": self.surplus,
            "surplus_witness": list(self.surplus_witness),
            "surplus_condition": self.surplus_condition,
            "surplus_condition_via_matchings": self.surplus_condition_via_matchings,
            "common_markings": list(self.common_markings),
            "uncovered_markings": list(self.uncovered_markings),
            "reduction": self.trail.as_dict(),
        }


def analyze_instance(inst: Instance) -> InstanceAnalysis:
    """Collect dimension, surplus, common markings and the reduction trail."""
    inst = ensure_valid(inst)
    return InstanceAnalysis(
        instance=inst,
        dimension=moduli_dimension(inst),
        surplus=surplus(inst),
        surplus_witness=surplus_witness(inst),
        surplus_condition=surplus_condition(inst),
        surplus_condition_via_matchings=surplus_condition_via_matchings(inst),
        common_markings=tuple(sorted(common_markings(inst))),
        uncovered_markings=uncovered_markings(inst),
        trail=fully_reduce(inst),
    )
