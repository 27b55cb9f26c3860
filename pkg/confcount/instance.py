"""Instance data model: parsing, validation and serialization."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any, Literal

import voluptuous as vol

from .const import COMPACT_MAX_N, MIN_R
from .exceptions import InvalidInstanceError

_LOGGER = logging.getLogger(__name__)

type InstanceFormat = Literal["compact", "json"]

INSTANCE_SCHEMA = vol.Schema(
    {
        vol.Required("r"): vol.All(int, vol.Range(min=1)),
        vol.Required("n"): vol.All(int, vol.Range(min=1)),
        vol.Required("constraints"): [[vol.All(int, vol.Range(min=0))]],
    },
    extra=vol.PREVENT_EXTRA,
)


@dataclass(frozen=True)
class Instance:
    """The datum (r, n, I_1..I_k) of a projective configuration count.

    Markings are 1-based. Each constraint is stored as a sorted tuple; the
    order of the constraints is significant. Construction does not validate,
    call :func:`validate` (or use :func:`parse_instance`) for that.
    """

    r: int
    n: int
    constraints: tuple[tuple[int, ...], ...]

    @classmethod
    def create(cls, r: int, n: int, constraints: Iterable[Iterable[int]]) -> Instance:
        """Build an instance, sorting each constraint."""
        return cls(r=r, n=n, constraints=tuple(tuple(sorted(c)) for c in constraints))

    @property
    def k(self) -> int:
        """Return the number of constraints."""
        return len(self.constraints)

    @property
    def markings(self) -> tuple[int, ...]:
        """Return the marking labels 1..n."""
        return tuple(range(1, self.n + 1))

    def as_compact(self) -> str:
        """Return the compact "12345,23456" rendering (n <= 9 only)."""
        return serialize_instance(self, "compact")

    def __str__(self) -> str:
        """Return a short human-readable description."""
        body = ",".join("".join(str(i) for i in c) for c in self.constraints)
        if self.n > COMPACT_MAX_N:
            body = ";".join(" ".join(str(i) for i in c) for c in self.constraints)
        return f"r={self.r} n={self.n} ({body})"


def validate(inst: Instance) -> list[str]:
    """Return the violated instance rules; an empty list means the instance is valid."""
    violations: list[str] = []
    if inst.r < MIN_R:
        violations.append(f"r={inst.r} < {MIN_R}")
    if inst.n < inst.r + 1:
        violations.append(f"n={inst.n} < r+1={inst.r + 1}")
    expected_k = inst.n - inst.r - 1
    if inst.k != expected_k:
        violations.append(f"k={inst.k} ≠ n−r−1={expected_k}")
    if inst.k == 0:
        violations.append("k=0: no constraints")
    for index, constraint in enumerate(inst.constraints, start=1):
        if len(constraint) != inst.r + 2:
            violations.append(
                f"constraint {index}: size {len(constraint)} ≠ r+2={inst.r + 2}"
            )
        if len(set(constraint)) != len(constraint):
            violations.append(f"constraint {index}: duplicate elements")
        out_of_range = sorted(i for i in set(constraint) if not 1 <= i <= inst.n)
        if out_of_range:
            violations.append(
                f"constraint {index}: labels {out_of_range} outside 1..{inst.n}"
            )
        if list(constraint) != sorted(constraint):
            violations.append(f"constraint {index}: not sorted")
    return violations


def ensure_valid(inst: Instance) -> Instance:
    """Return ``inst`` unchanged or raise InvalidInstanceError listing every violation."""
    violations = validate(inst)
    if violations:
        raise InvalidInstanceError("invalid instance: " + "; ".join(violations), violations)
    return inst


def moduli_dimension(inst: Instance) -> int:
    """Return dim X(r,[n]) = (r-1)(n-r-1)."""
    return (inst.r - 1) * (inst.n - inst.r - 1)


def parse_instance(
    text: str,
    fmt: InstanceFormat = "compact",
    *,
    r: int | None = None,
    n: int | None = None,
) -> Instance:
    """Parse and validate an instance.

    ``compact`` reads "S1,S2,...,Sk" with single-digit labels and requires
    ``r``; n is inferred as k + r + 1 (an explicit ``n`` must agree).
    ``json`` reads ``{"r": int, "n": int, "constraints": [[int, ...], ...]}``.
    """
    if fmt == "compact":
        inst = _parse_compact(text, r, n)
    elif fmt == "json":
        inst = _parse_json(text)
    else:
        raise InvalidInstanceError(f"unknown instance format {fmt!r}")
    return ensure_valid(inst)


def _parse_compact(text: str, r: int | None, n: int | None) -> Instance:
    """Parse the compact digit-string format."""
    if r is None:
        raise InvalidInstanceError("compact format requires r")
    cleaned = "".join(text.split())
    if not cleaned:
        raise InvalidInstanceError("empty instance: k=0", ["k=0: no constraints"])

    constraints: list[tuple[int, ...]] = []
    for index, token in enumerate(cleaned.split(","), start=1):
        if not token or not token.isdigit():
            raise InvalidInstanceError(f"constraint {index}: malformed token {token!r}")
        labels = [int(ch) for ch in token]
        if 0 in labels:
            raise InvalidInstanceError(f"constraint {index}: label 0 is not a marking")
        if len(set(labels)) != len(labels):
            raise InvalidInstanceError(f"constraint {index}: duplicate elements in {token!r}")
        if len(labels) != r + 2:
            raise InvalidInstanceError(
                f"constraint {index}: subset size {len(labels)} ≠ r+2={r + 2}"
            )
        constraints.append(tuple(sorted(labels)))

    inferred = len(constraints) + r + 1
    if n is not None and n != inferred:
        violation = f"k={len(constraints)} ≠ n−r−1={n - r - 1}"
        raise InvalidInstanceError(f"invalid instance: {violation}", [violation])
    if inferred > COMPACT_MAX_N:
        raise InvalidInstanceError(
            f"compact format supports n ≤ {COMPACT_MAX_N}; inferred n={inferred}"
        )
    largest = max(max(c) for c in constraints)
    if largest > inferred:
        raise InvalidInstanceError(
            f"label {largest} exceeds inferred n={inferred} (k={len(constraints)}, r={r})"
        )
    _LOGGER.debug("Parsed compact instance %r with r=%d, n=%d", text, r, inferred)
    return Instance(r=r, n=inferred, constraints=tuple(constraints))


def _parse_json(text: str) -> Instance:
    """Parse the JSON instance format."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInstanceError(f"malformed JSON: {err}") from err
    try:
        data: dict[str, Any] = INSTANCE_SCHEMA(raw)
    except vol.Invalid as err:
        raise InvalidInstanceError(f"instance does not match schema: {err}") from err
    for index, constraint in enumerate(data["constraints"], start=1):
        if len(set(constraint)) != len(constraint):
            raise InvalidInstanceError(f"constraint {index}: duplicate elements")
    return Instance.create(data["r"], data["n"], data["constraints"])


def serialize_instance(inst: Instance, fmt: InstanceFormat = "json") -> str:
    """Serialize an instance; ``parse_instance`` inverts this for valid instances."""
    if fmt == "json":
        return json.dumps(instance_to_dict(inst), separators=(",", ":"))
    if fmt == "compact":
        if inst.n > COMPACT_MAX_N:
            raise InvalidInstanceError(
                f"compact format supports n ≤ {COMPACT_MAX_N}; instance has n={inst.n}"
            )
        return ",".join("".join(str(i) for i in c) for c in inst.constraints)
    raise InvalidInstanceError(f"unknown instance format {fmt!r}")


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    """Return the JSON-ready mapping for an instance."""
    return {"r": inst.r, "n": inst.n, "constraints": [list(c) for c in inst.constraints]}
