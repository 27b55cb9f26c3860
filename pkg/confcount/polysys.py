"""Polynomial systems whose solution count is the configuration count.

Markings 1..r+1 are pinned to the standard frame e_1, ..., e_r, (1, ..., 1).
Every other marking i gets coordinates y_i_1..y_i_r and a random linear
normalization. For each constraint I_j with anchor labels a < b < c (its three
smallest) and every further label d, the unknown configuration must reproduce
the sampled target's ratio

    lambda_d = m(a,c) * m(b,d) / (m(a,d) * m(b,c)),

where m(x,y) is the determinant of the columns I_j minus {x, y} in ascending
order. One extra variable u with u * D - 1 = 0 keeps the chosen minors nonzero.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .const import SATURATION_DENOMINATORS, SATURATION_FULL, SATURATION_MODES
from .exceptions import FieldError
from .ffield import FpMatrix, det, inverse, random_residue, sample_general_config
from .fppoly import DEGREVLEX, FpPoly, MonomialOrder, from_columns, poly_det
from .instance import Instance

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TargetConfig:
    """A sampled generic configuration on the labels of one constraint."""

    constraint: int
    labels: tuple[int, ...]
    config: FpMatrix
    invariants: Mapping[int, int]


@dataclass(frozen=True)
class ConstraintSystem:
    """A square polynomial system for one instance, prime and set of targets."""

    instance: Instance
    p: int
    saturation: str
    variables: tuple[str, ...]
    equations: tuple[FpPoly, ...]
    targets: tuple[TargetConfig, ...]
    frame: tuple[int, ...]
    normalizations: Mapping[int, tuple[int, ...]]
    saturating_poly: FpPoly

    @property
    def nvars(self) -> int:
        """Return the number of variables (the last one is u)."""
        return len(self.variables)

    @property
    def is_square(self) -> bool:
        """Return True when there are as many equations as variables."""
        return len(self.equations) == len(self.variables)


def _anchor(labels: Sequence[int]) -> tuple[int, int, int, tuple[int, ...]]:
    ordered = sorted(labels)
    a, b, c = ordered[:3]
    return a, b, c, tuple(ordered[3:])


def _complement(labels: Sequence[int], x: int, y: int) -> tuple[int, ...]:
    return tuple(i for i in sorted(labels) if i not in (x, y))


def invariants_of(config: FpMatrix, labels: Sequence[int]) -> dict[int, int]:
    """Return lambda_d for every label d beyond the three smallest.

    ``config`` has one column per label, in the order of ``labels``.
    """
    r, width = config.shape
    if width != len(labels) or width != r + 2:
        raise FieldError(f"expected {r + 2} labeled columns, got {width} for {len(labels)} labels")
    p = config.p
    position = {label: index for index, label in enumerate(labels)}

    def minor(x: int, y: int) -> int:
        value = det(config.select_columns([position[i] for i in _complement(labels, x, y)]))
        if not value:
            raise FieldError(f"minor without columns {x}, {y} vanishes")
        return value

    a, b, c, rest = _anchor(labels)
    return {
        d: minor(a, c) * minor(b, d) * inverse(minor(a, d) * minor(b, c), p) % p for d in rest
    }


class _PointColumns:
    """Homogeneous coordinates of every marking as polynomial columns."""

    def __init__(self, inst: Instance, p: int, order: MonomialOrder) -> None:
        r = inst.r
        self.r = r
        self.nvars = inst.k * r + 1
        self.p = p
        self.order = order
        self.frame = tuple(range(1, r + 2))
        self._minors: dict[tuple[int, ...], FpPoly] = {}

    def index(self, marking: int, coord: int) -> int:
        """Return the variable index of y_marking_(coord+1)."""
        return (marking - self.r - 2) * self.r + coord

    def column(self, marking: int) -> list[FpPoly]:
        r, nvars, p, order = self.r, self.nvars, self.p, self.order
        if marking <= r:
            return [FpPoly.constant(int(row == marking - 1), nvars, p, order) for row in range(r)]
        if marking == r + 1:
            return [FpPoly.constant(1, nvars, p, order) for _ in range(r)]
        return [FpPoly.variable(self.index(marking, row), nvars, p, order) for row in range(r)]

    def minor(self, columns: tuple[int, ...]) -> FpPoly:
        """Return the determinant of the given markings' columns, memoized."""
        if columns not in self._minors:
            self._minors[columns] = poly_det(from_columns(self.column(i) for i in columns))
        return self._minors[columns]


def variable_names(inst: Instance) -> tuple[str, ...]:
    """Return y_i_l for the unknown markings, then u."""
    r = inst.r
    names = [f"y_{i}_{coord}" for i in range(r + 2, inst.n + 1) for coord in range(1, r + 1)]
    return (*names, "u")


def sample_targets(
    inst: Instance, p: int, rng: np.random.Generator
) -> tuple[TargetConfig, ...]:
    """Sample one generic configuration per constraint and compute its invariants."""
    targets = []
    for j, labels in enumerate(inst.constraints, start=1):
        config = sample_general_config(inst.r, labels, p, rng)
        targets.append(
            TargetConfig(
                constraint=j,
                labels=labels,
                config=config,
                invariants=invariants_of(config, labels),
            )
        )
    return tuple(targets)


def build_system(
    inst: Instance,
    p: int,
    rng: np.random.Generator,
    saturation: str = SATURATION_DENOMINATORS,
    *,
    order: MonomialOrder = DEGREVLEX,
) -> ConstraintSystem:
    """Sample targets and normalizations, then assemble the saturated system."""
    targets = sample_targets(inst, p, rng)
    normalizations = {
        i: tuple(random_residue(rng, p, nonzero=True) for _ in range(inst.r))
        for i in range(inst.r + 2, inst.n + 1)
    }
    return assemble_system(inst, p, targets, normalizations, saturation, order=order)


def assemble_system(
    inst: Instance,
    p: int,
    targets: Iterable[TargetConfig],
    normalizations: Mapping[int, Sequence[int]],
    saturation: str = SATURATION_DENOMINATORS,
    *,
    order: MonomialOrder = DEGREVLEX,
) -> ConstraintSystem:
    """Assemble the system for given targets and normalization coefficients."""
    if saturation not in SATURATION_MODES:
        raise ValueError(f"unknown saturation mode {saturation!r}")
    targets = tuple(targets)
    points = _PointColumns(inst, p, order)
    nvars = points.nvars
    one = FpPoly.constant(1, nvars, p, order)

    equations: list[FpPoly] = []
    for i in range(inst.r + 2, inst.n + 1):
        coeffs = normalizations[i]
        linear = one.scale(0)
        for coord, c in enumerate(coeffs):
            linear = linear + FpPoly.variable(points.index(i, coord), nvars, p, order).scale(c)
        equations.append(linear - 1)

    saturated: dict[tuple[int, ...], FpPoly] = {}
    for target in targets:
        labels = target.labels
        a, b, c, rest = _anchor(labels)
        for d in rest:
            den_ad = _complement(labels, a, d)
            den_bc = _complement(labels, b, c)
            numerator = points.minor(_complement(labels, a, c)) * points.minor(
                _complement(labels, b, d)
            )
            denominator = points.minor(den_ad) * points.minor(den_bc)
            equations.append(numerator - denominator.scale(target.invariants[d]))
            if saturation == SATURATION_DENOMINATORS:
                saturated[den_ad] = points.minor(den_ad)
                saturated[den_bc] = points.minor(den_bc)
        if saturation == SATURATION_FULL:
            for columns in combinations(labels, inst.r):
                saturated[columns] = points.minor(columns)

    product = one
    for columns in sorted(saturated):
        factor = saturated[columns]
        if factor.is_zero:
            raise FieldError(f"minor on columns {columns} vanishes identically")
        if not factor.is_constant():
            product = product * factor
    u = FpPoly.variable(nvars - 1, nvars, p, order)
    equations.append(u * product - 1)

    system = ConstraintSystem(
        instance=inst,
        p=p,
        saturation=saturation,
        variables=variable_names(inst),
        equations=tuple(equations),
        targets=targets,
        frame=points.frame,
        normalizations={i: tuple(c) for i, c in normalizations.items()},
        saturating_poly=product,
    )
    _LOGGER.debug(
        "Built %d equations in %d variables for %s (saturating degree %d)",
        len(system.equations),
        system.nvars,
        inst,
        product.degree,
    )
    return system


def dump_system(system: ConstraintSystem) -> str:
    """Render the system one equation per line, over variables y_i_l and u."""
    header = [
        f"# {system.instance}",
        f"# p = {system.p}",
        f"# variables: {' '.join(system.variables)}",
    ]
    body = [f"{eq.to_text(system.variables)} = 0" for eq in system.equations]
    return "\n".join([*header, *body]) + "\n"
