"""Class-product oracle for the transversal bound.

The closure of each incidence locus has an explicit class in the Chow ring of
(P^R)^k, R = r^2 - 1, written in the hyperplane classes H_1..H_k. The product of
all classes, read off at H_1^R ... H_k^R, equals the number of (r-1)-weighted
transversals of the pruned graph; this module computes that coefficient
independently of the transversal DP.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from .exceptions import ChowError, GraphError
from .instance import Instance

_LOGGER = logging.getLogger(__name__)

type Exponents = tuple[int, ...]


@dataclass(frozen=True)
class TruncatedPoly:
    """Polynomial in H_1..H_k with integer coefficients, every exponent capped at ``cap``.

    Terms with an exponent above ``cap`` vanish (H_j^(R+1) = 0).
    """

    nvars: int
    cap: int
    terms: Mapping[Exponents, int] = field(default_factory=dict)

    @classmethod
    def one(cls, nvars: int, cap: int) -> TruncatedPoly:
        """Return the constant 1."""
        return cls(nvars, cap, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, exponents: Sequence[int], cap: int, coeff: int = 1) -> TruncatedPoly:
        """Return ``coeff`` times the monomial with the given exponents (or 0 if truncated)."""
        exps = tuple(exponents)
        if any(e > cap for e in exps) or coeff == 0:
            return cls(len(exps), cap, {})
        return cls(len(exps), cap, {exps: coeff})

    @property
    def is_zero(self) -> bool:
        """Return True for the zero polynomial."""
        return not self.terms

    def coefficient(self, exponents: Sequence[int]) -> int:
        """Return the coefficient of one monomial."""
        return self.terms.get(tuple(exponents), 0)

    def __add__(self, other: TruncatedPoly) -> TruncatedPoly:
        """Add two polynomials in the same ring."""
        self._check_ring(other)
        summed = dict(self.terms)
        for exps, coeff in other.terms.items():
            value = summed.get(exps, 0) + coeff
            if value:
                summed[exps] = value
            else:
                summed.pop(exps, None)
        return TruncatedPoly(self.nvars, self.cap, summed)

    def __mul__(self, other: TruncatedPoly) -> TruncatedPoly:
        """Multiply and truncate."""
        return self.multiply(other)

    def multiply(self, other: TruncatedPoly, floor: Sequence[int] | None = None) -> TruncatedPoly:
        """Multiply and truncate, also dropping terms with some exponent below ``floor``.

        ``floor`` lets a caller discard terms that can no longer reach a target monomial.
        """
        self._check_ring(other)
        product: dict[Exponents, int] = {}
        cap = self.cap
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                exps = tuple(x + y for x, y in zip(left, right, strict=True))
                if any(e > cap for e in exps):
                    continue
                if floor is not None and any(e < f for e, f in zip(exps, floor, strict=True)):
                    continue
                product[exps] = product.get(exps, 0) + a * b
        return TruncatedPoly(self.nvars, cap, {e: c for e, c in product.items() if c})

    def _check_ring(self, other: TruncatedPoly) -> None:
        if (self.nvars, self.cap) != (other.nvars, other.cap):
            raise ChowError(
                f"ring mismatch: ({self.nvars}, {self.cap}) vs ({other.nvars}, {other.cap})"
            )


@dataclass(frozen=True)
class AugmentedDatum:
    """The instance extended by marking 0 and constraint I_0 = S plus {0}.

    ``neighborhoods[i]`` is J_i = {j in 0..k : i in I_j} for every i in 0..n.
    """

    instance: Instance
    pruned: tuple[int, ...]
    neighborhoods: Mapping[int, frozenset[int]]

    @property
    def zero_constraint(self) -> frozenset[int]:
        """Return I_0."""
        return frozenset((0, *self.pruned))

    @property
    def degenerate(self) -> tuple[int, ...]:
        """Return the markings with an empty neighborhood (the product is then 0)."""
        return tuple(i for i, hood in sorted(self.neighborhoods.items()) if not hood)

    @property
    def cap(self) -> int:
        """Return R = r^2 - 1."""
        return self.instance.r**2 - 1


def augment(inst: Instance, pruned: Iterable[int]) -> AugmentedDatum:
    """Build the augmented datum for the pruning set ``pruned``."""
    chosen = tuple(sorted(set(pruned)))
    if len(chosen) != inst.r + 1 or any(not 1 <= i <= inst.n for i in chosen):
        raise GraphError(
            f"pruning set {list(chosen)} must be {inst.r + 1} markings from 1..{inst.n}"
        )
    constraints = {0: frozenset((0, *chosen))}
    constraints.update({j: frozenset(c) for j, c in enumerate(inst.constraints, start=1)})
    neighborhoods = {
        i: frozenset(j for j, members in constraints.items() if i in members)
        for i in range(inst.n + 1)
    }
    return AugmentedDatum(instance=inst, pruned=chosen, neighborhoods=neighborhoods)


def lambda_class(d: AugmentedDatum, i: int) -> TruncatedPoly:
    """Return the class of the closure of the i-th incidence locus.

    For i in I_0 this is the product of H_j^(r-1) over j in J_i minus {0}. Otherwise
    it is the sum of prod H_j^(a_j) over 0 <= a_j <= r-1 with
    sum a_j = (r-1)(|J_i| - 1), the expansion of a rectangular Schur polynomial.
    """
    hood = d.neighborhoods.get(i)
    if not hood:
        raise ChowError(f"marking {i} lies in no constraint; its class is undefined")
    r = d.instance.r
    k = d.instance.k
    cap = d.cap
    if i in d.zero_constraint:
        exps = [0] * k
        for j in hood - {0}:
            exps[j - 1] = r - 1
        return TruncatedPoly.monomial(exps, cap)

    members = sorted(hood)
    terms: dict[Exponents, int] = {}
    for split in _capped_compositions((r - 1) * (len(members) - 1), len(members), r - 1):
        exps = [0] * k
        for j, a in zip(members, split, strict=True):
            exps[j - 1] = a
        terms[tuple(exps)] = 1
    return TruncatedPoly(k, cap, terms)


def _capped_compositions(total: int, parts: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Yield compositions of ``total`` into ``parts`` parts, each in 0..bound."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(max(0, total - bound * (parts - 1)), min(bound, total) + 1):
        for rest in _capped_compositions(total - first, parts - 1, bound):
            yield (first, *rest)


def intersection_number(inst: Instance, pruned: Iterable[int]) -> int:
    """Return the coefficient of H_1^R ... H_k^R in the product of all classes.

    Classes are multiplied in ascending marking order. After each step, terms
    that cannot reach exponent R in some variable even with the largest
    exponents still to come are dropped; this does not change the result.
    Returns 0 when some marking lies in no constraint.
    """
    d = augment(inst, pruned)
    if d.degenerate:
        _LOGGER.debug("Markings %s have empty neighborhoods; product is 0", d.degenerate)
        return 0

    k = inst.k
    cap = d.cap
    classes = [lambda_class(d, i) for i in range(inst.n + 1)]
    peaks = [[max((e[v] for e in c.terms), default=0) for v in range(k)] for c in classes]
    still_to_come = [0] * k
    floors: list[list[int]] = [[] for _ in classes]
    for index in range(len(classes) - 1, -1, -1):
        floors[index] = [cap - still_to_come[v] for v in range(k)]
        for v in range(k):
            still_to_come[v] += peaks[index][v]

    product = TruncatedPoly.one(k, cap)
    for index, cls in enumerate(classes):
        product = product.multiply(cls, floor=floors[index])
        if product.is_zero:
            return 0
    return product.coefficient((cap,) * k)


def intersection_numbers(inst: Instance) -> dict[tuple[int, ...], int]:
    """Return the intersection number for every (r+1)-pruning, keyed by S."""
    return {
        pruned: intersection_number(inst, pruned)
        for pruned in combinations(inst.markings, inst.r + 1)
    }
