"""Buchberger's algorithm over F_p and standard-monomial counting."""

from __future__ import annotations

import heapq
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from .const import MAX_BASIS_DEGREE, MAX_BASIS_SIZE, MAX_PAIRS
from .exceptions import FieldError, ResourceLimitExceeded
from .fppoly import FpPoly, Monomial, MonomialOrder, monomial_divides, monomial_lcm

_LOGGER = logging.getLogger(__name__)

type Pair = tuple[int, int]


@dataclass(frozen=True)
class GroebnerLimits:
    """Caps that turn a runaway computation into ResourceLimitExceeded."""

    max_degree: int = MAX_BASIS_DEGREE
    max_pairs: int = MAX_PAIRS
    max_basis: int = MAX_BASIS_SIZE


DEFAULT_LIMITS = GroebnerLimits()


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic, no leading term divides another."""

    polys: tuple[FpPoly, ...]
    order: MonomialOrder
    nvars: int

    @property
    def lead_monomials(self) -> tuple[Monomial, ...]:
        """Return the leading monomials, in basis order."""
        return tuple(g.lead_monomial for g in self.polys)

    @property
    def is_unit(self) -> bool:
        """Return True when the ideal is the whole ring (no solutions)."""
        return any(not any(m) for m in self.lead_monomials)


def _neg_key(order: MonomialOrder, exps: Monomial) -> tuple[int, tuple[int, ...]]:
    degree, tail = order.key(exps)
    return -degree, tuple(-x for x in tail)


def normal_form(f: FpPoly, basis: Sequence[FpPoly], order: MonomialOrder | None = None) -> FpPoly:
    """Return the fully reduced remainder of ``f`` on division by ``basis``.

    No term of the result is divisible by a leading monomial of ``basis``.
    """
    order = order or f.order
    divisors = [
        (g.lead_monomial, pow(g.lead_coeff, -1, g.p), g) for g in basis if not g.is_zero
    ]
    p = f.p
    work = dict(f.terms)
    heap = [(_neg_key(order, e), e) for e in work]
    heapq.heapify(heap)
    remainder: dict[Monomial, int] = {}
    while heap:
        _, lead = heapq.heappop(heap)
        coeff = work.pop(lead, 0)
        if not coeff:
            continue
        for lm, lc_inv, g in divisors:
            if monomial_divides(lm, lead):
                shift = tuple(a - b for a, b in zip(lead, lm, strict=True))
                factor = coeff * lc_inv % p
                for exps, c in g.terms.items():
                    if exps == lm:
                        continue
                    target = tuple(a + b for a, b in zip(exps, shift, strict=True))
                    if target in work:
                        value = (work[target] - factor * c) % p
                        if value:
                            work[target] = value
                        else:
                            del work[target]
                    else:
                        work[target] = -factor * c % p
                        heapq.heappush(heap, (_neg_key(order, target), target))
                break
        else:
            remainder[lead] = coeff
    return FpPoly._trusted(f.nvars, p, remainder, order)


def s_polynomial(f: FpPoly, g: FpPoly) -> FpPoly:
    """Return the S-polynomial of two monic-or-not polynomials."""
    lcm = monomial_lcm(f.lead_monomial, g.lead_monomial)
    left = f.mul_term(
        tuple(a - b for a, b in zip(lcm, f.lead_monomial, strict=True)),
        pow(f.lead_coeff, -1, f.p),
    )
    right = g.mul_term(
        tuple(a - b for a, b in zip(lcm, g.lead_monomial, strict=True)),
        pow(g.lead_coeff, -1, g.p),
    )
    return left - right


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b, strict=True))


class _Buchberger:
    """State of one basis computation (the Gebauer-Moeller installation)."""

    def __init__(self, order: MonomialOrder, limits: GroebnerLimits) -> None:
        self.order = order
        self.limits = limits
        self.polys: list[FpPoly] = []
        self.active: set[int] = set()
        self.pairs: set[Pair] = set()
        self.queue: list[tuple[tuple[int, tuple[int, ...]], Pair]] = []
        self.processed = 0

    def lm(self, index: int) -> Monomial:
        return self.polys[index].lead_monomial

    def _push(self, pair: Pair) -> None:
        lcm = monomial_lcm(self.lm(pair[0]), self.lm(pair[1]))
        self.pairs.add(pair)
        heapq.heappush(self.queue, (self.order.key(lcm), pair))

    def add(self, h: FpPoly) -> None:
        """Insert a new monic polynomial, updating pairs by the two criteria."""
        if h.degree > self.limits.max_degree:
            raise ResourceLimitExceeded(
                f"basis element of degree {h.degree} exceeds cap {self.limits.max_degree}"
            )
        ih = len(self.polys)
        self.polys.append(h)
        mh = h.lead_monomial

        candidates = sorted(self.active)
        kept: list[int] = []
        for pos, ig in enumerate(candidates):
            lcm_hg = monomial_lcm(mh, self.lm(ig))
            if _coprime(mh, self.lm(ig)):
                kept.append(ig)
                continue
            others = [*candidates[pos + 1 :], *kept]
            if not any(
                monomial_divides(monomial_lcm(mh, self.lm(ix)), lcm_hg) for ix in others
            ):
                kept.append(ig)
        new_pairs = [(ig, ih) for ig in kept if not _coprime(mh, self.lm(ig))]

        for pair in list(self.pairs):
            lcm12 = monomial_lcm(self.lm(pair[0]), self.lm(pair[1]))
            if (
                monomial_divides(mh, lcm12)
                and monomial_lcm(self.lm(pair[0]), mh) != lcm12
                and monomial_lcm(self.lm(pair[1]), mh) != lcm12
            ):
                self.pairs.discard(pair)
        for pair in new_pairs:
            self._push(pair)

        self.active = {ig for ig in self.active if not monomial_divides(mh, self.lm(ig))}
        self.active.add(ih)
        if len(self.active) > self.limits.max_basis:
            raise ResourceLimitExceeded(
                f"basis grew past {self.limits.max_basis} elements"
            )

    def basis(self) -> list[FpPoly]:
        ordered = sorted(self.active, key=lambda i: self.order.key(self.lm(i)))
        return [self.polys[i] for i in ordered]

    def next_pair(self) -> Pair | None:
        """Pop the pair with the smallest lcm (normal strategy)."""
        while self.queue:
            _, pair = heapq.heappop(self.queue)
            if pair in self.pairs:
                self.pairs.discard(pair)
                return pair
        return None

    def run(self, gens: Iterable[FpPoly]) -> list[FpPoly]:
        for g in sorted(gens, key=lambda f: self.order.key(f.lead_monomial)):
            h = normal_form(g, self.basis(), self.order)
            if not h.is_zero:
                self.add(h.monic())
        while (pair := self.next_pair()) is not None:
            self.processed += 1
            if self.processed > self.limits.max_pairs:
                raise ResourceLimitExceeded(
                    f"processed more than {self.limits.max_pairs} critical pairs"
                )
            spoly = s_polynomial(self.polys[pair[0]], self.polys[pair[1]])
            h = normal_form(spoly, self.basis(), self.order)
            if not h.is_zero:
                self.add(h.monic())
                if not any(h.lead_monomial):
                    break
            if self.processed % 500 == 0:
                _LOGGER.debug(
                    "Processed %d pairs, %d queued, basis size %d",
                    self.processed,
                    len(self.pairs),
                    len(self.active),
                )
        return self.basis()


def _reduce_basis(polys: list[FpPoly], order: MonomialOrder) -> list[FpPoly]:
    """Return the reduced basis: minimal leading terms, tails fully reduced."""
    minimal: list[FpPoly] = []
    for g in sorted(polys, key=lambda f: order.key(f.lead_monomial)):
        if not any(monomial_divides(h.lead_monomial, g.lead_monomial) for h in minimal):
            minimal.append(g)
    reduced = []
    for index, g in enumerate(minimal):
        others = minimal[:index] + minimal[index + 1 :]
        reduced.append(normal_form(g, others, order).monic())
    return sorted(reduced, key=lambda f: order.key(f.lead_monomial), reverse=True)


def buchberger(
    gens: Sequence[FpPoly],
    order: MonomialOrder | None = None,
    limits: GroebnerLimits = DEFAULT_LIMITS,
) -> GroebnerBasis:
    """Return the reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are selected by the normal strategy; the coprime-leading-term and
    chain criteria prune them. Raises ResourceLimitExceeded when a cap is hit.
    """
    if not gens:
        raise FieldError("buchberger needs at least one generator")
    nvars, p = gens[0].nvars, gens[0].p
    if any((g.nvars, g.p) != (nvars, p) for g in gens):
        raise FieldError("generators live in different rings")
    order = order or gens[0].order
    nonzero = [FpPoly._trusted(nvars, p, dict(g.terms), order) for g in gens if not g.is_zero]
    engine = _Buchberger(order, limits)
    raw = engine.run(nonzero)
    polys = tuple(_reduce_basis(raw, order))
    if any(not any(g.lead_monomial) for g in polys):
        polys = (FpPoly.constant(1, nvars, p, order),)
    _LOGGER.debug(
        "Groebner basis of %d generators: %d elements after %d pairs",
        len(gens),
        len(polys),
        engine.processed,
    )
    return GroebnerBasis(polys=polys, order=order, nvars=nvars)


def is_groebner_basis(polys: Sequence[FpPoly], order: MonomialOrder | None = None) -> bool:
    """Return True iff every S-polynomial of ``polys`` reduces to zero."""
    polys = [g for g in polys if not g.is_zero]
    if not polys:
        return True
    order = order or polys[0].order
    return all(
        normal_form(s_polynomial(f, g), polys, order).is_zero
        for i, f in enumerate(polys)
        for g in polys[i + 1 :]
    )


def standard_monomials(basis: GroebnerBasis) -> Iterator[Monomial]:
    """Yield the monomials divisible by no leading monomial (finite staircase only)."""
    leads = basis.lead_monomials
    bounds = _pure_power_bounds(basis)
    if bounds is None:
        raise FieldError("the staircase is infinite")
    if basis.is_unit:
        return
    nvars = basis.nvars

    def walk(prefix: list[int]) -> Iterator[Monomial]:
        position = len(prefix)
        if position == nvars:
            yield tuple(prefix)
            return
        for e in range(bounds[position]):
            prefix.append(e)
            # a prefix already divisible by a lead (padded with zeros) stays divisible
            padded = (*prefix, *([0] * (nvars - position - 1)))
            if not any(monomial_divides(lm, padded) for lm in leads):
                yield from walk(prefix)
            prefix.pop()

    yield from walk([])


def _pure_power_bounds(basis: GroebnerBasis) -> list[int] | None:
    """Return the smallest pure power of each variable among the leads, or None."""
    if basis.is_unit:
        return [0] * basis.nvars
    bounds: list[int] = []
    for v in range(basis.nvars):
        powers = [
            lm[v]
            for lm in basis.lead_monomials
            if lm[v] and all(not e for w, e in enumerate(lm) if w != v)
        ]
        if not powers:
            return None
        bounds.append(min(powers))
    return bounds


def quotient_dimension(basis: GroebnerBasis) -> int | None:
    """Return dim_F_p of the quotient ring, or None when it is infinite."""
    if basis.is_unit:
        return 0
    if _pure_power_bounds(basis) is None:
        return None
    return sum(1 for _ in standard_monomials(basis))
