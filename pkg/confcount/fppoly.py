"""Sparse multivariate polynomials over a prime field."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

from .exceptions import FieldError

type Monomial = tuple[int, ...]
type OrderKey = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: degree reverse lexicographic over a variable permutation.

    ``permutation[0]`` is the largest variable. The identity permutation is used
    when ``permutation`` is None.
    """

    tag: Literal["degrevlex"] = "degrevlex"
    permutation: tuple[int, ...] | None = None

    def key(self, exps: Monomial) -> OrderKey:
        """Return a sort key; a larger key means a larger monomial."""
        if self.permutation is not None:
            exps = tuple(exps[i] for i in self.permutation)
        return sum(exps), tuple(-e for e in reversed(exps))


DEGREVLEX = MonomialOrder()


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """Return True iff x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    """Return the exponent vector of lcm(x^a, x^b)."""
    return tuple(max(x, y) for x, y in zip(a, b, strict=True))


class FpPoly:
    """Polynomial over F_p in ``nvars`` variables with a fixed monomial order.

    Coefficients are residues in 1..p-1; zero coefficients are never stored.
    """

    __slots__ = ("_lead", "nvars", "order", "p", "terms")

    def __init__(
        self,
        nvars: int,
        p: int,
        terms: Mapping[Monomial, int] | None = None,
        order: MonomialOrder = DEGREVLEX,
    ) -> None:
        """Initialize from a monomial -> coefficient map (coefficients reduced mod p)."""
        self.nvars = nvars
        self.p = p
        self.order = order
        cleaned: dict[Monomial, int] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != nvars:
                raise FieldError(f"exponent vector {exps} does not have {nvars} entries")
            value = coeff % p
            if value:
                cleaned[tuple(exps)] = value
        self.terms = cleaned
        self._lead: Monomial | None = None

    @classmethod
    def _trusted(
        cls, nvars: int, p: int, terms: dict[Monomial, int], order: MonomialOrder
    ) -> FpPoly:
        """Wrap an already-clean term map without copying or re-checking it."""
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly.p = p
        poly.order = order
        poly.terms = terms
        poly._lead = None
        return poly

    @classmethod
    def constant(
        cls, value: int, nvars: int, p: int, order: MonomialOrder = DEGREVLEX
    ) -> FpPoly:
        """Return a constant polynomial."""
        return cls(nvars, p, {(0,) * nvars: value}, order)

    @classmethod
    def variable(
        cls, index: int, nvars: int, p: int, order: MonomialOrder = DEGREVLEX
    ) -> FpPoly:
        """Return the polynomial x_index."""
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, p, {tuple(exps): 1}, order)

    def _like(self, terms: dict[Monomial, int]) -> FpPoly:
        return FpPoly._trusted(self.nvars, self.p, terms, self.order)

    def _check(self, other: FpPoly) -> None:
        if (self.nvars, self.p) != (other.nvars, other.p):
            raise FieldError(
                f"ring mismatch: {self.nvars} vars mod {self.p} vs {other.nvars} mod {other.p}"
            )

    @property
    def is_zero(self) -> bool:
        """Return True for the zero polynomial."""
        return not self.terms

    @property
    def lead_monomial(self) -> Monomial:
        """Return the leading exponent vector."""
        if self._lead is None:
            if not self.terms:
                raise FieldError("the zero polynomial has no leading term")
            self._lead = max(self.terms, key=self.order.key)
        return self._lead

    @property
    def lead_coeff(self) -> int:
        """Return the leading coefficient."""
        return self.terms[self.lead_monomial]

    @property
    def degree(self) -> int:
        """Return the total degree (-1 for zero)."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        """Return True if no variable occurs."""
        return all(not any(e) for e in self.terms)

    def monic(self) -> FpPoly:
        """Return the polynomial scaled to leading coefficient 1."""
        if not self.terms:
            return self
        return self.scale(pow(self.lead_coeff, -1, self.p))

    def scale(self, factor: int) -> FpPoly:
        """Return ``factor`` times this polynomial."""
        factor %= self.p
        if not factor:
            return self._like({})
        p = self.p
        return self._like({e: c * factor % p for e, c in self.terms.items()})

    def mul_term(self, exps: Monomial, coeff: int) -> FpPoly:
        """Return coeff * x^exps * self."""
        coeff %= self.p
        if not coeff:
            return self._like({})
        p = self.p
        return self._like(
            {
                tuple(a + b for a, b in zip(e, exps, strict=True)): c * coeff % p
                for e, c in self.terms.items()
            }
        )

    def __add__(self, other: FpPoly | int) -> FpPoly:
        """Add a polynomial or an integer constant."""
        if isinstance(other, int):
            other = FpPoly.constant(other, self.nvars, self.p, self.order)
        self._check(other)
        p = self.p
        terms = dict(self.terms)
        for e, c in other.terms.items():
            value = (terms.get(e, 0) + c) % p
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> FpPoly:
        """Return the additive inverse."""
        return self.scale(-1)

    def __sub__(self, other: FpPoly | int) -> FpPoly:
        """Subtract a polynomial or an integer constant."""
        return self + (-other)

    def __rsub__(self, other: int) -> FpPoly:
        """Return other - self for an integer ``other``."""
        return (-self) + other

    def __mul__(self, other: FpPoly | int) -> FpPoly:
        """Multiply by a polynomial or an integer."""
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        p = self.p
        terms: dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2, strict=True))
                terms[e] = (terms.get(e, 0) + c1 * c2) % p
        return self._like({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        """Compare ring and terms."""
        if isinstance(other, int):
            return self == FpPoly.constant(other, self.nvars, self.p, self.order)
        if not isinstance(other, FpPoly):
            return NotImplemented
        return (self.nvars, self.p, self.terms) == (other.nvars, other.p, other.terms)

    def __hash__(self) -> int:
        """Hash on ring and terms."""
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence[int]) -> int:
        """Evaluate at a point of F_p^nvars."""
        if len(point) != self.nvars:
            raise FieldError(f"point has {len(point)} coordinates, expected {self.nvars}")
        p = self.p
        total = 0
        for exps, coeff in self.terms.items():
            value = coeff
            for x, e in zip(point, exps, strict=True):
                if e:
                    value = value * pow(x, e, p) % p
            total += value
        return total % p

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Return the terms in decreasing monomial order."""
        return sorted(self.terms.items(), key=lambda t: self.order.key(t[0]), reverse=True)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Render as plain text, e.g. ``3*y_4_1^2*u + 2``."""
        if not self.terms:
            return "0"
        labels = list(names) if names is not None else [f"x{i}" for i in range(self.nvars)]
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = [
                labels[i] if e == 1 else f"{labels[i]}^{e}" for i, e in enumerate(exps) if e
            ]
            if not factors:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append("*".join(factors))
            else:
                pieces.append("*".join([str(coeff), *factors]))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        """Return a debugging representation."""
        return f"FpPoly({self.to_text()} mod {self.p})"


def poly_det(matrix: Sequence[Sequence[FpPoly]]) -> FpPoly:
    """Return the determinant of a square matrix of polynomials (cofactor expansion).

    Constant entries are cheap, so expansion along the first row is adequate
    for the r <= 5 matrices built here.
    """
    size = len(matrix)
    if size == 0:
        raise FieldError("determinant of an empty polynomial matrix")
    if any(len(row) != size for row in matrix):
        raise FieldError("determinant of a non-square polynomial matrix")
    if size == 1:
        return matrix[0][0]
    total: FpPoly | None = None
    for col, entry in enumerate(matrix[0]):
        if entry.is_zero:
            continue
        minor = [[row[c] for c in range(size) if c != col] for row in matrix[1:]]
        term = entry * poly_det(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return matrix[0][0].scale(0)
    return total


def from_columns(
    columns: Iterable[Sequence[FpPoly]],
) -> list[list[FpPoly]]:
    """Assemble a row-major matrix from its columns."""
    cols = list(columns)
    return [[col[row] for col in cols] for row in range(len(cols[0]))]
