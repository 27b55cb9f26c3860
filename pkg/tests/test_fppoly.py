"""Tests for sparse polynomials over F_p."""

from __future__ import annotations

import pytest

from confcount.exceptions import FieldError
from confcount.fppoly import (
    DEGREVLEX,
    FpPoly,
    MonomialOrder,
    from_columns,
    monomial_divides,
    monomial_lcm,
    poly_det,
)

P = 7

# --- Helpers ---


def _vars(nvars: int = 3, p: int = P, order: MonomialOrder = DEGREVLEX) -> list[FpPoly]:
    return [FpPoly.variable(i, nvars, p, order) for i in range(nvars)]


# --- Tests ---


def test_degrevlex_order():
    x, y, z = _vars()
    assert (x + y + z).lead_monomial == (1, 0, 0)
    assert (x * z + y * y).lead_monomial == (0, 2, 0)
    assert (x * y * z + x * x).lead_monomial == (1, 1, 1)
    assert (x * y * y + x * x * z).lead_monomial == (1, 2, 0)


def test_permuted_order():
    order = MonomialOrder(permutation=(2, 1, 0))
    x, y, z = _vars(order=order)
    assert (x + y + z).lead_monomial == (0, 0, 1)
    assert order.key((0, 0, 1)) > order.key((1, 0, 0))


def test_monomial_helpers():
    assert monomial_divides((1, 0, 2), (1, 1, 2))
    assert not monomial_divides((1, 0, 3), (1, 1, 2))
    assert monomial_lcm((1, 0, 3), (2, 1, 0)) == (2, 1, 3)


def test_arithmetic():
    x, y, _ = _vars()
    product = (x + 1) * (x - 1)
    assert product == x * x - 1
    assert product.terms == {(2, 0, 0): 1, (0, 0, 0): P - 1}
    assert (x + y) - (x + y) == 0
    assert (3 * x).lead_coeff == 3
    assert (x * 8) == x
    assert 2 - x == -(x - 2)
    assert (x * y).degree == 2
    assert FpPoly(3, P).degree == -1


def test_coefficients_reduce_modulo_p():
    poly = FpPoly(2, P, {(1, 0): 9, (0, 1): 14, (0, 0): -1})
    assert poly.terms == {(1, 0): 2, (0, 0): 6}


def test_monic_and_scale():
    x, y, _ = _vars()
    poly = 3 * x * y + 2
    monic = poly.monic()
    assert monic.lead_coeff == 1
    assert monic * 3 == poly
    assert poly.scale(0).is_zero
    assert FpPoly(3, P).monic().is_zero


def test_mul_term():
    x, y, z = _vars()
    assert (x + y).mul_term((0, 1, 1), 2) == 2 * x * y * z + 2 * y * y * z
    assert (x + y).mul_term((1, 0, 0), P).is_zero


def test_constants_and_equality():
    assert FpPoly.constant(3, 2, P) == 3
    assert FpPoly.constant(3, 2, P).is_constant()
    assert FpPoly.constant(0, 2, P) == 0
    assert not FpPoly.variable(0, 2, P).is_constant()
    assert FpPoly.constant(1, 2, P) != FpPoly.constant(1, 2, 11)
    assert len({FpPoly.constant(1, 2, P), FpPoly.constant(8, 2, P)}) == 1


def test_errors():
    with pytest.raises(FieldError):
        _ = FpPoly(2, P).lead_monomial
    with pytest.raises(FieldError):
        FpPoly(2, P, {(1, 0, 0): 1})
    with pytest.raises(FieldError):
        _ = FpPoly.variable(0, 2, P) + FpPoly.variable(0, 3, P)
    with pytest.raises(FieldError):
        FpPoly.variable(0, 2, P).evaluate([1])


def test_evaluate():
    x, y, z = _vars()
    poly = x * x * y + 3 * z + 5
    assert poly.evaluate([2, 3, 4]) == (12 + 12 + 5) % P
    assert FpPoly(3, P).evaluate([1, 2, 3]) == 0


def test_to_text():
    x, y, _ = _vars()
    poly = 3 * x * x * y + 2
    assert poly.to_text(["a", "b", "u"]) == "3*a^2*b + 2"
    assert x.to_text() == "x0"
    assert FpPoly(3, P).to_text() == "0"
    assert repr(poly) == "FpPoly(3*x0^2*x1 + 2 mod 7)"


def test_poly_det():
    x, y, _ = _vars()
    one = FpPoly.constant(1, 3, P)
    zero = FpPoly(3, P)
    assert poly_det([[x, one], [one, y]]) == x * y - 1
    assert poly_det([[x]]) == x
    assert poly_det([[zero, zero], [x, y]]).is_zero
    identity = [[one if i == j else zero for j in range(3)] for i in range(3)]
    assert poly_det(identity) == 1
    assert poly_det([[zero, one], [one, zero]]) == -1


def test_poly_det_rejects_bad_shapes():
    x, _, _ = _vars()
    with pytest.raises(FieldError):
        poly_det([])
    with pytest.raises(FieldError):
        poly_det([[x, x]])


def test_from_columns():
    x, y, z = _vars()
    assert from_columns([[x, y], [z, x]]) == [[x, z], [y, x]]
