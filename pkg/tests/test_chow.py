"""Tests for the class-product oracle."""

from __future__ import annotations

import numpy as np
import pytest

from confcount.bounds import bound_table
from confcount.catalog import WORKED_PRUNING, WORKED_TRANSVERSALS
from confcount.chow import (
    TruncatedPoly,
    augment,
    intersection_number,
    intersection_numbers,
    lambda_class,
)
from confcount.exceptions import ChowError, GraphError
from confcount.instance import Instance, parse_instance
from tests.conftest import random_instance

# --- Tests ---


def test_worked_example_intersection(row3: Instance):
    assert intersection_number(row3, WORKED_PRUNING) == WORKED_TRANSVERSALS


def test_oracle_matches_transversal_dp(row1: Instance, row2: Instance, reduced_row2: Instance):
    for inst in (row1, row2, reduced_row2):
        table = bound_table(inst)
        assert intersection_numbers(inst) == {row.pruned: row.bound for row in table.rows}


def test_oracle_matches_on_random_instances(rng: np.random.Generator):
    shapes = [(2, k) for k in range(1, 5)] + [(3, 1), (3, 2)]
    for trial in range(60):
        r, k = shapes[trial % len(shapes)]
        inst = random_instance(rng, r, k)
        table = bound_table(inst)
        expected = {row.pruned: row.bound for row in table.rows}
        assert intersection_numbers(inst) == expected, str(inst)


@pytest.mark.parametrize("k", [3, 4])
def test_oracle_matches_on_random_r_three_instances(k: int, rng: np.random.Generator):
    for _ in range(8):
        inst = random_instance(rng, 3, k)
        expected = {row.pruned: row.bound for row in bound_table(inst).rows}
        assert intersection_numbers(inst) == expected, str(inst)


def test_uncovered_marking_gives_zero():
    inst = parse_instance("1234,1234", r=2)
    d = augment(inst, (1, 2, 3))
    assert d.degenerate == (5,)
    assert intersection_number(inst, (1, 2, 3)) == 0
    with pytest.raises(ChowError):
        lambda_class(d, 5)


def test_augment_neighborhoods(row3: Instance):
    d = augment(row3, WORKED_PRUNING)
    assert d.zero_constraint == frozenset({0, 1, 3, 5, 7})
    assert d.neighborhoods[0] == frozenset({0})
    assert d.neighborhoods[1] == frozenset({0, 1, 3, 4})
    assert d.neighborhoods[2] == frozenset({1, 4})
    assert d.cap == 8
    assert not d.degenerate


def test_augment_rejects_bad_pruning(row3: Instance):
    with pytest.raises(GraphError):
        augment(row3, (1, 2, 3))


def test_lambda_class_for_pruned_marking(row3: Instance):
    d = augment(row3, WORKED_PRUNING)
    cls = lambda_class(d, 1)
    assert cls.terms == {(2, 0, 2, 2): 1}
    assert lambda_class(d, 0) == TruncatedPoly.one(4, 8)


def test_lambda_class_is_rectangular_schur_expansion(row3: Instance):
    d = augment(row3, WORKED_PRUNING)
    cls = lambda_class(d, 2)
    assert cls.terms == {(0, 0, 0, 2): 1, (1, 0, 0, 1): 1, (2, 0, 0, 0): 1}


def test_truncated_poly_arithmetic():
    x = TruncatedPoly.monomial((1, 0), cap=2)
    y = TruncatedPoly.monomial((0, 1), cap=2)
    square = (x + y) * (x + y)
    assert square.terms == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert (square * x).terms == {(2, 1): 2, (1, 2): 1}
    assert (x * x * x).is_zero
    assert TruncatedPoly.monomial((3, 0), cap=2).is_zero
    assert (x + TruncatedPoly.monomial((1, 0), cap=2, coeff=-1)).is_zero
    assert square.coefficient((1, 1)) == 2
    assert square.coefficient((2, 2)) == 0


def test_multiply_floor_drops_terms():
    x = TruncatedPoly.monomial((1, 0), cap=2)
    y = TruncatedPoly.monomial((0, 1), cap=2)
    product = (x + y).multiply(x + y, floor=(1, 0))
    assert product.terms == {(2, 0): 1, (1, 1): 2}


def test_ring_mismatch():
    with pytest.raises(ChowError):
        _ = TruncatedPoly.one(2, 2) + TruncatedPoly.one(2, 3)
    with pytest.raises(ChowError):
        _ = TruncatedPoly.one(2, 2) * TruncatedPoly.one(3, 2)
