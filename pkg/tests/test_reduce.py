"""Tests for dimension reduction."""

from __future__ import annotations

import numpy as np

from confcount.instance import Instance, parse_instance, validate
from confcount.reduce import append_marking, common_markings, fully_reduce, reduce_once
from tests.conftest import random_instance

# --- Tests ---


def test_common_markings(row1: Instance, row2: Instance, row3: Instance):
    assert common_markings(row1) == frozenset({2, 3, 4, 5})
    assert common_markings(row2) == frozenset({7})
    assert common_markings(row3) == frozenset()


def test_reduce_once_removes_largest_common_marking(row2: Instance, reduced_row2: Instance):
    reduced, step = reduce_once(row2)
    assert step is not None
    assert step.removed == 7
    assert reduced == reduced_row2
    assert dict(step.relabel) == {1: 1, 2: 2, 3: 3, 4: 4, 5: 5, 6: 6}


def test_reduce_once_relabels_preserving_order(row1: Instance):
    reduced, step = reduce_once(row1)
    assert step is not None
    assert step.removed == 5
    assert dict(step.relabel) == {1: 1, 2: 2, 3: 3, 4: 4, 6: 5}
    assert reduced == Instance.create(r=2, n=5, constraints=[[1, 2, 3, 4], [2, 3, 4, 5]])


def test_reduce_once_is_noop_without_common_marking(row3: Instance):
    reduced, step = reduce_once(row3)
    assert step is None
    assert reduced is row3


def test_reduce_once_stops_at_r_two():
    inst = parse_instance("1234,1235", r=2)
    assert common_markings(inst)
    reduced, step = reduce_once(inst)
    assert step is None
    assert reduced is inst


def test_fully_reduce_row1_stops_at_r_two(row1: Instance):
    trail = fully_reduce(row1)
    assert trail.reduced
    assert len(trail.steps) == 1
    assert trail.final.r == 2
    assert trail.final.as_compact() == "1234,2345"


def test_fully_reduce_preserves_validity():
    inst = parse_instance("123456,234567", r=4)
    trail = fully_reduce(inst)
    assert [step.removed for step in trail.steps] == [6, 5]
    for step in trail.steps:
        assert validate(step.after) == []
        assert step.after.n == step.before.n - 1
        assert step.after.r == step.before.r - 1


def test_fully_reduce_trail_as_dict(row2: Instance):
    data = fully_reduce(row2).as_dict()
    assert data["final"] == {
        "r": 2,
        "n": 6,
        "constraints": [[1, 2, 3, 4], [3, 4, 5, 6], [1, 2, 5, 6]],
    }
    assert data["steps"][0]["removed"] == 7
    assert data["steps"][0]["relabel"]["6"] == 6


def test_fully_reduce_without_steps(row3: Instance):
    trail = fully_reduce(row3)
    assert not trail.reduced
    assert trail.final is row3


def test_append_marking_inverts_reduction(reduced_row2: Instance, row2: Instance):
    assert append_marking(reduced_row2) == row2
    reduced, _ = reduce_once(append_marking(reduced_row2))
    assert reduced == reduced_row2


def test_append_marking_keeps_instance_valid(row1: Instance):
    lifted = append_marking(row1)
    assert lifted.r == 4
    assert lifted.n == 7
    assert validate(lifted) == []


def test_fully_reduce_is_idempotent(row1: Instance, rng: np.random.Generator):
    instances = [row1] + [
        append_marking(append_marking(random_instance(rng, 2, k))) for k in (1, 2, 3) * 3
    ]
    for inst in instances:
        final = fully_reduce(inst).final
        again = fully_reduce(final)
        assert not again.reduced
        assert again.final == final


def test_twice_appended_instance_reduces_back(reduced_row2: Instance):
    inst = append_marking(append_marking(reduced_row2))
    assert inst.r == 4
    assert inst.n == 8
    trail = fully_reduce(inst)
    assert [step.removed for step in trail.steps] == [8, 7]
    assert trail.final == reduced_row2
