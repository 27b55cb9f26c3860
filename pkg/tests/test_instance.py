"""Tests for instance parsing, validation and serialization."""

from __future__ import annotations

import json

import pytest

from confcount.exceptions import InvalidInstanceError
from confcount.instance import (
    Instance,
    ensure_valid,
    instance_to_dict,
    moduli_dimension,
    parse_instance,
    serialize_instance,
    validate,
)

# --- Tests ---


def test_parse_compact_infers_n(row3: Instance):
    assert row3.r == 3
    assert row3.n == 8
    assert row3.k == 4
    assert row3.constraints[2] == (1, 5, 6, 7, 8)


def test_parse_compact_sorts_each_constraint():
    inst = parse_instance("4321,5432", r=2)
    assert inst.constraints == ((1, 2, 3, 4), (2, 3, 4, 5))


def test_parse_compact_requires_r():
    with pytest.raises(InvalidInstanceError, match="requires r"):
        parse_instance("12345")


def test_parse_compact_explicit_n_mismatch():
    with pytest.raises(InvalidInstanceError) as excinfo:
        parse_instance("12345,23456,34567", r=3, n=8)
    assert excinfo.value.violations == ("k=3 ≠ n−r−1=4",)


def test_parse_compact_explicit_n_agrees():
    assert parse_instance("12345,23456", r=3, n=6).n == 6


def test_parse_compact_wrong_subset_size():
    with pytest.raises(InvalidInstanceError, match="subset size 3 ≠ r\\+2=4"):
        parse_instance("123,2345", r=2)


def test_parse_compact_rejects_label_zero():
    with pytest.raises(InvalidInstanceError, match="label 0"):
        parse_instance("0123", r=2)


def test_parse_compact_rejects_duplicates():
    with pytest.raises(InvalidInstanceError, match="duplicate"):
        parse_instance("1123", r=2)


def test_parse_compact_rejects_garbage():
    with pytest.raises(InvalidInstanceError, match="malformed"):
        parse_instance("12a4", r=2)


def test_parse_compact_empty_is_k_zero():
    with pytest.raises(InvalidInstanceError) as excinfo:
        parse_instance("  ", r=2)
    assert "k=0: no constraints" in excinfo.value.violations


def test_parse_compact_label_beyond_inferred_n():
    with pytest.raises(InvalidInstanceError, match="exceeds inferred n=5"):
        parse_instance("1236,2345", r=2)


def test_parse_json_allows_large_n():
    text = json.dumps(
        {
            "r": 2,
            "n": 10,
            "constraints": [
                [1, 2, 3, 4],
                [2, 3, 4, 5],
                [3, 4, 5, 6],
                [4, 5, 6, 7],
                [5, 6, 7, 8],
                [6, 7, 8, 9],
                [7, 8, 9, 10],
            ],
        }
    )
    inst = parse_instance(text, "json")
    assert inst.n == 10
    assert inst.k == 7


def test_parse_json_schema_violation():
    with pytest.raises(InvalidInstanceError, match="schema"):
        parse_instance('{"r": 2, "n": 5}', "json")


def test_parse_json_malformed():
    with pytest.raises(InvalidInstanceError, match="malformed JSON"):
        parse_instance("{not json", "json")


def test_validate_reports_every_violation():
    inst = Instance(r=2, n=6, constraints=((1, 2, 3), (4, 3, 9, 9)))
    violations = validate(inst)
    assert "k=2 ≠ n−r−1=3" in violations
    assert "constraint 1: size 3 ≠ r+2=4" in violations
    assert "constraint 2: duplicate elements" in violations
    assert "constraint 2: labels [9] outside 1..6" in violations
    assert "constraint 2: not sorted" in violations


def test_validate_rejects_r_below_two():
    inst = Instance.create(r=1, n=4, constraints=[[1, 2, 3], [2, 3, 4]])
    assert "r=1 < 2" in validate(inst)


def test_ensure_valid_passes_valid_instance(row2: Instance):
    assert ensure_valid(row2) is row2


def test_moduli_dimension(row3: Instance):
    assert moduli_dimension(row3) == 8


def test_serialize_json_then_parse(row3: Instance):
    assert parse_instance(serialize_instance(row3), "json") == row3


def test_serialize_compact(row2: Instance):
    assert serialize_instance(row2, "compact") == "12347,34567,12567"
    assert row2.as_compact() == "12347,34567,12567"


def test_serialize_compact_rejects_large_n():
    inst = Instance.create(r=2, n=10, constraints=[[1, 2, 3, 10]] * 7)
    with pytest.raises(InvalidInstanceError, match="n ≤ 9"):
        serialize_instance(inst, "compact")


def test_instance_to_dict(row1: Instance):
    assert instance_to_dict(row1) == {
        "r": 3,
        "n": 6,
        "constraints": [[1, 2, 3, 4, 5], [2, 3, 4, 5, 6]],
    }


def test_str_is_readable(row1: Instance):
    assert str(row1) == "r=3 n=6 (12345,23456)"
