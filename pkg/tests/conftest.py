"""Shared test fixtures: published instances and seeded generators."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pytest

from confcount.instance import Instance, parse_instance

ROW1 = "12345,23456"
ROW2 = "12347,34567,12567"
ROW3 = "12345,34567,56781,78123"
ROW4 = "12345,12367,14578,14689,34569"
REDUCED_ROW2 = "1234,3456,1256"


@pytest.fixture
def row1() -> Instance:
    return parse_instance(ROW1, r=3)


@pytest.fixture
def row2() -> Instance:
    return parse_instance(ROW2, r=3)


@pytest.fixture
def row3() -> Instance:
    """The r=3, n=8 worked example (also the third table row)."""
    return parse_instance(ROW3, r=3)


@pytest.fixture
def row4() -> Instance:
    return parse_instance(ROW4, r=3)


@pytest.fixture
def reduced_row2() -> Instance:
    return parse_instance(REDUCED_ROW2, r=2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def random_instance(rng: np.random.Generator, r: int, k: int) -> Instance:
    """Draw a valid instance with k constraints of size r+2 on n = k+r+1 markings."""
    n = k + r + 1
    constraints = [
        sorted(int(x) + 1 for x in rng.choice(n, size=r + 2, replace=False)) for _ in range(k)
    ]
    return Instance.create(r=r, n=n, constraints=constraints)


def relabel_instance(inst: Instance, perm: Sequence[int]) -> Instance:
    """Send marking i to perm[i-1] in every constraint."""
    return Instance.create(
        r=inst.r,
        n=inst.n,
        constraints=([int(perm[i - 1]) for i in c] for c in inst.constraints),
    )
