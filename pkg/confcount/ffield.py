"""Prime-field arithmetic, determinants and sampling of linearly general configurations."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .const import MAX_PRIME, SAMPLING_RETRY_CAP
from .exceptions import FieldError, SamplingError

_LOGGER = logging.getLogger(__name__)

# Deterministic Miller-Rabin witnesses for every n < 3.3 * 10**24.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(p: int) -> bool:
    """Return True iff ``p`` is prime."""
    if p < 2:
        return False
    for w in _WITNESSES:
        if p % w == 0:
            return p == w
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _WITNESSES:
        x = pow(w, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime below 2^31, else raise FieldError."""
    if not 2 <= p < MAX_PRIME or not is_prime(p):
        raise FieldError(f"{p} is not a prime below 2^31")
    return p


def inverse(a: int, p: int) -> int:
    """Return the inverse of ``a`` modulo ``p``."""
    if a % p == 0:
        raise FieldError("zero has no inverse")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FpMatrix:
    """Immutable row-major matrix over F_p."""

    p: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: int) -> FpMatrix:
        """Build a matrix, reducing every entry modulo ``p``."""
        return cls(p, tuple(tuple(int(x) % p for x in row) for row in rows))

    @classmethod
    def identity(cls, size: int, p: int) -> FpMatrix:
        """Return the identity matrix."""
        return cls(p, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @property
    def shape(self) -> tuple[int, int]:
        """Return (rows, columns)."""
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def column(self, index: int) -> tuple[int, ...]:
        """Return one column."""
        return tuple(row[index] for row in self.rows)

    def select_columns(self, indices: Sequence[int]) -> FpMatrix:
        """Return the submatrix on the given columns, in the given order."""
        return FpMatrix(self.p, tuple(tuple(row[c] for c in indices) for row in self.rows))

    def scale_column(self, index: int, factor: int) -> FpMatrix:
        """Return a copy with one column multiplied by ``factor``."""
        return FpMatrix(
            self.p,
            tuple(
                tuple(x * factor % self.p if c == index else x for c, x in enumerate(row))
                for row in self.rows
            ),
        )

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        """Return the matrix product."""
        if self.p != other.p or self.shape[1] != other.shape[0]:
            raise FieldError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.shape[1])]
        return FpMatrix(
            self.p,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col, strict=True)) % self.p for col in cols)
                for row in self.rows
            ),
        )


def det(m: FpMatrix) -> int:
    """Return the determinant by fraction-free (Bareiss) elimination modulo p."""
    size, width = m.shape
    if size != width:
        raise FieldError(f"determinant of a non-square {size}x{width} matrix")
    if size == 0:
        return 1
    p = m.p
    a = [list(row) for row in m.rows]
    sign = 1
    previous = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, size) if a[i][k]), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        scale = inverse(previous, p)
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) * scale % p
        previous = a[k][k]
    return sign * a[size - 1][size - 1] % p


def all_minors_nonzero(m: FpMatrix) -> bool:
    """Return True iff every maximal (rows x rows) minor is nonzero."""
    size, width = m.shape
    return all(det(m.select_columns(cols)) for cols in combinations(range(width), size))


def random_residue(rng: np.random.Generator, p: int, *, nonzero: bool = False) -> int:
    """Draw a uniform element of F_p (or of F_p minus zero)."""
    low = 1 if nonzero else 0
    return int(rng.integers(low, p))


def sample_general_config(
    r: int,
    labels: Sequence[int],
    p: int,
    rng: np.random.Generator,
    *,
    retry_cap: int = SAMPLING_RETRY_CAP,
) -> FpMatrix:
    """Sample an r x len(labels) matrix whose r x r minors are all nonzero.

    Columns are homogeneous coordinates of points of P^(r-1)(F_p) in linearly
    general position. Raises SamplingError after ``retry_cap`` rejections.
    """
    if len(labels) < r:
        raise FieldError(f"need at least r={r} points, got {len(labels)}")
    for attempt in range(1, retry_cap + 1):
        candidate = FpMatrix.from_rows(
            ([random_residue(rng, p) for _ in labels] for _ in range(r)), p
        )
        if all_minors_nonzero(candidate):
            if attempt > 1:
                _LOGGER.debug("General configuration found after %d attempts", attempt)
            return candidate
    raise SamplingError(
        f"no linearly general configuration of {len(labels)} points in P^{r - 1}(F_{p}) "
        f"after {retry_cap} attempts"
    )


def trial_streams(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Return ``count`` independent child seed sequences of the master ``seed``."""
    return np.random.SeedSequence(seed).spawn(count)


def make_rng(stream: np.random.SeedSequence) -> np.random.Generator:
    """Return a counter-based (Philox) generator for one stream."""
    return np.random.Generator(np.random.Philox(stream))
