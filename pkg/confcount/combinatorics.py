"""Configuration graphs, pruning, matchings, weighted transversals and surplus."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .exceptions import GraphError
from .instance import Instance

_LOGGER = logging.getLogger(__name__)

type Edge = tuple[int, int]


@dataclass(frozen=True)
class ConfigGraph:
    """Bipartite graph with marking labels on the left and constraint indices on the right.

    Edge ``(i, j)`` means marking ``i`` belongs to constraint ``I_j``.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: frozenset[Edge]

    @property
    def balanced(self) -> bool:
        """Return True when both sides have the same number of vertices."""
        return len(self.left) == len(self.right)

    def left_neighbors(self, i: int) -> tuple[int, ...]:
        """Return the right vertices adjacent to left vertex ``i``, ascending."""
        return tuple(sorted(j for (a, j) in self.edges if a == i))

    def right_neighbors(self, j: int) -> tuple[int, ...]:
        """Return the left vertices adjacent to right vertex ``j``, ascending."""
        return tuple(sorted(i for (i, b) in self.edges if b == j))

    def degree(self, i: int) -> int:
        """Return the degree of left vertex ``i``."""
        return sum(1 for (a, _) in self.edges if a == i)

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-ready edge list (debugging aid, no stable format)."""
        return {
            "left": list(self.left),
            "right": list(self.right),
            "edges": [list(e) for e in sorted(self.edges)],
        }


@dataclass(frozen=True)
class Transversal:
    """An m-weighted transversal: edge weights summing to ``level`` at every vertex."""

    level: int
    weights: Mapping[Edge, int] = field(default_factory=dict)

    def __add__(self, other: Transversal) -> Transversal:
        """Add two transversals edgewise; the levels add as well."""
        summed: dict[Edge, int] = dict(self.weights)
        for edge, weight in other.weights.items():
            summed[edge] = summed.get(edge, 0) + weight
        return Transversal(level=self.level + other.level, weights=summed)

    def is_valid_for(self, g: ConfigGraph) -> bool:
        """Return True if this is an element of T_level(g)."""
        if any(w < 0 for w in self.weights.values()):
            return False
        if any(edge not in g.edges for edge, w in self.weights.items() if w):
            return False
        left_sums = dict.fromkeys(g.left, 0)
        right_sums = dict.fromkeys(g.right, 0)
        for (i, j), weight in self.weights.items():
            left_sums[i] += weight
            right_sums[j] += weight
        return all(s == self.level for s in left_sums.values()) and all(
            s == self.level for s in right_sums.values()
        )


def build_graph(inst: Instance) -> ConfigGraph:
    """Return the configuration graph with n left and k right vertices."""
    edges = frozenset(
        (i, j) for j, constraint in enumerate(inst.constraints, start=1) for i in constraint
    )
    return ConfigGraph(
        left=tuple(range(1, inst.n + 1)),
        right=tuple(range(1, inst.k + 1)),
        edges=edges,
    )


def prune(g: ConfigGraph, pruned: Iterable[int]) -> ConfigGraph:
    """Delete the left vertices in ``pruned`` and their edges.

    The pruning set must have exactly ``|left| - |right|`` elements (r+1 for a
    configuration graph), so the result is balanced.
    """
    removed = frozenset(pruned)
    if not removed <= frozenset(g.left):
        raise GraphError(f"pruning set {sorted(removed)} is not a subset of the left vertices")
    expected = len(g.left) - len(g.right)
    if len(removed) != expected:
        raise GraphError(f"pruning set has {len(removed)} markings, expected {expected}")
    return ConfigGraph(
        left=tuple(i for i in g.left if i not in removed),
        right=g.right,
        edges=frozenset(e for e in g.edges if e[0] not in removed),
    )


def _require_balanced(g: ConfigGraph) -> None:
    if not g.balanced:
        raise GraphError(
            f"graph is unbalanced: {len(g.left)} left vs {len(g.right)} right vertices"
        )


def maximum_matching(g: ConfigGraph) -> dict[int, int]:
    """Return a maximum matching as a map right vertex -> left vertex (augmenting paths)."""
    adjacency = {i: g.left_neighbors(i) for i in g.left}
    match_right: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adjacency[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_right or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    for i in g.left:
        augment(i, set())
    return match_right


def has_perfect_matching(g: ConfigGraph) -> bool:
    """Return True iff the balanced graph ``g`` has a perfect matching."""
    _require_balanced(g)
    return len(maximum_matching(g)) == len(g.left)


def hall_violator(g: ConfigGraph) -> tuple[int, ...] | None:
    """Return a left subset A with |N(A)| < |A|, or None if Hall's condition holds.

    Exhaustive over all left subsets, smallest first; intended for |left| <= 20.
    """
    neighborhoods = {i: frozenset(g.left_neighbors(i)) for i in g.left}
    for size in range(1, len(g.left) + 1):
        for subset in combinations(g.left, size):
            reach: frozenset[int] = frozenset().union(*(neighborhoods[i] for i in subset))
            if len(reach) < size:
                return subset
    return None


def count_weighted_transversals(g: ConfigGraph, m: int) -> int:
    """Return |T_m(g)|.

    Dynamic program over the right vertices. The state is the vector of residual
    capacities of the left vertices, packed radix (m+1) into an int. A left
    vertex whose last neighbor has been processed must have residual 0, which
    keeps the state space small.
    """
    _require_balanced(g)
    if m < 1:
        raise GraphError(f"transversal level must be at least 1, got {m}")
    if not g.left:
        return 1

    position = {i: p for p, i in enumerate(g.left)}
    base = m + 1
    powers = [base**p for p in range(len(g.left))]
    neighbors = {j: tuple(position[i] for i in g.right_neighbors(j)) for j in g.right}
    if any(not neighbors[j] for j in g.right):
        return 0

    last_seen: dict[int, int] = {}
    for step, j in enumerate(g.right):
        for p in neighbors[j]:
            last_seen[p] = step
    if len(last_seen) < len(g.left):
        return 0  # isolated left vertex
    closes_at: dict[int, list[int]] = {}
    for p, step in last_seen.items():
        closes_at.setdefault(step, []).append(p)

    start = sum(m * powers[p] for p in range(len(g.left)))
    states: dict[int, int] = {start: 1}
    for step, j in enumerate(g.right):
        slots = neighbors[j]
        closing = closes_at.get(step, [])
        updated: dict[int, int] = {}
        for state, ways in states.items():
            capacities = [(state // powers[p]) % base for p in slots]
            for taken in _bounded_compositions(m, capacities):
                nxt = state - sum(t * powers[p] for t, p in zip(taken, slots, strict=True))
                if any((nxt // powers[p]) % base for p in closing):
                    continue
                updated[nxt] = updated.get(nxt, 0) + ways
        states = updated
        if not states:
            return 0
    return states.get(0, 0)


def _bounded_compositions(total: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    """Yield tuples t with sum(t) == total and 0 <= t[x] <= caps[x]."""
    if not caps:
        if total == 0:
            yield ()
        return
    head, rest = caps[0], caps[1:]
    room = sum(rest)
    for first in range(max(0, total - room), min(head, total) + 1):
        for tail in _bounded_compositions(total - first, rest):
            yield (first, *tail)


def enumerate_weighted_transversals(g: ConfigGraph, m: int) -> Iterator[Transversal]:
    """Yield every element of T_m(g) by backtracking over the edges.

    Independent of :func:`count_weighted_transversals`; used as its oracle.
    """
    _require_balanced(g)
    edges = sorted(g.edges)
    left_left = dict.fromkeys(g.left, m)
    right_left = dict.fromkeys(g.right, m)
    remaining_left = dict.fromkeys(g.left, 0)
    remaining_right = dict.fromkeys(g.right, 0)
    for i, j in edges:
        remaining_left[i] += 1
        remaining_right[j] += 1
    chosen: dict[Edge, int] = {}

    def walk(pos: int) -> Iterator[Transversal]:
        if pos == len(edges):
            if all(v == 0 for v in left_left.values()) and all(
                v == 0 for v in right_left.values()
            ):
                yield Transversal(level=m, weights=dict(chosen))
            return
        i, j = edges[pos]
        remaining_left[i] -= 1
        remaining_right[j] -= 1
        top = min(left_left[i], right_left[j])
        for weight in range(top + 1):
            # the last edge at a vertex must absorb its full residual
            if remaining_left[i] == 0 and left_left[i] != weight:
                continue
            if remaining_right[j] == 0 and right_left[j] != weight:
                continue
            left_left[i] -= weight
            right_left[j] -= weight
            chosen[(i, j)] = weight
            yield from walk(pos + 1)
            left_left[i] += weight
            right_left[j] += weight
        chosen.pop((i, j), None)
        remaining_left[i] += 1
        remaining_right[j] += 1

    if any(left_left[i] and remaining_left[i] == 0 for i in g.left):
        return
    if any(right_left[j] and remaining_right[j] == 0 for j in g.right):
        return
    yield from walk(0)


def count_perfect_matchings(g: ConfigGraph) -> int:
    """Return the number of perfect matchings (1-weighted transversals)."""
    return count_weighted_transversals(g, 1)


def surplus(inst: Instance) -> int:
    """Return min over nonempty J of |union of I_j, j in J| - |J|.

    Exhaustive over the 2^k - 1 subsets; exponential in k (fine for k <= 20).
    """
    return _surplus_search(inst)[0]


def surplus_witness(inst: Instance) -> tuple[int, ...]:
    """Return a nonempty J (1-based) attaining the surplus; smallest |J|, then lexicographic."""
    return _surplus_search(inst)[1]


def _surplus_search(inst: Instance) -> tuple[int, tuple[int, ...]]:
    if inst.k == 0:
        raise GraphError("surplus is undefined for k=0")
    masks = [sum(1 << i for i in c) for c in inst.constraints]
    best = (masks[0].bit_count() - 1, (1,))
    for size in range(1, inst.k + 1):
        for subset in combinations(range(inst.k), size):
            union = 0
            for index in subset:
                union |= masks[index]
            value = union.bit_count() - size
            if value < best[0]:
                best = (value, tuple(index + 1 for index in subset))
    return best


def surplus_condition(inst: Instance) -> bool:
    """Return True iff the surplus equals r+1."""
    return surplus(inst) == inst.r + 1


def surplus_condition_via_matchings(inst: Instance) -> bool:
    """Return True iff every pruning by an (r+1)-set has a perfect matching."""
    g = build_graph(inst)
    for pruned in combinations(g.left, inst.r + 1):
        if not has_perfect_matching(prune(g, pruned)):
            _LOGGER.debug("Pruning %s of %s has no perfect matching", pruned, inst)
            return False
    return True


def uncovered_markings(inst: Instance) -> tuple[int, ...]:
    """Return the markings that lie in no constraint."""
    covered = set().union(*inst.constraints) if inst.constraints else set()
    return tuple(i for i in inst.markings if i not in covered)
