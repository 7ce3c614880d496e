"""Finite state spaces, partitions, cylinder words and Shannon entropy.

All logarithms are natural; conversion to other bases happens only at the
output layer (see :mod:`sdentropy.cli`).

Distributions may hold exact :class:`fractions.Fraction` weights.  In that
case every mass computed downstream stays rational, which lets the test
suite compare cylinder masses exactly instead of within a float tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StateSpace",
    "Partition",
    "CellWord",
    "Distribution",
    "phi",
    "dist_entropy",
    "join",
    "refines",
    "preimage_partition",
    "product_partition",
    "power_partition",
    "cell_mass",
    "DIST_TOL",
]

#: tolerance for the normalisation of float distributions
DIST_TOL = 1e-12


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class StateSpace:
    """A finite alphabet ``{0, ..., k-1}`` with display labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 1:
            raise ValueError("a state space needs at least one state")
        if len(set(labels)) != len(labels):
            raise ValueError(f"state labels must be distinct: {labels}")

    @classmethod
    def range(cls, k: int) -> "StateSpace":
        return cls(tuple(str(i) for i in range(k)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        """Index of ``label``; integers are accepted as indices."""
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if not 0 <= label < self.size:
                raise IndexError(f"state index {label} out of range 0..{self.size - 1}")
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown state label {label!r}") from None

    @property
    def full(self) -> frozenset[int]:
        return frozenset(range(self.size))

    def product(self, other: "StateSpace") -> "StateSpace":
        # pair (x, y) has index x * |Y| + y
        return StateSpace(tuple(f"({a},{b})" for a in self.labels for b in other.labels))

    def power(self, k: int) -> "StateSpace":
        # mixed radix, first coordinate most significant
        if k < 1:
            raise ValueError("power needs k >= 1")
        if k == 1:
            return self
        return StateSpace(tuple("(" + ",".join(t) + ")" for t in _cartesian(self.labels, repeat=k)))


def _as_cell(cell: Iterable, size: int) -> frozenset[int]:
    c = frozenset(int(i) for i in cell)
    for i in c:
        if not 0 <= i < size:
            raise IndexError(f"state index {i} out of range 0..{size - 1}")
    return c


@dataclass(frozen=True)
class Partition:
    """An ordered finite partition of a state space into nonempty cells.

    Cell order is kept for reproducible output; entropies never depend on it.
    Use :meth:`same_cells` for order-free comparison.
    """

    space: StateSpace
    cells: tuple[frozenset[int], ...]

    def __post_init__(self):
        cells = tuple(_as_cell(c, self.space.size) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        seen: set[int] = set()
        for c in cells:
            if not c:
                raise ValueError("partition cells must be nonempty")
            if seen & c:
                raise ValueError(f"partition cells overlap on {sorted(seen & c)}")
            seen |= c
        if seen != set(range(self.space.size)):
            missing = sorted(set(range(self.space.size)) - seen)
            raise ValueError(f"partition does not cover states {missing}")

    @classmethod
    def singletons(cls, space: StateSpace) -> "Partition":
        return cls(space, tuple(frozenset([i]) for i in range(space.size)))

    @classmethod
    def trivial(cls, space: StateSpace) -> "Partition":
        return cls(space, (space.full,))

    @classmethod
    def from_labels(cls, space: StateSpace, cells: Sequence[Sequence]) -> "Partition":
        return cls(space, tuple(frozenset(space.index(s) for s in c) for c in cells))

    @classmethod
    def from_assignment(cls, space: StateSpace, assignment: Sequence[int]) -> "Partition":
        """Build from a map state -> cell id; cells ordered by first occurrence."""
        if len(assignment) != space.size:
            raise ValueError("assignment length must equal the number of states")
        order: dict[int, list[int]] = {}
        for x, a in enumerate(assignment):
            order.setdefault(int(a), []).append(x)
        return cls(space, tuple(frozenset(v) for v in order.values()))

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def cell_of(self) -> tuple[int, ...]:
        """``cell_of[x]`` is the index of the cell containing state ``x``."""
        out = [0] * self.space.size
        for i, c in enumerate(self.cells):
            for x in c:
                out[x] = i
        return tuple(out)

    def same_cells(self, other: "Partition") -> bool:
        return self.space == other.space and set(self.cells) == set(other.cells)

    def describe(self) -> str:
        lab = self.space.labels
        return "{" + ", ".join("{" + ",".join(lab[x] for x in sorted(c)) + "}" for c in self.cells) + "}"


@dataclass(frozen=True)
class CellWord:
    """A word ``(i_0, ..., i_{n-1})`` of cell indices; the empty word is the full cylinder."""

    partition: Partition
    indices: tuple[int, ...] = field(default=())

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        m = len(self.partition)
        for i in idx:
            if not 0 <= i < m:
                raise IndexError(f"cell index {i} out of range 0..{m - 1}")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def length(self) -> int:
        return len(self.indices)

    @property
    def cells(self) -> tuple[frozenset[int], ...]:
        return tuple(self.partition.cells[i] for i in self.indices)


@dataclass(frozen=True)
class Distribution:
    """Probability weights over ``0..m-1``.

    Weights given as ``int``/``Fraction`` are kept exact and must sum to
    exactly one; anything else is converted to float and checked to
    :data:`DIST_TOL`.
    """

    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        if not w:
            raise ValueError("a distribution needs at least one weight")
        if all(_is_exact(x) for x in w):
            w = tuple(Fraction(x) for x in w)
            total = sum(w)
            if total != 1:
                raise ValueError(f"exact weights sum to {total}, not 1")
        else:
            w = tuple(float(x) for x in w)
            total = math.fsum(w)
            if abs(total - 1.0) > DIST_TOL:
                raise ValueError(f"weights sum to {total!r}, not 1 (tolerance {DIST_TOL})")
        for x in w:
            if not 0 <= x <= 1 or x != x:
                raise ValueError(f"weight {x!r} outside [0, 1]")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, m: int, exact: bool = False) -> "Distribution":
        if exact:
            return cls(tuple(Fraction(1, m) for _ in range(m)))
        return cls(tuple(1.0 / m for _ in range(m)))

    @classmethod
    def point(cls, m: int, at: int) -> "Distribution":
        return cls(tuple(int(i == at) for i in range(m)))

    @property
    def exact(self) -> bool:
        return isinstance(self.weights[0], Fraction)

    def __len__(self) -> int:
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.array(self.weights, dtype=object if self.exact else float)

    def aggregate(self, p: Partition) -> "Distribution":
        """Push forward onto the cells of ``p``."""
        if p.space.size != len(self.weights):
            raise ValueError("partition and distribution sizes differ")
        return Distribution(tuple(cell_mass(self.weights, c) for c in p.cells))


def cell_mass(weights: Sequence, cell: Iterable[int]):
    """Total weight of ``cell``; exact when the weights are rational."""
    vals = [weights[i] for i in cell]
    if vals and isinstance(vals[0], Fraction):
        return sum(vals, Fraction(0))
    return math.fsum(vals)


def phi(x) -> float:
    """``x log x`` with ``phi(0) = 0``."""
    if x < 0:
        raise ValueError(f"phi is defined on [0, inf), got {x!r}")
    if x == 0:
        return 0.0
    return float(x) * math.log(x)


def dist_entropy(d) -> float:
    """Shannon entropy ``-sum phi(w)`` in nats.

    ``d`` may be a :class:`Distribution` or a plain sequence of weights, which
    is validated on the way in.
    """
    if not isinstance(d, Distribution):
        d = Distribution(tuple(d))
    return -math.fsum(phi(w) for w in d.weights) + 0.0


def _same_space(p: Partition, q: Partition) -> None:
    if p.space != q.space:
        raise ValueError("partitions live on different state spaces")


def join(p: Partition, q: Partition) -> Partition:
    """Common refinement ``{A_i & B_j}``, empty intersections dropped."""
    _same_space(p, q)
    cells = [a & b for a in p.cells for b in q.cells]
    return Partition(p.space, tuple(c for c in cells if c))


def refines(q: Partition, p: Partition) -> bool:
    """True iff every cell of ``p`` is a union of cells of ``q``."""
    _same_space(p, q)
    owner = p.cell_of
    return all(len({owner[x] for x in c}) == 1 for c in q.cells)


def preimage_partition(f: Sequence[int], q: Partition, domain: StateSpace | None = None) -> Partition:
    """The partition ``f^-1 q`` of the domain of ``f``.

    ``f[x]`` is the index in ``q.space`` of the image of state ``x``.
    """
    if domain is None:
        domain = StateSpace.range(len(f))
    if len(f) != domain.size:
        raise ValueError("map length must equal the domain size")
    for y in f:
        if not 0 <= y < q.space.size:
            raise IndexError(f"map value {y} outside the target space")
    cells = [frozenset(x for x in range(domain.size) if f[x] in b) for b in q.cells]
    return Partition(domain, tuple(c for c in cells if c))


def product_partition(p: Partition, q: Partition) -> Partition:
    """Rectangles ``A_i x B_j`` on ``X x Y``, cell ``(i, j)`` at position ``i*|q| + j``."""
    ny = q.space.size
    space = p.space.product(q.space)
    cells = tuple(frozenset(x * ny + y for x in a for y in b) for a in p.cells for b in q.cells)
    return Partition(space, cells)


def power_partition(p: Partition, k: int) -> Partition:
    """k-fold product ``p x ... x p`` on ``X^k`` (same indexing as :meth:`StateSpace.power`)."""
    m = p.space.size
    cells = []
    for combo in _cartesian(p.cells, repeat=k):
        flat = set()
        for point in _cartesian(*combo):
            z = 0
            for x in point:
                z = z * m + x
            flat.add(z)
        cells.append(frozenset(flat))
    return Partition(p.space.power(k), tuple(cells))
