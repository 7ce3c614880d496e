"""Block entropies of path measures and the per-symbol entropy estimate.

``block_entropy(mu, p, n)`` is the Shannon entropy of ``mu`` restricted to the
partition of path space into length-``n`` cylinders over ``p``.  It is found
by depth-first enumeration of cell words, pruning every prefix of zero mass
(all its extensions vanish too).  Enumeration is capped by a leaf budget and
fails loudly when the cap is hit.

Terms are combined with :func:`math.fsum`, which rounds the exact sum once,
so the result does not depend on visiting order or on the number of worker
threads.
"""

from __future__ import annotations

import math
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .core import Distribution, Partition, dist_entropy, phi
from .measures import CylinderOracle, MarkovSpec, TransformationSpec

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "EntropySeries",
    "HsdEstimate",
    "block_entropy",
    "block_mass_profile",
    "entropy_series",
    "hsd_estimate",
    "hsd_full",
    "markov_closed_form",
    "iid_closed_form",
    "joined_partition",
    "transformation_block_entropy",
    "conditional_entropy_first_coord",
]

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """Raised when a word enumeration would visit more leaves than allowed.

    ``partial`` holds the :class:`EntropySeries` of the block lengths that
    did complete, when the caller was computing a series.
    """

    def __init__(self, cap: int, n: int, partial: "EntropySeries | None" = None):
        super().__init__(f"enumeration budget of {cap} leaf words exceeded at block length {n}")
        self.cap = cap
        self.n = n
        self.partial = partial


class _Counter:
    def __init__(self, cap: int, n: int):
        self.cap, self.n = cap, n
        self.count = 0
        self._lock = threading.Lock()

    def add(self, k: int) -> None:
        with self._lock:
            self.count += k
            if self.count > self.cap:
                raise BudgetExceeded(self.cap, self.n)


def _walk(mu: CylinderOracle, cells, state, depth: int, n: int, counter: _Counter) -> list[list]:
    levels: list[list] = [[] for _ in range(n + 1)]
    stack = [(state, depth)]
    while stack:
        s, d = stack.pop()
        leaves = 0
        for c in cells:
            t = mu.extend(s, c)
            w = mu.weight(t)
            if w == 0:
                continue
            levels[d + 1].append(w)
            if d + 1 == n:
                leaves += 1
            else:
                stack.append((t, d + 1))
        if leaves:
            counter.add(leaves)
    return levels


def _level_masses(mu: CylinderOracle, p: Partition, n: int, budget: int, workers: int) -> list[list]:
    """Nonzero cylinder masses at every depth ``1..n`` (index 0 unused)."""
    if n < 1:
        raise ValueError("block length must be >= 1")
    if p.space != mu.space:
        raise ValueError("partition and oracle live on different state spaces")
    cells = p.cells
    counter = _Counter(budget, n)
    if workers <= 1 or n == 1:
        return _walk(mu, cells, mu.root(), 0, n, counter)
    root = mu.root()
    firsts = []
    for c in cells:
        t = mu.extend(root, c)
        if mu.weight(t) != 0:
            firsts.append(t)
    levels: list[list] = [[] for _ in range(n + 1)]
    levels[1] = [mu.weight(t) for t in firsts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda t: _walk(mu, cells, t, 1, n, counter), firsts))
    for part in parts:
        for d in range(2, n + 1):
            levels[d].extend(part[d])
    return levels


def _entropy_of(masses) -> float:
    return -math.fsum(phi(w) for w in masses) + 0.0


def block_entropy(mu: CylinderOracle, p: Partition, n: int, budget: int = DEFAULT_BUDGET,
                  workers: int = 1) -> float:
    """Entropy (nats) of ``mu`` over the length-``n`` cylinders of ``p``.

    Parameters
    ----------
    mu : CylinderOracle
    p : Partition
        Partition of ``mu.space``.
    n : int
        Block length, ``n >= 1``.
    budget : int
        Maximum number of nonzero leaf words; :class:`BudgetExceeded` otherwise.
    workers : int
        Threads used for the first-symbol branches.  The value returned is
        bit-identical for every worker count.
    """
    return _entropy_of(_level_masses(mu, p, n, budget, workers)[n])


def block_mass_profile(mu: CylinderOracle, p: Partition, n: int, budget: int = DEFAULT_BUDGET) -> Counter:
    """Multiset of nonzero length-``n`` cylinder masses.

    Two measures with equal profiles have equal block entropies; with
    rational inputs this gives an exact comparison.
    """
    return Counter(_level_masses(mu, p, n, budget, 1)[n])


@dataclass(frozen=True)
class EntropySeries:
    """Block entropies ``E_1..E_N`` and per-symbol values ``a_n = E_n / n``."""

    values: tuple[float, ...]
    block_values: tuple[float, ...]
    n_cells: int
    stationary: bool = False
    monotone_nonincreasing: bool = field(init=False)

    def __post_init__(self):
        v = self.values
        object.__setattr__(self, "monotone_nonincreasing",
                           all(v[i + 1] <= v[i] + 1e-12 for i in range(len(v) - 1)))

    @property
    def horizon(self) -> int:
        return len(self.values)

    @property
    def increments(self) -> tuple[float, ...]:
        """``E_n - E_{n-1}`` with ``E_0 = 0``."""
        e = (0.0,) + self.block_values
        return tuple(e[i + 1] - e[i] for i in range(len(self.block_values)))


def _series_from(block_values, n_cells, stationary) -> EntropySeries:
    vals = tuple(e / (i + 1) for i, e in enumerate(block_values))
    return EntropySeries(vals, tuple(block_values), n_cells, stationary)


def entropy_series(mu: CylinderOracle, p: Partition, N: int, budget: int = DEFAULT_BUDGET,
                   workers: int = 1) -> EntropySeries:
    """``a_n = E(mu, p, n) / n`` for ``n = 1..N`` from a single enumeration.

    On :class:`BudgetExceeded` the exception carries the series of the
    block lengths that fit in the budget.
    """
    if N < 1:
        raise ValueError("horizon must be >= 1")
    try:
        levels = _level_masses(mu, p, N, budget, workers)
    except BudgetExceeded:
        done = []
        for n in range(1, N):
            try:
                done.append(block_entropy(mu, p, n, budget, workers))
            except BudgetExceeded:
                break
        partial = _series_from(done, len(p), mu.stationary) if done else None
        raise BudgetExceeded(budget, len(done) + 1, partial) from None
    return _series_from([_entropy_of(levels[n]) for n in range(1, N + 1)], len(p), mu.stationary)


@dataclass(frozen=True)
class HsdEstimate:
    """A finite-horizon value for the limsup of ``a_n``."""

    value: float
    policy: str
    horizon: int
    is_upper_bound: bool
    note: str = ""
    series: EntropySeries | None = None


def hsd_estimate(series: EntropySeries, policy: str = "auto", window: float = 1 / 3) -> HsdEstimate:
    """Reduce a series to one number.

    Policies
    --------
    ``tail-max``
        Largest ``a_n`` over the last ``ceil(N * window)`` entries.
    ``last``
        ``a_N``; an upper bound when the source is stationary, since ``a_n``
        then decreases to its limit.
    ``increment``
        ``E_N - E_{N-1}``; also decreases to the limit for stationary
        sources, usually much faster than ``a_N``.
    ``auto``
        ``last`` for stationary sources, ``tail-max`` otherwise.
    """
    N = series.horizon
    if N < 1:
        raise ValueError("empty series")
    if policy == "auto":
        policy = "last" if series.stationary else "tail-max"
    if policy == "tail-max":
        m = max(1, math.ceil(N * window))
        return HsdEstimate(max(series.values[-m:]), f"tail-max(window={m})", N, False, series=series)
    if policy == "last":
        return HsdEstimate(series.values[-1], "last", N, series.stationary, series=series)
    if policy == "increment":
        return HsdEstimate(series.increments[-1], "increment", N, series.stationary, series=series)
    raise ValueError(f"unknown policy {policy!r}; use auto, tail-max, last or increment")


_SUP_NOTE = ("singleton partition used: on a finite state space it refines every partition, "
             "and block entropy is monotone under refinement, so the supremum over partitions is attained there")


def hsd_full(mu: CylinderOracle, N: int, policy: str = "auto", budget: int = DEFAULT_BUDGET,
             workers: int = 1) -> HsdEstimate:
    """Estimate of the entropy of ``mu`` supremised over all partitions."""
    series = entropy_series(mu, Partition.singletons(mu.space), N, budget, workers)
    est = hsd_estimate(series, policy)
    return HsdEstimate(est.value, est.policy, est.horizon, est.is_upper_bound, _SUP_NOTE, series)


def markov_closed_form(spec: MarkovSpec) -> float:
    """``-sum_ij p_i phi(p_ij)`` for a chain started in its invariant vector."""
    if not spec.stationary:
        raise ValueError("the closed form holds only for a stationary initial vector")
    P = spec.transition
    p = spec.initial.weights
    k = len(p)
    return -math.fsum(float(p[i]) * phi(P[i, j]) for i in range(k) for j in range(k)) + 0.0


def iid_closed_form(nu: Distribution, p: Partition) -> float:
    """Entropy of ``nu`` aggregated over the cells of ``p``."""
    return dist_entropy(nu.aggregate(p))


def joined_partition(T: Sequence[int], p: Partition, n: int) -> Partition:
    """``p v T^-1 p v ... v T^-(n-1) p``; states grouped by their length-``n`` ``p``-name."""
    owner = p.cell_of
    names: dict[tuple, list[int]] = {}
    for x in range(p.space.size):
        y, name = x, []
        for _ in range(n):
            name.append(owner[y])
            y = T[y]
        names.setdefault(tuple(name), []).append(x)
    return Partition(p.space, tuple(frozenset(v) for _, v in sorted(names.items())))


def transformation_block_entropy(spec: TransformationSpec, p: Partition, n: int) -> float:
    """Entropy of the transformation's measure over the ``n``-fold dynamical join of ``p``."""
    if n < 1:
        raise ValueError("block length must be >= 1")
    return dist_entropy(spec.measure.aggregate(joined_partition(spec.map, p, n)))


def conditional_entropy_first_coord(mu: CylinderOracle, p: Partition, q: Partition) -> float:
    """Entropy of the first-coordinate ``p``-cell given its ``q``-cell."""
    if p.space != mu.space or q.space != mu.space:
        raise ValueError("partitions and oracle must share a state space")
    terms = []
    for b in q.cells:
        mb = mu.mass([b])
        if mb == 0:
            continue
        for a in p.cells:
            ab = a & b
            if not ab:
                continue
            mab = mu.mass([ab])
            if mab == 0:
                continue
            terms.append(float(mab) * math.log(mab / mb))
    return -math.fsum(terms) + 0.0
