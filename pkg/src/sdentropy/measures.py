"""Path-space measures given through their cylinder masses.

A :class:`CylinderOracle` returns ``mu(A_0 x ... x A_{n-1} x X x ...)`` for any
finite word of cells (subsets of the state space).  Only finite-dimensional
marginals are ever used, so an oracle is exactly a consistent family of
marginal distributions.

Oracles are evaluated incrementally: ``root()`` is the state of the empty
word, ``extend(state, cell)`` appends one cell and ``weight(state)`` is the
mass of the word built so far.  States are immutable values, so a single
oracle can be walked from many threads at once.  Enumeration code relies on
this to reuse prefix work without any caching.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import (
    CellWord,
    Distribution,
    Partition,
    StateSpace,
    _as_cell,
    cell_mass,
)

__all__ = [
    "CylinderOracle",
    "MarkovSpec",
    "TransformationSpec",
    "oracle_mass",
    "iid",
    "product_sequence",
    "markov",
    "from_transformation",
    "convex_mix",
    "product_measure",
    "shift_pushforward",
    "restriction_pushforward",
    "dilation_pushforward",
    "factor_pushforward",
    "block_recode",
    "point_path",
    "stationary_vector",
    "pushforward_distribution",
    "box_decompose",
    "consistency_violations",
]

ROW_TOL = 1e-12
STATIONARY_TOL = 1e-10


def _total(vals):
    vals = list(vals)
    if all(isinstance(v, Fraction) for v in vals):
        return sum(vals, Fraction(0))
    return math.fsum(vals)


class CylinderOracle:
    """Base class for path measures on ``X^inf`` with ``X`` finite.

    Subclasses implement :meth:`root`, :meth:`extend` and :meth:`weight`.
    ``stationary`` is a declaration made by the constructor when shift
    invariance is guaranteed by construction.
    """

    kind = "oracle"

    def __init__(self, space: StateSpace, stationary: bool = False):
        self.space = space
        self.stationary = bool(stationary)

    def root(self):
        raise NotImplementedError

    def extend(self, state, cell: frozenset[int]):
        raise NotImplementedError

    def weight(self, state):
        raise NotImplementedError

    def mass(self, word: Iterable[Iterable[int]]):
        """Mass of the cylinder over ``word`` (a sequence of cells)."""
        cells = [_as_cell(c, self.space.size) for c in word]
        s = self.root()
        for c in cells:
            s = self.extend(s, c)
            w = self.weight(s)
            if w == 0:
                return w
        return self.weight(s)

    def __repr__(self):
        return f"<{type(self).__name__} on {self.space.size} states{' (stationary)' if self.stationary else ''}>"


def oracle_mass(mu: CylinderOracle, w) -> float:
    """Mass of a :class:`CellWord` or of a raw sequence of cells."""
    if isinstance(w, CellWord):
        if w.partition.space != mu.space:
            raise ValueError("cell word and oracle live on different state spaces")
        w = w.cells
    return mu.mass(w)


# ---------------------------------------------------------------- specs


def _as_matrix(rows) -> np.ndarray:
    rows = [list(r) for r in rows]
    flat = [x for r in rows for x in r]
    exact = all(isinstance(x, (int, Fraction, np.integer)) and not isinstance(x, bool) for x in flat)
    if exact:
        return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)
    return np.array(rows, dtype=float)


def stationary_vector(transition, tol: float = 1e-15, max_iter: int = 100_000) -> Distribution:
    """Invariant probability vector of a row-stochastic matrix.

    Float matrices use power iteration on the lazy chain ``(I + P) / 2``,
    which shares the invariant vector of ``P`` and is aperiodic.  Rational
    matrices are solved exactly.
    """
    P = _as_matrix(transition)
    k = P.shape[0]
    if P.dtype == object:
        import sympy

        M = sympy.Matrix(P.tolist()).T - sympy.eye(k)
        M = M.col_join(sympy.ones(1, k))
        rhs = sympy.zeros(k, 1).col_join(sympy.ones(1, 1))
        sol, params = M.gauss_jordan_solve(rhs)
        if params.shape[0]:
            raise ValueError("chain has several invariant vectors; supply one explicitly")
        return Distribution(tuple(Fraction(int(x.p), int(x.q)) for x in sol))
    lazy = 0.5 * (np.eye(k) + P)
    v = np.full(k, 1.0 / k)
    for _ in range(max_iter):
        w = v @ lazy
        w /= w.sum()
        if np.max(np.abs(w - v)) <= tol:
            v = w
            break
        v = w
    v = np.clip(v, 0.0, None)
    v /= math.fsum(v)
    return Distribution(tuple(v))


class MarkovSpec:
    """Transition matrix plus initial distribution of a homogeneous chain.

    Parameters
    ----------
    transition : (k, k) array_like
        Row-stochastic matrix ``p_ij``.  Rational entries keep the chain exact.
    initial : Distribution, sequence or ``"stationary"``
        Law of ``x_0``.  ``"stationary"`` computes the invariant vector.
    stationary : bool, optional
        Declare ``initial`` invariant.  Checked to ``1e-10``.  Passing
        ``initial="stationary"`` implies it.
    """

    def __init__(self, transition, initial="stationary", stationary: bool = False,
                 space: StateSpace | None = None):
        P = _as_matrix(transition)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {P.shape}")
        k = P.shape[0]
        for i, row in enumerate(P):
            if any(x < 0 or x > 1 for x in row):
                raise ValueError(f"transition row {i} has entries outside [0, 1]")
            s = _total(row)
            if (s != 1) if P.dtype == object else abs(s - 1.0) > ROW_TOL:
                raise ValueError(f"transition row {i} sums to {s}, not 1")
        if isinstance(initial, str):
            if initial != "stationary":
                raise ValueError(f"unknown initial vector spec {initial!r}")
            initial = stationary_vector(P)
            stationary = True
        elif not isinstance(initial, Distribution):
            initial = Distribution(tuple(initial))
        if len(initial) != k:
            raise ValueError("initial vector length differs from the matrix size")
        self.transition = P
        self.initial = initial
        self.space = space if space is not None else StateSpace.range(k)
        if self.space.size != k:
            raise ValueError("state space size differs from the matrix size")
        self.stationary = bool(stationary)
        if self.stationary:
            drift = self.stationarity_defect()
            if drift > STATIONARY_TOL:
                raise ValueError(f"initial vector is not invariant (defect {drift:.3g})")

    @property
    def exact(self) -> bool:
        return self.transition.dtype == object and self.initial.exact

    def stationarity_defect(self) -> float:
        p = self.initial.as_array()
        if self.transition.dtype != object or not self.initial.exact:
            p = p.astype(float)
            return float(np.max(np.abs(p @ self.transition.astype(float) - p)))
        return float(max(abs(x) for x in p @ self.transition - p))

    def __repr__(self):
        return f"MarkovSpec(k={self.space.size}, stationary={self.stationary})"


class TransformationSpec:
    """A map ``T`` on state indices together with a measure ``nu``.

    ``preserving`` is computed; declaring ``preserving=True`` turns a failed
    check into an error.
    """

    def __init__(self, map: Sequence[int], measure, preserving: bool | None = None,
                 space: StateSpace | None = None):
        T = tuple(int(y) for y in map)
        k = len(T)
        if not isinstance(measure, Distribution):
            measure = Distribution(tuple(measure))
        if len(measure) != k:
            raise ValueError("measure length differs from the map length")
        for y in T:
            if not 0 <= y < k:
                raise IndexError(f"map value {y} outside 0..{k - 1}")
        self.map = T
        self.measure = measure
        self.space = space if space is not None else StateSpace.range(k)
        pushed = pushforward_distribution(T, measure)
        if measure.exact:
            ok = pushed.weights == measure.weights
        else:
            ok = max(abs(a - b) for a, b in zip(pushed.weights, measure.weights)) <= 1e-12
        self.preserving = ok
        if preserving and not ok:
            raise ValueError("the map does not preserve the measure")

    def __repr__(self):
        return f"TransformationSpec(map={self.map}, preserving={self.preserving})"


def pushforward_distribution(f: Sequence[int], nu: Distribution, target_size: int | None = None) -> Distribution:
    """``f_* nu`` for a map given as a sequence of target indices."""
    m = target_size if target_size is not None else len(f)
    out = [[] for _ in range(m)]
    for x, y in enumerate(f):
        out[y].append(nu.weights[x])
    return Distribution(tuple(_total(v) if v else (Fraction(0) if nu.exact else 0.0) for v in out))


# ---------------------------------------------------------------- elementary oracles


class _Iid(CylinderOracle):
    kind = "iid"

    def __init__(self, nu: Distribution, space: StateSpace):
        super().__init__(space, stationary=True)
        self.nu = nu

    def root(self):
        return Fraction(1) if self.nu.exact else 1.0

    def extend(self, state, cell):
        return state * cell_mass(self.nu.weights, cell)

    def weight(self, state):
        return state


def _space_for(size: int, space: StateSpace | None) -> StateSpace:
    if space is None:
        return StateSpace.range(size)
    if space.size != size:
        raise ValueError("state space size mismatch")
    return space


def iid(nu, space: StateSpace | None = None) -> CylinderOracle:
    """I.i.d. path measure ``nu x nu x ...``."""
    if not isinstance(nu, Distribution):
        nu = Distribution(tuple(nu))
    return _Iid(nu, _space_for(len(nu), space))


class _ProductSequence(CylinderOracle):
    kind = "product_sequence"

    def __init__(self, getter, exact, space, stationary):
        super().__init__(space, stationary)
        self._get = getter
        self._exact = exact

    def root(self):
        return (Fraction(1) if self._exact else 1.0, 0)

    def extend(self, state, cell):
        w, j = state
        return (w * cell_mass(self._get(j).weights, cell), j + 1)

    def weight(self, state):
        return state[0]


def product_sequence(nus, tail: Sequence | None = None, space: StateSpace | None = None) -> CylinderOracle:
    """Independent coordinates with laws ``nu_0, nu_1, ...``.

    ``nus`` is either a finite prefix (with ``tail`` a block of
    distributions repeated forever after it) or a callable ``j -> nu_j``.
    Asking for a coordinate beyond a prefix with no tail raises IndexError.
    """
    def _d(x):
        return x if isinstance(x, Distribution) else Distribution(tuple(x))

    if callable(nus):
        first = _d(nus(0))

        def getter(j):
            return _d(nus(j))

        return _ProductSequence(getter, first.exact, _space_for(len(first), space), False)

    prefix = [_d(x) for x in nus]
    tail_ = [_d(x) for x in (tail or [])]
    every = prefix + tail_
    if not every:
        raise ValueError("product_sequence needs at least one distribution")
    k = len(every[0])
    if any(len(d) != k for d in every):
        raise ValueError("all coordinate laws must share one state space")

    def getter(j):
        if j < len(prefix):
            return prefix[j]
        if not tail_:
            raise IndexError(f"coordinate {j} requested but only {len(prefix)} laws given and no tail")
        return tail_[(j - len(prefix)) % len(tail_)]

    stationary = bool(tail_) and len({d.weights for d in every}) == 1
    return _ProductSequence(getter, every[0].exact, _space_for(k, space), stationary)


class _Markov(CylinderOracle):
    kind = "markov"

    def __init__(self, spec: MarkovSpec):
        super().__init__(spec.space, spec.stationary)
        self.spec = spec
        exact = spec.exact
        self._dtype = object if exact else float
        self._P = spec.transition if exact else spec.transition.astype(float)
        self._p0 = spec.initial.as_array() if exact else spec.initial.as_array().astype(float)

    def root(self):
        return None

    def extend(self, v, cell):
        w = self._p0 if v is None else v @ self._P
        out = np.zeros(len(w), dtype=self._dtype)
        if self._dtype is object:
            out[:] = Fraction(0)
        idx = sorted(cell)
        out[idx] = w[idx]
        return out

    def weight(self, v):
        if v is None:
            return Fraction(1) if self._dtype is object else 1.0
        if self._dtype is object:
            return sum(v, Fraction(0))
        return math.fsum(v)


def markov(spec: MarkovSpec) -> CylinderOracle:
    """Path measure of a homogeneous Markov chain (masked transfer products)."""
    return _Markov(spec)


class _Transformation(CylinderOracle):
    kind = "transformation"

    def __init__(self, spec: TransformationSpec):
        super().__init__(spec.space, spec.preserving)
        self.spec = spec
        self._T = np.array(spec.map, dtype=np.intp)

    def root(self):
        k = len(self._T)
        return (np.ones(k, dtype=bool), np.arange(k))

    def extend(self, state, cell):
        alive, pos = state
        hit = np.isin(pos, list(cell))
        return (alive & hit, self._T[pos])

    def weight(self, state):
        alive = np.flatnonzero(state[0]).tolist()
        if not alive:
            return Fraction(0) if self.spec.measure.exact else 0.0
        return cell_mass(self.spec.measure.weights, alive)


def from_transformation(spec: TransformationSpec) -> CylinderOracle:
    """Orbit process ``(x, Tx, T^2 x, ...)`` with ``x ~ nu``."""
    return _Transformation(spec)


def point_path(space: StateSpace, path: Sequence[int] | int) -> CylinderOracle:
    """Dirac mass on one path, given as a finite prefix that then repeats its last symbol.

    A single integer means the constant path.
    """
    if isinstance(path, (int, np.integer)):
        path = [int(path)]
    path = [space.index(p) for p in path]
    k = space.size
    laws = [Distribution.point(k, x) for x in path]
    return product_sequence(laws[:-1], tail=[laws[-1]], space=space)


# ---------------------------------------------------------------- combinators


def _check_same(mu: CylinderOracle, rho: CylinderOracle) -> None:
    if mu.space != rho.space:
        raise ValueError("oracles live on different state spaces")


class _Mix(CylinderOracle):
    kind = "mix"

    def __init__(self, t, mu, rho):
        super().__init__(mu.space, mu.stationary and rho.stationary)
        self.t, self.mu, self.rho = t, mu, rho

    def root(self):
        return (self.mu.root(), self.rho.root())

    def extend(self, state, cell):
        a, b = state
        return (self.mu.extend(a, cell), self.rho.extend(b, cell))

    def weight(self, state):
        return self.t * self.mu.weight(state[0]) + (1 - self.t) * self.rho.weight(state[1])


def convex_mix(t, mu: CylinderOracle, rho: CylinderOracle) -> CylinderOracle:
    """``t mu + (1 - t) rho``."""
    if not 0 <= t <= 1:
        raise ValueError(f"mixing weight {t!r} outside [0, 1]")
    _check_same(mu, rho)
    return _Mix(t, mu, rho)


@lru_cache(maxsize=8192)
def box_decompose(cell: frozenset[int], shape: tuple[int, ...]) -> tuple[tuple[frozenset[int], ...], ...]:
    """Split a subset of a product of finite sets into disjoint boxes.

    Points are encoded in mixed radix ``shape`` (first factor most
    significant).  Each returned box is a tuple of per-factor subsets.
    """
    if len(shape) == 1:
        return ((cell,),) if cell else ()
    inner = math.prod(shape[1:])
    residual: dict[int, set[int]] = {}
    for z in sorted(cell):
        x, r = divmod(z, inner)
        residual.setdefault(x, set()).add(r)
    groups: dict[frozenset[int], list[int]] = {}
    for x in sorted(residual):
        groups.setdefault(frozenset(residual[x]), []).append(x)
    out = []
    for res, xs in groups.items():
        for sub in box_decompose(res, shape[1:]):
            out.append((frozenset(xs),) + sub)
    return tuple(out)


class _Product(CylinderOracle):
    kind = "product"

    def __init__(self, mu, rho):
        super().__init__(mu.space.product(rho.space), mu.stationary and rho.stationary)
        self.mu, self.rho = mu, rho
        self._shape = (mu.space.size, rho.space.size)

    def root(self):
        return ((self.mu.root(), self.rho.root()),)

    def extend(self, state, cell):
        boxes = box_decompose(frozenset(cell), self._shape)
        out = []
        for a, b in state:
            for A, B in boxes:
                a2 = self.mu.extend(a, A)
                if self.mu.weight(a2) == 0:
                    continue
                b2 = self.rho.extend(b, B)
                if self.rho.weight(b2) == 0:
                    continue
                out.append((a2, b2))
        return tuple(out)

    def weight(self, state):
        return _total(self.mu.weight(a) * self.rho.weight(b) for a, b in state)


def product_measure(mu: CylinderOracle, rho: CylinderOracle) -> CylinderOracle:
    """Independent coupling ``mu x rho`` as a path measure on ``(X x Y)^inf``."""
    return _Product(mu, rho)


class _Shift(CylinderOracle):
    kind = "shift"

    def __init__(self, mu):
        super().__init__(mu.space, mu.stationary)
        self.mu = mu

    def root(self):
        return self.mu.extend(self.mu.root(), self.mu.space.full)

    def extend(self, state, cell):
        return self.mu.extend(state, cell)

    def weight(self, state):
        return self.mu.weight(state)


def shift_pushforward(mu: CylinderOracle) -> CylinderOracle:
    """Law of ``(x_1, x_2, ...)`` under ``mu``."""
    return _Shift(mu)


class _Restriction(CylinderOracle):
    kind = "restriction"

    def __init__(self, mu, r, stationary):
        super().__init__(mu.space, stationary)
        self.mu = mu
        self._r = r

    def root(self):
        return (self.mu.root(), 0, 0)

    def extend(self, state, cell):
        s, depth, nxt = state
        target = int(self._r(depth))
        if target < nxt:
            raise ValueError(f"restriction indices must be strictly increasing and >= 0 (r_{depth} = {target})")
        full = self.mu.space.full
        for _ in range(target - nxt):
            s = self.mu.extend(s, full)
        return (self.mu.extend(s, cell), depth + 1, target + 1)

    def weight(self, state):
        return self.mu.weight(state[0])


def restriction_pushforward(mu: CylinderOracle, r) -> CylinderOracle:
    """Law of ``(x_{r_0}, x_{r_1}, ...)``.

    ``r`` is a strictly increasing sequence (a ``range`` keeps stationarity)
    or a callable ``n -> r_n``.
    """
    if callable(r):
        fn = r
        stationary = False
    else:
        seq = r

        def fn(j):
            if j >= len(seq):
                raise IndexError(f"restriction index r_{j} not supplied")
            return seq[j]

        stationary = isinstance(r, range) and r.step > 0 and mu.stationary
    return _Restriction(mu, fn, stationary)


class _Dilation(CylinderOracle):
    kind = "dilation"

    def __init__(self, mu, k):
        super().__init__(mu.space, mu.stationary and k == 1)
        self.mu, self.k = mu, k

    def root(self):
        return (self.mu.root(), None, 0)

    def extend(self, state, cell):
        s, partial, filled = state
        partial = cell if partial is None else partial & cell
        filled += 1
        if filled == self.k:
            return (self.mu.extend(s, partial), None, 0)
        return (s, partial, filled)

    def weight(self, state):
        s, partial, _ = state
        if partial is None:
            return self.mu.weight(s)
        if not partial:
            return self.mu.weight(s) * 0
        return self.mu.weight(self.mu.extend(s, partial))


def dilation_pushforward(mu: CylinderOracle, k: int) -> CylinderOracle:
    """Law of ``(x_0 (k times), x_1 (k times), ...)``."""
    if k < 1:
        raise ValueError("dilation factor must be >= 1")
    return _Dilation(mu, int(k))


class _Factor(CylinderOracle):
    kind = "factor"

    def __init__(self, f, mu, target):
        super().__init__(target, mu.stationary)
        self.f, self.mu = f, mu
        self._pre = [frozenset(x for x, y in enumerate(f) if y == j) for j in range(target.size)]

    def _preimage(self, cell):
        out = frozenset()
        for j in cell:
            out = out | self._pre[j]
        return out

    def root(self):
        return self.mu.root()

    def extend(self, state, cell):
        return self.mu.extend(state, self._preimage(cell))

    def weight(self, state):
        return self.mu.weight(state)


def factor_pushforward(f: Sequence[int], mu: CylinderOracle, target: StateSpace | int | None = None) -> CylinderOracle:
    """Law of ``(f x_0, f x_1, ...)``; ``f[x]`` indexes the target space."""
    f = tuple(int(y) for y in f)
    if len(f) != mu.space.size:
        raise ValueError("map length must equal the source state count")
    if target is None:
        target = StateSpace.range(max(f) + 1)
    elif isinstance(target, int):
        target = StateSpace.range(target)
    for y in f:
        if not 0 <= y < target.size:
            raise IndexError(f"map value {y} outside the target space")
    return _Factor(f, mu, target)


class _BlockRecode(CylinderOracle):
    kind = "block_recode"

    def __init__(self, mu, k):
        super().__init__(mu.space.power(k), mu.stationary)
        self.mu, self.k = mu, k
        self._shape = (mu.space.size,) * k

    def root(self):
        return (self.mu.root(),)

    def extend(self, state, cell):
        boxes = box_decompose(frozenset(cell), self._shape)
        out = []
        for s in state:
            for box in boxes:
                t = s
                for c in box:
                    t = self.mu.extend(t, c)
                    if self.mu.weight(t) == 0:
                        break
                else:
                    out.append(t)
        return tuple(out)

    def weight(self, state):
        return _total(self.mu.weight(s) for s in state)


def block_recode(mu: CylinderOracle, k: int) -> CylinderOracle:
    """View ``mu`` as a measure on ``(X^k)^inf`` by grouping coordinates in blocks of ``k``."""
    if k < 1:
        raise ValueError("block length must be >= 1")
    return _BlockRecode(mu, int(k))


# ---------------------------------------------------------------- invariant suite


def consistency_violations(mu: CylinderOracle, p: Partition, max_len: int = 5) -> dict[str, float]:
    """Largest defect of each oracle axiom over all ``p``-words up to ``max_len``.

    Returned keys: ``normalization``, ``consistency`` (appending ``X``),
    ``additivity`` (last slot, over pairs of cells and over the whole
    partition), ``monotonicity`` and ``range``.
    """
    if p.space != mu.space:
        raise ValueError("partition and oracle live on different state spaces")
    full = mu.space.full
    out = {"normalization": abs(float(mu.weight(mu.root())) - 1.0),
           "consistency": 0.0, "additivity": 0.0, "monotonicity": 0.0, "range": 0.0}
    stack = [(mu.root(), 0)]
    while stack:
        s, depth = stack.pop()
        m = float(mu.weight(s))
        out["range"] = max(out["range"], -m, m - 1.0)
        if depth >= max_len:
            continue
        kids = [mu.extend(s, c) for c in p.cells]
        masses = [float(mu.weight(t)) for t in kids]
        mx = float(mu.weight(mu.extend(s, full)))
        out["consistency"] = max(out["consistency"], abs(mx - m))
        out["additivity"] = max(out["additivity"], abs(mx - math.fsum(masses)))
        for i in range(len(p.cells)):
            out["monotonicity"] = max(out["monotonicity"], masses[i] - m)
            for j in range(i + 1, len(p.cells)):
                u = float(mu.weight(mu.extend(s, p.cells[i] | p.cells[j])))
                out["additivity"] = max(out["additivity"], abs(u - masses[i] - masses[j]))
        if depth + 1 < max_len:
            stack.extend((t, depth + 1) for t in kids)
        else:
            for mt in masses:
                out["range"] = max(out["range"], -mt, mt - 1.0)
    return out
