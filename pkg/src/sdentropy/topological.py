"""Subshifts of finite type, word counts, Perron roots and the Parry measure.

For a finite alphabet the cover by single-symbol cylinders is the finest
open cover, and the smallest family of length-``n`` cylinders covering the
subshift is exactly its set of admissible words.  The topological entropy
is therefore the growth rate of the word count, i.e. ``log`` of the Perron
root of the transition matrix.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .core import Distribution, StateSpace
from .measures import CylinderOracle, MarkovSpec

__all__ = [
    "Sft",
    "PerronResult",
    "TopologicalEstimate",
    "SupportResult",
    "word_complexity",
    "ht_estimate",
    "perron",
    "spectral_radius",
    "strong_components",
    "parry_measure",
    "support_check",
]


class Sft:
    """Subshift of finite type given by a 0/1 transition matrix.

    States with no outgoing or no incoming edge cannot occur on a
    bi-infinite path; they are removed repeatedly (with a warning) until none
    remain.  ``kept`` maps trimmed indices back to the original ones.
    """

    def __init__(self, allowed, labels: Sequence[str] | None = None):
        A = np.array(allowed)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"allowed matrix must be square, got shape {A.shape}")
        if not np.isin(A, (0, 1)).all():
            raise ValueError("allowed matrix entries must be 0 or 1")
        A = A.astype(np.int64)
        k = A.shape[0]
        self.original_space = StateSpace(tuple(labels)) if labels is not None else StateSpace.range(k)
        if self.original_space.size != k:
            raise ValueError("label count differs from the matrix size")
        keep = list(range(k))
        while True:
            sub = A[np.ix_(keep, keep)]
            ok = (sub.sum(axis=1) > 0) & (sub.sum(axis=0) > 0)
            if ok.all():
                break
            keep = [x for x, good in zip(keep, ok) if good]
            if not keep:
                break
        if not keep:
            raise ValueError("subshift is empty: every state is stranded")
        self.kept = tuple(keep)
        self.trimmed = tuple(self.original_space.labels[x] for x in range(k) if x not in keep)
        if self.trimmed:
            warnings.warn(f"trimmed stranded states {list(self.trimmed)}", stacklevel=2)
        self.allowed = A[np.ix_(keep, keep)]
        self.space = StateSpace(tuple(self.original_space.labels[x] for x in keep))

    @property
    def size(self) -> int:
        return self.space.size

    def admissible(self, word: Sequence[int]) -> bool:
        """Whether a word of trimmed indices uses only allowed transitions."""
        return all(self.allowed[a, b] for a, b in zip(word, word[1:]))

    def __repr__(self):
        return f"Sft({self.allowed.tolist()})"


def word_complexity(s: Sft, n: int) -> int:
    """Number of admissible words of length ``n`` (exact integer)."""
    if n < 1:
        raise ValueError("word length must be >= 1")
    A = [[int(x) for x in row] for row in s.allowed]
    k = len(A)
    v = [1] * k
    for _ in range(n - 1):
        v = [sum(v[i] * A[i][j] for i in range(k)) for j in range(k)]
    return sum(v)


@dataclass(frozen=True)
class PerronResult:
    value: float
    converged: bool
    iterations: int
    right: np.ndarray | None = None
    left: np.ndarray | None = None


def _check_nonneg_square(m) -> np.ndarray:
    M = np.array(m, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if (M < 0).any():
        raise ValueError("matrix must be entrywise nonnegative")
    return M


def _power(M: np.ndarray, rtol: float, max_iter: int):
    # Collatz-Wielandt bracket on M + cI, which is primitive when M is irreducible
    k = M.shape[0]
    c = 0.5 * float(M.sum(axis=1).max())
    B = M + c * np.eye(k)
    x = np.ones(k)
    lo = hi = 0.0
    for it in range(1, max_iter + 1):
        y = B @ x
        ratio = y / x
        lo, hi = float(ratio.min()), float(ratio.max())
        x = y / np.linalg.norm(y)
        if hi - lo <= rtol * hi:
            return 0.5 * (lo + hi) - c, x, True, it
    return 0.5 * (lo + hi) - c, x, False, max_iter


def strong_components(m) -> list[tuple[int, ...]]:
    """Strongly connected components of the support graph, sorted by smallest member."""
    M = np.asarray(m)
    n, lab = connected_components(M != 0, directed=True, connection="strong")
    comps = [tuple(int(i) for i in np.flatnonzero(lab == c)) for c in range(n)]
    return sorted(comps, key=lambda c: c[0])


def perron(m, rtol: float = 1e-12, max_iter: int = 10_000, vectors: bool = False) -> PerronResult:
    """Spectral radius of a nonnegative matrix with convergence status.

    The spectral radius of a nonnegative matrix is the largest Perron root
    among the diagonal blocks of its strongly connected components, so each
    component is handled separately.  Within a component power iteration runs
    on ``M + cI`` and stops once the Collatz-Wielandt bounds
    ``min (Bx)_i / x_i <= rho <= max (Bx)_i / x_i`` agree to ``rtol``.

    With ``vectors=True`` the matrix must be irreducible and the right and
    left Perron vectors (positive, unit 1-norm) are returned too.
    """
    M = _check_nonneg_square(m)
    comps = strong_components(M)
    if vectors:
        if len(comps) != 1:
            raise ValueError(f"matrix is reducible; strongly connected components: {comps}")
        val, r, ok, it = _power(M, rtol, max_iter)
        _, l, ok2, it2 = _power(M.T.copy(), rtol, max_iter)
        return PerronResult(val, ok and ok2, max(it, it2), r / r.sum(), l / l.sum())
    best, conv, iters = 0.0, True, 0
    for comp in comps:
        block = M[np.ix_(comp, comp)]
        if len(comp) == 1:
            val, ok, it = float(block[0, 0]), True, 0
        else:
            val, _, ok, it = _power(block, rtol, max_iter)
        if val > best:
            best = val
        conv = conv and ok
        iters = max(iters, it)
    return PerronResult(max(best, 0.0), conv, iters)


def spectral_radius(m, rtol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Largest eigenvalue modulus of a nonnegative square matrix."""
    res = perron(m, rtol, max_iter)
    if not res.converged:
        warnings.warn(f"power iteration did not reach rtol={rtol} in {max_iter} steps", RuntimeWarning, stacklevel=2)
    return res.value


@dataclass(frozen=True)
class TopologicalEstimate:
    counts: tuple[int, ...]
    values: tuple[float, ...]
    spectral_radius: float
    exact: float
    note: str = ("cover by single-symbol cylinders: the finest cover of a finite alphabet, "
                 "so it attains the supremum over covers")

    @property
    def empty(self) -> bool:
        return self.spectral_radius == 0


def ht_estimate(s: Sft, N: int) -> TopologicalEstimate:
    """``(1/n) log N_S(n)`` for ``n = 1..N`` and the exact value ``log rho``.

    A spectral radius of zero (no infinite path) is reported as ``-inf``.
    """
    if N < 2:
        raise ValueError("horizon must be >= 2")
    counts = tuple(word_complexity(s, n) for n in range(1, N + 1))
    values = tuple(math.log(c) / n if c else -math.inf for n, c in enumerate(counts, start=1))
    rho = spectral_radius(s.allowed)
    return TopologicalEstimate(counts, values, rho, math.log(rho) if rho > 0 else -math.inf)


def parry_measure(s: Sft) -> MarkovSpec:
    """Stationary Markov chain of maximal entropy on an irreducible SFT.

    ``p_ij = A_ij v_j / (rho v_i)`` and ``p_i ~ u_i v_i`` with ``u, v`` the left
    and right Perron vectors.
    """
    comps = strong_components(s.allowed)
    if len(comps) != 1:
        named = [[s.space.labels[i] for i in c] for c in comps]
        raise ValueError(f"Parry measure needs an irreducible matrix; strongly connected components: {named}")
    A = s.allowed.astype(float)
    res = perron(A, vectors=True)
    lam, v, u = res.value, res.right, res.left
    P = A * v[None, :] / (lam * v[:, None])
    P /= P.sum(axis=1, keepdims=True)
    pi = u * v
    pi /= math.fsum(pi)
    return MarkovSpec(P, Distribution(tuple(pi)), stationary=True, space=s.space)


@dataclass(frozen=True)
class SupportResult:
    ok: bool
    witness: tuple[str, ...] | None = None

    def __bool__(self):
        return self.ok


def support_check(mu: CylinderOracle, s: Sft, n: int) -> SupportResult:
    """Check that every positive-mass word of length ``<= n`` is admissible in ``s``.

    ``mu`` must live on the SFT's original (untrimmed) alphabet or on its
    trimmed one.  Words are scanned shortest first, so a failure reports a
    shortest offending word (as labels).
    """
    if mu.space == s.space:
        to_trim = {i: i for i in range(s.size)}
    elif mu.space == s.original_space:
        to_trim = {x: i for i, x in enumerate(s.kept)}
    else:
        raise ValueError("oracle alphabet differs from the subshift alphabet")
    labels = mu.space.labels
    k = mu.space.size

    frontier = [(mu.root(), ())]
    for _ in range(n):
        nxt = []
        for state, word in frontier:
            for x in range(k):
                t = mu.extend(state, frozenset([x]))
                if mu.weight(t) == 0:
                    continue
                w = word + (x,)
                if x not in to_trim or (word and not s.allowed[to_trim[word[-1]], to_trim[x]]):
                    return SupportResult(False, tuple(labels[y] for y in w))
                nxt.append((t, w))
        frontier = nxt
    return SupportResult(True)
