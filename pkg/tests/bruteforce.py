"""Reference path laws built by explicit enumeration of state paths.

Nothing here touches the cell-word oracles: every law is a function
``n -> {state path of length n: probability}`` built from first principles,
and block entropies are obtained by grouping paths by their cell word.
Exponential, so only for small alphabets and horizons.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from itertools import product


class PathLaw:
    def __init__(self, k: int, table):
        self.k = k
        self._table = table

    def paths(self, n: int) -> dict[tuple, object]:
        return {w: m for w, m in self._table(n).items() if m != 0}


def _prod(xs, one=1):
    out = one
    for x in xs:
        out = out * x
    return out


def bf_iid(nu):
    k = len(nu)
    return PathLaw(k, lambda n: {w: _prod(nu[x] for x in w) for w in product(range(k), repeat=n)})


def bf_product_sequence(law_at):
    k = len(law_at(0))
    return PathLaw(k, lambda n: {w: _prod(law_at(j)[x] for j, x in enumerate(w))
                                 for w in product(range(k), repeat=n)})


def bf_markov(P, init):
    k = len(init)

    def table(n):
        out = {}
        for w in product(range(k), repeat=n):
            m = init[w[0]]
            for a, b in zip(w, w[1:]):
                m = m * P[a][b]
            out[w] = m
        return out

    return PathLaw(k, table)


def bf_transformation(T, nu):
    k = len(nu)

    def table(n):
        out = defaultdict(int)
        for x in range(k):
            w, y = [], x
            for _ in range(n):
                w.append(y)
                y = T[y]
            out[tuple(w)] += nu[x]
        return dict(out)

    return PathLaw(k, table)


def bf_point(k, path):
    def table(n):
        return {tuple(path[min(j, len(path) - 1)] for j in range(n)): 1}

    return PathLaw(k, table)


def bf_mix(t, a: PathLaw, b: PathLaw):
    def table(n):
        out = defaultdict(int)
        for w, m in a.paths(n).items():
            out[w] += t * m
        for w, m in b.paths(n).items():
            out[w] += (1 - t) * m
        return dict(out)

    return PathLaw(a.k, table)


def bf_product(a: PathLaw, b: PathLaw):
    def table(n):
        out = {}
        for u, mu in a.paths(n).items():
            for v, mv in b.paths(n).items():
                out[tuple(x * b.k + y for x, y in zip(u, v))] = mu * mv
        return out

    return PathLaw(a.k * b.k, table)


def bf_shift(a: PathLaw):
    def table(n):
        out = defaultdict(int)
        for w, m in a.paths(n + 1).items():
            out[w[1:]] += m
        return dict(out)

    return PathLaw(a.k, table)


def bf_restriction(a: PathLaw, r):
    def table(n):
        idx = [r[j] for j in range(n)]
        out = defaultdict(int)
        for w, m in a.paths(idx[-1] + 1).items():
            out[tuple(w[i] for i in idx)] += m
        return dict(out)

    return PathLaw(a.k, table)


def bf_dilation(a: PathLaw, k: int):
    def table(n):
        base = -(-n // k)
        return {tuple(x for x in w for _ in range(k))[:n]: m for w, m in a.paths(base).items()}

    return PathLaw(a.k, table)


def bf_factor(f, a: PathLaw, target_size: int):
    def table(n):
        out = defaultdict(int)
        for w, m in a.paths(n).items():
            out[tuple(f[x] for x in w)] += m
        return dict(out)

    return PathLaw(target_size, table)


def bf_block_recode(a: PathLaw, k: int):
    def table(n):
        out = defaultdict(int)
        for w, m in a.paths(n * k).items():
            z = []
            for j in range(n):
                v = 0
                for x in w[j * k:(j + 1) * k]:
                    v = v * a.k + x
                z.append(v)
            out[tuple(z)] += m
        return dict(out)

    return PathLaw(a.k ** k, table)


def cell_word_masses(law: PathLaw, cell_of, n: int) -> dict[tuple, object]:
    out = defaultdict(int)
    for w, m in law.paths(n).items():
        out[tuple(cell_of[x] for x in w)] += m
    return dict(out)


def bf_block_entropy(law: PathLaw, cell_of, n: int) -> float:
    masses = cell_word_masses(law, cell_of, n).values()
    return -math.fsum(float(m) * math.log(m) for m in masses if m != 0) + 0.0


def bf_mass(law: PathLaw, cells, n_states=None) -> object:
    """Mass of the cylinder ``x_j in cells[j]`` for ``j < len(cells)``."""
    n = len(cells)
    if n == 0:
        return 1
    return sum((m for w, m in law.paths(n).items() if all(x in c for x, c in zip(w, cells))), Fraction(0))


def bf_words(law: PathLaw, n: int) -> int:
    return len(law.paths(n))
