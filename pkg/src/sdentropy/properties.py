"""Seeded verification of the finite-n inequalities and identities.

Each registered check draws random instances from a seed, evaluates both
sides of one inequality or identity at every block length in range, and
reports the worst violation.  Limit statements are checked through the
finite-n inequalities that imply them, and against closed forms where one
exists (Markov, i.i.d., Parry).

>>> rep = run_check("dilation", seed=1)
>>> rep.verdict
'pass'
"""

from __future__ import annotations

import csv
import io
import math
import zlib
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .core import (
    Distribution,
    Partition,
    StateSpace,
    join,
    power_partition,
    preimage_partition,
    product_partition,
)
from .entropy import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    conditional_entropy_first_coord,
    entropy_series,
    markov_closed_form,
    transformation_block_entropy,
)
from .measures import (
    CylinderOracle,
    MarkovSpec,
    TransformationSpec,
    block_recode,
    convex_mix,
    dilation_pushforward,
    factor_pushforward,
    from_transformation,
    iid,
    markov,
    product_measure,
    product_sequence,
    restriction_pushforward,
    shift_pushforward,
    stationary_vector,
)
from .topological import Sft, ht_estimate, parry_measure, strong_components, support_check

__all__ = [
    "CheckConfig",
    "CheckReport",
    "Witness",
    "REGISTRY",
    "run_check",
    "run_all",
    "reports_to_csv",
    "reports_to_text",
    "random_stochastic",
    "random_markov",
    "random_partition",
    "random_oracle",
    "random_irreducible_sft",
]

GOLDEN_MEAN = ((1, 1), (1, 0))


@dataclass(frozen=True)
class CheckConfig:
    """Instance-generator settings shared by all checks.

    ``instances=None`` lets each check use its own default count.
    """

    instances: int | None = None
    max_states: int = 4
    max_n: int = 6
    horizon: int = 12
    budget: int = DEFAULT_BUDGET
    sfts: tuple = (GOLDEN_MEAN,)
    random_sfts: int = 2


@dataclass(frozen=True)
class Witness:
    inputs: str
    lhs: float
    rhs: float
    violation: float


@dataclass(frozen=True)
class CheckReport:
    check_name: str
    anchor: str
    instances: int
    max_violation: float
    tolerance: float
    witnesses: tuple[Witness, ...] = ()
    error: str | None = None

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return "error"
        return "pass" if self.max_violation <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


# ---------------------------------------------------------------- generators


def random_distribution(rng: np.random.Generator, k: int) -> Distribution:
    w = rng.dirichlet(np.ones(k))
    w /= math.fsum(w)
    return Distribution(tuple(w))


def random_stochastic(rng: np.random.Generator, k: int, support=None) -> np.ndarray:
    """Rows drawn uniformly from the simplex, optionally restricted to ``support``."""
    P = np.zeros((k, k))
    for i in range(k):
        cols = range(k) if support is None else np.flatnonzero(support[i])
        row = rng.dirichlet(np.ones(len(cols)))
        P[i, list(cols)] = row / math.fsum(row)
    return P


def random_markov(rng: np.random.Generator, k: int, stationary: bool = True, support=None,
                  space: StateSpace | None = None) -> MarkovSpec:
    P = random_stochastic(rng, k, support)
    if stationary:
        return MarkovSpec(P, stationary_vector(P), stationary=True, space=space)
    return MarkovSpec(P, random_distribution(rng, k), space=space)


def random_partition(rng: np.random.Generator, space: StateSpace, max_cells: int | None = None) -> Partition:
    """Random surjection of the states onto ``m`` cells, ``m`` uniform."""
    k = space.size
    m = int(rng.integers(1, min(k, max_cells or k) + 1))
    labels = np.concatenate([np.arange(m), rng.integers(0, m, size=k - m)])
    rng.shuffle(labels)
    return Partition.from_assignment(space, labels.tolist())


def random_oracle(rng: np.random.Generator, space: StateSpace) -> tuple[CylinderOracle, str]:
    """A random path measure of one of several kinds, with a short description."""
    k = space.size
    kind = ["markov", "markov_stationary", "iid", "product_sequence", "transformation", "mix"][int(rng.integers(6))]
    if kind == "markov":
        return markov(random_markov(rng, k, stationary=False, space=space)), "markov"
    if kind == "markov_stationary":
        return markov(random_markov(rng, k, space=space)), "markov(stationary)"
    if kind == "iid":
        return iid(random_distribution(rng, k), space), "iid"
    if kind == "product_sequence":
        laws = [random_distribution(rng, k) for _ in range(3)]
        return product_sequence(laws[:2], tail=laws[2:], space=space), "product_sequence"
    if kind == "transformation":
        T = rng.integers(0, k, size=k).tolist()
        return from_transformation(TransformationSpec(T, random_distribution(rng, k), space=space)), f"transformation(T={T})"
    t = float(rng.uniform())
    a = markov(random_markov(rng, k, stationary=False, space=space))
    b = iid(random_distribution(rng, k), space)
    return convex_mix(t, a, b), f"mix(t={t:.3f}, markov, iid)"


def random_irreducible_sft(rng: np.random.Generator, k: int) -> np.ndarray:
    while True:
        A = (rng.uniform(size=(k, k)) < 0.55).astype(int)
        if len(strong_components(A)) == 1 and A.sum() > k:
            return A


# ---------------------------------------------------------------- checks

# A check yields one Witness per instance; violation is max(0, lhs - rhs) for
# inequalities and |lhs - rhs| for identities.


def _ineq(inputs, lhs, rhs) -> Witness:
    return Witness(inputs, lhs, rhs, max(0.0, lhs - rhs))


def _eq(inputs, lhs, rhs) -> Witness:
    return Witness(inputs, lhs, rhs, abs(lhs - rhs))


def _worst(ws: list[Witness]) -> Witness:
    return max(ws, key=lambda w: w.violation)


def _space(rng, cfg, lo=2):
    return StateSpace.range(int(rng.integers(lo, cfg.max_states + 1)))


def _check_bound_log_cells(rng, cfg, count) -> Iterator[Witness]:
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X)
        s = entropy_series(mu, p, cfg.max_n, cfg.budget)
        yield _worst([_ineq(f"#{i} {desc} p={p.describe()} n={n}", a, math.log(len(p)))
                      for n, a in enumerate(s.values, 1)])


def _check_refinement_monotone(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X)
        q = join(p, random_partition(rng, X))
        sp = entropy_series(mu, p, cfg.max_n, cfg.budget)
        sq = entropy_series(mu, q, cfg.max_n, cfg.budget)
        yield _worst([_ineq(f"#{i} {desc} p={p.describe()} q={q.describe()} n={n}", a, b)
                      for n, (a, b) in enumerate(zip(sp.block_values, sq.block_values), 1)])


def _check_join_subadditive(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X)
        q = random_partition(rng, X)
        pq = entropy_series(mu, join(p, q), cfg.max_n, cfg.budget).block_values
        ep = entropy_series(mu, p, cfg.max_n, cfg.budget).block_values
        eq = entropy_series(mu, q, cfg.max_n, cfg.budget).block_values
        yield _worst([_ineq(f"#{i} {desc} p={p.describe()} q={q.describe()} n={n}", a, b + c)
                      for n, (a, b, c) in enumerate(zip(pq, ep, eq), 1)])


def _check_stationary_block_equality(rng, cfg, count):
    # entropy of the shift relative to the m-block partition, read off as the
    # last increment of E(mu, p, m + n - 1); must not depend on m
    X = StateSpace.range(2)
    S = Partition.singletons(X)
    N = cfg.horizon
    for i in range(count):
        spec = random_markov(rng, 2)
        e = entropy_series(markov(spec), S, N + 2, cfg.budget).block_values
        est = [e[m + N - 2] - e[m + N - 3] for m in (1, 2, 3)]
        yield Witness(f"#{i} markov(stationary) P={np.round(spec.transition, 4).tolist()} m=1,2,3 N={N}",
                      max(est), min(est), max(est) - min(est))


def _check_shift_invariance(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X)
        e = entropy_series(mu, p, cfg.max_n, cfg.budget).block_values
        es = (0.0,) + entropy_series(shift_pushforward(mu), p, cfg.max_n - 1, cfg.budget).block_values
        L = math.log(len(p))
        ws = []
        for n in range(1, cfg.max_n + 1):
            ws.append(_ineq(f"#{i} {desc} p={p.describe()} n={n} lower", es[n - 1], e[n - 1]))
            ws.append(_ineq(f"#{i} {desc} p={p.describe()} n={n} upper", e[n - 1], es[n - 1] + L))
        yield _worst(ws)


def _check_convexity(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, d1 = random_oracle(rng, X)
        rho, d2 = random_oracle(rng, X)
        t = float(rng.uniform())
        p = random_partition(rng, X)
        a = entropy_series(mu, p, cfg.max_n, cfg.budget).block_values
        b = entropy_series(rho, p, cfg.max_n, cfg.budget).block_values
        m = entropy_series(convex_mix(t, mu, rho), p, cfg.max_n, cfg.budget).block_values
        ws = []
        for n in range(cfg.max_n):
            avg = t * a[n] + (1 - t) * b[n]
            tag = f"#{i} t={t:.3f} {d1} | {d2} n={n + 1}"
            ws.append(_ineq(tag + " lower", avg, m[n]))
            ws.append(_ineq(tag + " upper", m[n], avg + math.log(2)))
        yield _worst(ws)


def _random_restriction(rng, k: int, length: int) -> list[int]:
    r, prev = [], -1
    for j in range(length):
        hi = (j + 1) * k - 1
        prev = int(rng.integers(prev + 1, hi + 1))
        r.append(prev)
    return r


def _check_restriction(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X, max_cells=3)
        k = int(rng.integers(1, 4))
        n_max = max(1, min(cfg.max_n, 8 // k))
        r = _random_restriction(rng, k, n_max)
        er = entropy_series(restriction_pushforward(mu, r), p, n_max, cfg.budget).block_values
        e = entropy_series(mu, p, k * n_max, cfg.budget).block_values
        yield _worst([_ineq(f"#{i} {desc} k={k} r={r} n={n}", er[n - 1], e[k * n - 1])
                      for n in range(1, n_max + 1)])


def _check_dilation(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X, max_cells=3)
        k = 1 + i % 3
        ed = entropy_series(dilation_pushforward(mu, k), p, 8, cfg.budget).block_values
        e = entropy_series(mu, p, 8, cfg.budget).block_values
        yield _worst([_eq(f"#{i} {desc} k={k} n={n}", ed[n - 1], e[-(-n // k) - 1]) for n in range(1, 9)])


def _check_factor(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        ny = int(rng.integers(1, X.size + 1))
        f = rng.integers(0, ny, size=X.size).tolist()
        Y = StateSpace.range(ny)
        q = random_partition(rng, Y)
        ef = entropy_series(factor_pushforward(f, mu, Y), q, cfg.max_n, cfg.budget).block_values
        e = entropy_series(mu, preimage_partition(f, q, X), cfg.max_n, cfg.budget).block_values
        yield _worst([_eq(f"#{i} {desc} f={f} n={n}", a, b) for n, (a, b) in enumerate(zip(ef, e), 1)])


def _cap_n(cells: int, cfg, limit: int = 20_000) -> int:
    n = 1
    while n < cfg.max_n and cells ** (n + 1) <= limit:
        n += 1
    return n


def _check_marginals(rng, cfg, count):
    for i in range(count):
        X = StateSpace.range(int(rng.integers(2, 4)))
        Y = StateSpace.range(int(rng.integers(2, 4)))
        XY = X.product(Y)
        pi, desc = random_oracle(rng, XY)
        ny = Y.size
        mu = factor_pushforward([z // ny for z in range(XY.size)], pi, X)
        rho = factor_pushforward([z % ny for z in range(XY.size)], pi, Y)
        p, q = random_partition(rng, X), random_partition(rng, Y)
        n_max = _cap_n(len(p) * len(q), cfg)
        e = entropy_series(pi, product_partition(p, q), n_max, cfg.budget).block_values
        a = entropy_series(mu, p, n_max, cfg.budget).block_values
        b = entropy_series(rho, q, n_max, cfg.budget).block_values
        ws = []
        for n in range(n_max):
            tag = f"#{i} {desc} |X|={X.size} |Y|={Y.size} n={n + 1}"
            ws.append(_ineq(tag + " upper", e[n], a[n] + b[n]))
            ws.append(_ineq(tag + " lower", max(a[n], b[n]), e[n]))
        yield _worst(ws)


def _check_product_additivity(rng, cfg, count):
    for i in range(count):
        X = StateSpace.range(int(rng.integers(2, 4)))
        Y = StateSpace.range(int(rng.integers(2, 4)))
        mu, d1 = random_oracle(rng, X)
        rho, d2 = random_oracle(rng, Y)
        p, q = random_partition(rng, X), random_partition(rng, Y)
        n_max = _cap_n(len(p) * len(q), cfg)
        e = entropy_series(product_measure(mu, rho), product_partition(p, q), n_max, cfg.budget).block_values
        a = entropy_series(mu, p, n_max, cfg.budget).block_values
        b = entropy_series(rho, q, n_max, cfg.budget).block_values
        yield _worst([_eq(f"#{i} {d1} x {d2} n={n + 1}", e[n], a[n] + b[n]) for n in range(n_max)])


def _check_block_recode(rng, cfg, count):
    for i in range(count):
        X = _space(rng, cfg)
        mu, desc = random_oracle(rng, X)
        p = random_partition(rng, X, max_cells=3)
        k = 2 + i % 2
        pk = power_partition(p, k)
        n_max = _cap_n(len(pk), cfg)
        ex = entropy_series(mu, p, k * n_max, cfg.budget).block_values
        ek = entropy_series(block_recode(mu, k), pk, n_max, cfg.budget).block_values
        yield _worst([_eq(f"#{i} {desc} p={p.describe()} k={k} n={n}", ek[n - 1], ex[k * n - 1])
                      for n in range(1, n_max + 1)])


def _random_transformation(rng, k: int) -> TransformationSpec:
    if rng.uniform() < 0.5:
        return TransformationSpec(rng.integers(0, k, size=k).tolist(), random_distribution(rng, k))
    # a permutation with a measure constant on its cycles is preserved
    T = rng.permutation(k).tolist()
    w = np.zeros(k)
    seen = set()
    for x in range(k):
        if x in seen:
            continue
        cyc, y = [], x
        while y not in seen:
            seen.add(y)
            cyc.append(y)
            y = T[y]
        w[cyc] = rng.uniform(0.1, 1.0)
    w /= w.sum()
    return TransformationSpec(T, Distribution(tuple(w)))


def _check_transformation_equality(rng, cfg, count):
    for i in range(count):
        k = int(rng.integers(2, 6))
        spec = _random_transformation(rng, k)
        p = random_partition(rng, spec.space)
        e = entropy_series(from_transformation(spec), p, 6, cfg.budget).block_values
        yield _worst([_eq(f"#{i} T={list(spec.map)} p={p.describe()} n={n}", e[n - 1],
                          transformation_block_entropy(spec, p, n)) for n in range(1, 7)])


def _check_conditional_lemma(rng, cfg, count):
    # for stationary mu: a_n(p) <= a_n(q) + H(p | q) at every n
    for i in range(count):
        X = _space(rng, cfg)
        spec = random_markov(rng, X.size)
        mu = markov(spec)
        p, q = random_partition(rng, X), random_partition(rng, X)
        h = conditional_entropy_first_coord(mu, p, q)
        ap = entropy_series(mu, p, cfg.max_n, cfg.budget).values
        aq = entropy_series(mu, q, cfg.max_n, cfg.budget).values
        yield _worst([_ineq(f"#{i} p={p.describe()} q={q.describe()} n={n}", a, b + h)
                      for n, (a, b) in enumerate(zip(ap, aq), 1)])


def _variational_sfts(rng, cfg) -> list[np.ndarray]:
    mats = [np.array(m) for m in cfg.sfts]
    for _ in range(cfg.random_sfts):
        mats.append(random_irreducible_sft(rng, int(rng.integers(3, 5))))
    return mats


def _check_variational(rng, cfg, count):
    N = cfg.horizon
    for A in _variational_sfts(rng, cfg):
        s = Sft(A)
        ht = ht_estimate(s, N)
        tag = f"sft={s.allowed.tolist()}"
        parry = parry_measure(s)
        yield _eq(f"{tag} parry", markov_closed_form(parry), ht.exact)
        n_fin = _cap_n(s.size, cfg, limit=50_000)
        for i in range(count):
            spec = random_markov(rng, s.size, support=s.allowed, space=s.space)
            mu = markov(spec)
            sup = support_check(mu, s, cfg.max_n)
            if not sup:
                yield Witness(f"{tag} #{i} support violated by {sup.witness}", 1.0, 0.0, 1.0)
                continue
            ws = [_ineq(f"{tag} #{i} closed form", markov_closed_form(spec), ht.exact)]
            # finite-n form: the support has at most N_S(n) words of length n
            a = entropy_series(mu, Partition.singletons(s.space), n_fin, cfg.budget).values
            ws += [_ineq(f"{tag} #{i} n={n}", a[n - 1], ht.values[n - 1]) for n in range(1, n_fin + 1)]
            yield _worst(ws)


def _check_stationary_monotone(rng, cfg, count):
    N = cfg.horizon
    for i in range(count):
        if i % 2 == 0:
            k = int(rng.integers(2, cfg.max_states + 1))
            mu = markov(random_markov(rng, k))
            X = mu.space
            p = random_partition(rng, X, max_cells=2)
            desc = f"markov(stationary, k={k})"
        else:
            k = int(rng.integers(2, 6))
            spec = _random_transformation(rng, k)
            while not spec.preserving:
                spec = _random_transformation(rng, k)
            mu = from_transformation(spec)
            p = random_partition(rng, spec.space)
            desc = f"transformation(T={list(spec.map)})"
        v = entropy_series(mu, p, N, cfg.budget).values
        yield _worst([_ineq(f"#{i} {desc} p={p.describe()} n={n + 1}", v[n], v[n - 1]) for n in range(1, N)])


def _check_affine_stationary(rng, cfg, count):
    # 0 <= E(mix) - [t E(mu) + (1-t) E(rho)] <= binary entropy of t, at every n;
    # dividing by n gives affineness of the limit on stationary measures
    N = cfg.horizon
    for i in range(count):
        X = StateSpace.range(2)
        S = Partition.singletons(X)
        s1, s2 = random_markov(rng, 2), random_markov(rng, 2)
        t = float(rng.uniform(0.05, 0.95))
        a = entropy_series(markov(s1), S, N, cfg.budget).block_values
        b = entropy_series(markov(s2), S, N, cfg.budget).block_values
        m = entropy_series(convex_mix(t, markov(s1), markov(s2)), S, N, cfg.budget).block_values
        ht = -(t * math.log(t) + (1 - t) * math.log(1 - t))
        ws = []
        for n in range(N):
            excess = m[n] - (t * a[n] + (1 - t) * b[n])
            ws.append(_ineq(f"#{i} t={t:.3f} n={n + 1} lower", 0.0, excess))
            ws.append(_ineq(f"#{i} t={t:.3f} n={n + 1} upper", excess, ht))
        yield _worst(ws)


@dataclass(frozen=True)
class _Entry:
    fn: Callable
    anchor: str
    tolerance: float
    default_instances: int


REGISTRY: dict[str, _Entry] = {
    "bound_log_cells": _Entry(_check_bound_log_cells, "block entropy per symbol <= log |P|", 1e-10, 100),
    "refinement_monotone": _Entry(_check_refinement_monotone, "P finer than Q => larger entropy", 1e-10, 100),
    "join_subadditive": _Entry(_check_join_subadditive, "entropy of P v Q <= sum", 1e-10, 100),
    "stationary_block_equality": _Entry(_check_stationary_block_equality,
                                        "stationary: shift entropy of m-blocks independent of m", 2e-3, 20),
    "shift_invariance": _Entry(_check_shift_invariance, "shift sandwich E(Sh mu, n-1) <= E(mu, n) <= + log|P|", 1e-10, 100),
    "convexity": _Entry(_check_convexity, "mixture sandwich with log 2 slack", 1e-10, 100),
    "restriction": _Entry(_check_restriction, "r_n <= (n+1)k - 1 => E(R mu, n) <= E(mu, kn)", 1e-10, 100),
    "dilation": _Entry(_check_dilation, "E(D mu, n) = E(mu, ceil(n/k))", 1e-12, 50),
    "factor": _Entry(_check_factor, "E(f mu, Q, n) = E(mu, f^-1 Q, n)", 1e-10, 50),
    "marginals": _Entry(_check_marginals, "max(marginals) <= coupling <= sum(marginals)", 1e-10, 100),
    "product_additivity": _Entry(_check_product_additivity, "E(mu x rho) = E(mu) + E(rho)", 1e-10, 50),
    "block_recode": _Entry(_check_block_recode, "E over X^k at n = E over X at kn", 1e-10, 50),
    "transformation_equality": _Entry(_check_transformation_equality,
                                      "E(mu_(T,nu), n) = E(nu, join of T^-i P)", 1e-12, 50),
    "conditional_lemma": _Entry(_check_conditional_lemma, "stationary: a_n(P) <= a_n(Q) + H(P|Q)", 1e-10, 50),
    "variational": _Entry(_check_variational, "stationary, supported on S => entropy <= log rho", 1e-9, 50),
    "stationary_monotone": _Entry(_check_stationary_monotone, "stationary: a_n nonincreasing", 1e-12, 50),
    "affine_stationary": _Entry(_check_affine_stationary, "stationary mixtures: excess in [0, H(t)]", 1e-10, 30),
}


def _rng(name: str, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def run_check(name: str, config: CheckConfig | None = None, seed: int = 0, keep: int = 3) -> CheckReport:
    """Run one registered check; deterministic in ``(name, config, seed)``.

    Budget overruns propagate as :class:`BudgetExceeded`.
    """
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}; registered checks: {', '.join(REGISTRY)}")
    cfg = config or CheckConfig()
    entry = REGISTRY[name]
    count = cfg.instances if cfg.instances is not None else entry.default_instances
    ws = list(entry.fn(_rng(name, seed), cfg, count))
    worst = sorted(range(len(ws)), key=lambda j: (-ws[j].violation, j))[:keep]
    max_v = max((w.violation for w in ws), default=0.0)
    return CheckReport(name, entry.anchor, len(ws), max_v, entry.tolerance, tuple(ws[j] for j in worst))


def run_all(config: CheckConfig | None = None, seed: int = 0, names=None) -> list[CheckReport]:
    """Run several checks (all by default), sorted by name.

    A budget overrun is reported on the affected check (verdict ``error``)
    instead of aborting the run.
    """
    if names is None:
        names = list(REGISTRY)
    else:
        names = list(names)
        if not names:
            raise ValueError("empty check filter")
        unknown = [n for n in names if n not in REGISTRY]
        if unknown:
            raise KeyError(f"unknown checks {unknown}; registered checks: {', '.join(REGISTRY)}")
    out = []
    for name in sorted(names):
        try:
            out.append(run_check(name, config, seed))
        except BudgetExceeded as exc:
            e = REGISTRY[name]
            out.append(CheckReport(name, e.anchor, 0, math.inf, e.tolerance, error=str(exc)))
    return out


def _g(x: float) -> str:
    return format(x, ".15g")


def reports_to_csv(reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "verdict", "instances", "max_violation", "tolerance", "worst_inputs", "worst_lhs", "worst_rhs"])
    for r in reports:
        top = r.witnesses[0] if r.witnesses else None
        w.writerow([r.check_name, r.verdict, r.instances, _g(r.max_violation), _g(r.tolerance),
                    top.inputs if top else (r.error or ""),
                    _g(top.lhs) if top else "", _g(top.rhs) if top else ""])
    return buf.getvalue()


def reports_to_text(reports: list[CheckReport]) -> str:
    lines = []
    for r in reports:
        lines.append(f"{r.verdict.upper():5s} {r.check_name:26s} instances={r.instances:<4d} "
                     f"max_violation={_g(r.max_violation)} tol={_g(r.tolerance)}  [{r.anchor}]")
        if r.error:
            lines.append(f"      error: {r.error}")
        for wt in r.witnesses:
            lines.append(f"      lhs={_g(wt.lhs)} rhs={_g(wt.rhs)} viol={_g(wt.violation)}  {wt.inputs}")
    failed = sum(not r.passed for r in reports)
    lines.append(f"{len(reports) - failed}/{len(reports)} checks passed")
    return "\n".join(lines) + "\n"
