import math
from collections import Counter
from fractions import Fraction as F

import numpy as np
import pytest

import bruteforce as bf
from cases import CASES, P_EX, PI_EX
from sdentropy import (
    BudgetExceeded,
    Distribution,
    EntropySeries,
    MarkovSpec,
    Partition,
    StateSpace,
    TransformationSpec,
    block_entropy,
    block_mass_profile,
    block_recode,
    conditional_entropy_first_coord,
    dilation_pushforward,
    entropy_series,
    factor_pushforward,
    from_transformation,
    hsd_estimate,
    hsd_full,
    iid,
    iid_closed_form,
    joined_partition,
    markov,
    markov_closed_form,
    parry_measure,
    point_path,
    power_partition,
    preimage_partition,
    product_measure,
    product_partition,
    transformation_block_entropy,
)
from sdentropy.topological import Sft

X2, X3 = StateSpace.range(2), StateSpace.range(3)
LN2 = math.log(2)
H_EX = 0.386427007919531  # (5/6) H(0.9, 0.1) + (1/6) ln 2, by hand


def chain(exact=True):
    P = P_EX if exact else [[0.9, 0.1], [0.5, 0.5]]
    return MarkovSpec(P, PI_EX if exact else (5 / 6, 1 / 6), stationary=True)


def series_of(values, stationary=False):
    return EntropySeries(tuple(values), tuple(v * (i + 1) for i, v in enumerate(values)), 2, stationary)


# --- block entropy examples --------------------------------------------------

def test_iid_uniform_block_entropy():
    mu = iid(Distribution.uniform(2))
    for n in range(1, 8):
        assert block_entropy(mu, Partition.singletons(X2), n) == pytest.approx(n * LN2, abs=1e-12)


def test_trivial_partition_gives_zero():
    mu = markov(chain())
    for n in (1, 4, 9):
        assert block_entropy(mu, Partition.trivial(X2), n) == 0


def test_markov_two_step():
    pij = [[PI_EX[i] * P_EX[i][j] for j in range(2)] for i in range(2)]
    expected = -sum(float(x) * math.log(x) for row in pij for x in row)
    got = block_entropy(markov(chain()), Partition.singletons(X2), 2)
    assert got == pytest.approx(expected, abs=1e-14)
    rows = (5 / 6) * 0.325082973391448 + (1 / 6) * LN2
    assert got == pytest.approx(-((5 / 6) * math.log(5 / 6) + (1 / 6) * math.log(1 / 6)) + rows, abs=1e-12)


def test_block_entropy_input_errors():
    with pytest.raises(ValueError):
        block_entropy(iid(Distribution.uniform(2)), Partition.singletons(X2), 0)
    with pytest.raises(ValueError):
        block_entropy(iid(Distribution.uniform(2)), Partition.singletons(X3), 2)


@pytest.mark.parametrize("name,mu,law", CASES, ids=[c[0] for c in CASES])
def test_block_entropy_matches_path_enumeration(name, mu, law):
    rng = np.random.default_rng(3)
    k = mu.space.size
    parts = [Partition.singletons(mu.space), Partition.from_assignment(mu.space, rng.integers(0, 2, size=k))]
    for p in parts:
        for n in range(1, 5 if k < 5 else 3):
            ref = bf.bf_block_entropy(law, p.cell_of, n)
            assert block_entropy(mu, p, n) == pytest.approx(ref, abs=1e-12)
            masses = bf.cell_word_masses(law, p.cell_of, n).values()
            assert block_mass_profile(mu, p, n) == Counter(m for m in masses if m != 0)


# --- budget and workers ------------------------------------------------------

def test_budget_error_names_cap():
    mu = iid(Distribution.uniform(3))
    with pytest.raises(BudgetExceeded, match="100"):
        block_entropy(mu, Partition.singletons(X3), 5, budget=100)


def test_series_budget_keeps_partial():
    mu = iid(Distribution.uniform(3))
    with pytest.raises(BudgetExceeded) as info:
        entropy_series(mu, Partition.singletons(X3), 8, budget=100)
    part = info.value.partial
    assert part.horizon == 4 and info.value.n == 5
    assert part.values == pytest.approx([math.log(3)] * 4, abs=1e-12)


def test_pruning_keeps_zero_mass_words_out_of_budget():
    # a deterministic rotation has one word per start state regardless of n
    mu = from_transformation(TransformationSpec([1, 2, 0], Distribution.uniform(3)))
    assert block_entropy(mu, Partition.singletons(X3), 40, budget=3) == pytest.approx(math.log(3))


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_workers_do_not_change_result(workers):
    mu = markov(MarkovSpec([[0.2, 0.5, 0.3], [0.6, 0.1, 0.3], [0.3, 0.3, 0.4]]))
    p = Partition.singletons(X3)
    assert block_entropy(mu, p, 8, workers=workers) == block_entropy(mu, p, 8)
    assert entropy_series(mu, p, 6, workers=workers).values == entropy_series(mu, p, 6).values


# --- series and estimators ---------------------------------------------------

def test_series_fields():
    s = entropy_series(markov(chain(False)), Partition.singletons(X2), 12)
    assert s.horizon == 12 and s.n_cells == 2 and s.stationary
    assert s.monotone_nonincreasing
    for n in range(2, 13):
        assert s.increments[n - 1] == pytest.approx(H_EX, abs=1e-10)
    assert s.values[-1] == pytest.approx(H_EX, abs=0.05)


def test_estimate_policies():
    assert hsd_estimate(series_of([0.3] * 5)).value == 0.3
    dec = hsd_estimate(series_of([0.9, 0.7, 0.6, 0.55], stationary=True))
    assert dec.value == 0.55 and dec.is_upper_bound and dec.policy == "last"
    est = hsd_estimate(series_of([0.5, 0.7, 0.6, 0.6]))
    assert est.value == 0.6 and est.policy == "tail-max(window=2)" and not est.is_upper_bound
    inc = hsd_estimate(series_of([1.0, 0.75]), "increment")
    assert inc.value == pytest.approx(0.5)
    with pytest.raises(ValueError):
        hsd_estimate(series_of([0.1]), "median")


def test_hsd_full():
    for k in (2, 3, 4):
        est = hsd_full(iid(Distribution.uniform(k)), 6)
        assert est.value == pytest.approx(math.log(k), abs=1e-12)
        assert "singleton" in est.note
    assert hsd_full(point_path(X3, [1, 2]), 8).value == 0
    golden = parry_measure(Sft([[1, 1], [1, 0]]))
    lam = (1 + math.sqrt(5)) / 2
    est = hsd_full(markov(golden), 14, policy="increment")
    assert est.value == pytest.approx(math.log(lam), abs=1e-9)


# --- closed forms ------------------------------------------------------------

def test_markov_closed_form():
    assert markov_closed_form(MarkovSpec([[1, 0], [0, 1]], (F(1, 2), F(1, 2)), stationary=True)) == 0
    assert markov_closed_form(MarkovSpec([[0.5, 0.5], [0.5, 0.5]], (0.5, 0.5), stationary=True)) == pytest.approx(LN2)
    assert markov_closed_form(chain()) == pytest.approx(H_EX, abs=1e-14)
    with pytest.raises(ValueError):
        markov_closed_form(MarkovSpec(P_EX, (1, 0)))


def test_iid_closed_form():
    nu = Distribution((0.25, 0.25, 0.5))
    assert iid_closed_form(nu, Partition.trivial(X3)) == 0
    assert iid_closed_form(Distribution.uniform(3), Partition.singletons(X3)) == pytest.approx(math.log(3))
    assert iid_closed_form(nu, Partition.from_labels(X3, [[0, 1], [2]])) == pytest.approx(LN2)


def test_transformation_block_entropy_examples():
    nu = Distribution((0.1, 0.2, 0.7))
    ident = TransformationSpec([0, 1, 2], nu)
    p = Partition.from_labels(X3, [[0, 1], [2]])
    assert transformation_block_entropy(ident, p, 5) == pytest.approx(iid_closed_form(nu, p))
    cyc = TransformationSpec([1, 2, 0], Distribution.uniform(3))
    assert transformation_block_entropy(cyc, Partition.singletons(X3), 3) == pytest.approx(math.log(3))
    assert transformation_block_entropy(cyc, Partition.trivial(X3), 4) == 0
    assert joined_partition([1, 2, 0], Partition.from_labels(X3, [[0], [1, 2]]), 2).same_cells(
        Partition.singletons(X3))


def test_conditional_entropy_examples():
    mu = iid(Distribution((0.9, 0.1)))
    p = Partition.singletons(X2)
    assert conditional_entropy_first_coord(mu, p, p) == 0
    assert conditional_entropy_first_coord(mu, p, Partition.trivial(X2)) == pytest.approx(0.325082973391448)


# --- exact identities in rational mode ---------------------------------------

RAT = MarkovSpec([[F(1, 2), F(1, 3), F(1, 6)], [0, F(1, 4), F(3, 4)], [F(2, 5), F(2, 5), F(1, 5)]],
                 (F(1, 3), F(1, 3), F(1, 3)))


def test_dilation_profile_exact():
    mu = markov(RAT)
    p = Partition.from_labels(X3, [[0, 2], [1]])
    for k in (1, 2, 3):
        d = dilation_pushforward(mu, k)
        for n in range(1, 9):
            assert block_mass_profile(d, p, n) == block_mass_profile(mu, p, -(-n // k))


def test_factor_profile_exact():
    mu = markov(RAT)
    f = [1, 0, 1]
    q = Partition.singletons(X2)
    pre = preimage_partition(f, q, X3)
    fm = factor_pushforward(f, mu, X2)
    for n in range(1, 7):
        assert block_mass_profile(fm, q, n) == block_mass_profile(mu, pre, n)


def test_block_recode_profile_exact():
    mu = markov(RAT)
    p = Partition.singletons(X3)
    for k in (2, 3):
        rec = block_recode(mu, k)
        for n in range(1, 4):
            assert block_mass_profile(rec, power_partition(p, k), n) == block_mass_profile(mu, p, n * k)


def test_product_profile_factorises_exactly():
    mu, rho = markov(RAT), iid(Distribution((F(1, 4), F(3, 4))))
    p, q = Partition.from_labels(X3, [[0], [1, 2]]), Partition.singletons(X2)
    pm = product_measure(mu, rho)
    pq = product_partition(p, q)
    for n in range(1, 5):
        a, b = block_mass_profile(mu, p, n), block_mass_profile(rho, q, n)
        expect = Counter()
        for x, cx in a.items():
            for y, cy in b.items():
                expect[x * y] += cx * cy
        assert block_mass_profile(pm, pq, n) == expect
        assert block_entropy(pm, pq, n) == pytest.approx(block_entropy(mu, p, n) + block_entropy(rho, q, n), abs=1e-12)


def test_transformation_equality_exact():
    rng = np.random.default_rng(1)
    for _ in range(10):
        k = int(rng.integers(2, 6))
        T = rng.integers(0, k, size=k).tolist()
        raw = rng.integers(1, 7, size=k)
        nu = Distribution(tuple(F(int(r), int(raw.sum())) for r in raw))
        spec = TransformationSpec(T, nu)
        p = Partition.from_assignment(StateSpace.range(k), rng.integers(0, 3, size=k))
        mu = from_transformation(spec)
        for n in range(1, 7):
            joined = joined_partition(T, p, n)
            assert block_mass_profile(mu, p, n) == Counter(
                m for m in nu.aggregate(joined).weights if m != 0)


def test_markov_increment_exact_chain_rule():
    mu = markov(chain())
    p = Partition.singletons(X2)
    h = markov_closed_form(chain())
    prev = block_entropy(mu, p, 1)
    for n in range(2, 10):
        cur = block_entropy(mu, p, n)
        assert cur - prev == pytest.approx(h, abs=1e-10)
        prev = cur
