import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdentropy import (
    CellWord,
    Distribution,
    Partition,
    StateSpace,
    dist_entropy,
    join,
    phi,
    power_partition,
    preimage_partition,
    product_partition,
    refines,
)

X3 = StateSpace.range(3)


def cells(p):
    return {frozenset(c) for c in p.cells}


# --- phi / entropy ----------------------------------------------------------

def test_phi_values():
    assert phi(0) == 0
    assert phi(1) == 0
    assert phi(0.5) == pytest.approx(-0.34657359027997264, abs=1e-15)
    assert phi(Fraction(1, 2)) == pytest.approx(0.5 * math.log(0.5), abs=1e-15)


def test_phi_rejects_negative():
    with pytest.raises(ValueError):
        phi(-1e-9)


def test_dist_entropy_values():
    assert dist_entropy(Distribution((1,))) == 0
    assert dist_entropy((0.5, 0.5)) == pytest.approx(math.log(2), abs=1e-15)
    assert dist_entropy((0.9, 0.1)) == pytest.approx(0.325082973391448, abs=1e-12)


@pytest.mark.parametrize("bad", [(0.5, 0.6), (), (1.5, -0.5), (Fraction(1, 3), Fraction(1, 3))])
def test_invalid_distributions(bad):
    with pytest.raises(ValueError):
        Distribution(bad)


def test_distribution_modes():
    d = Distribution((Fraction(1, 3), Fraction(2, 3)))
    assert d.exact and d.as_array().dtype == object
    f = Distribution((0.25, 0.75))
    assert not f.exact
    assert Distribution.uniform(4, exact=True).weights == (Fraction(1, 4),) * 4
    assert Distribution.point(3, 1).weights == (0, 1, 0)
    agg = Distribution((Fraction(1, 4), Fraction(1, 4), Fraction(1, 2))).aggregate(
        Partition.from_labels(X3, [[0, 1], [2]]))
    assert agg.weights == (Fraction(1, 2), Fraction(1, 2))


# --- state spaces and partitions -------------------------------------------

def test_state_space():
    s = StateSpace(("a", "b"))
    assert s.index("b") == 1 and s.index(0) == 0
    with pytest.raises(KeyError):
        s.index("z")
    with pytest.raises(ValueError):
        StateSpace(("a", "a"))
    assert s.product(StateSpace(("x", "y", "z"))).labels[4] == "(b,y)"
    assert s.power(2).labels == ("(a,a)", "(a,b)", "(b,a)", "(b,b)")


@pytest.mark.parametrize("bad", [[[0, 1]], [[0, 1], [1, 2]], [[0, 1, 2], []], [[0, 1, 2, 3]]])
def test_partition_validation(bad):
    with pytest.raises((ValueError, IndexError)):
        Partition(X3, tuple(frozenset(c) for c in bad))


def test_partition_helpers():
    p = Partition.from_assignment(X3, [1, 1, 0])
    assert p.cells == (frozenset({0, 1}), frozenset({2}))
    assert p.cell_of == (0, 0, 1)
    assert p.describe() == "{{0,1}, {2}}"
    assert p.same_cells(Partition(X3, (frozenset({2}), frozenset({0, 1}))))


def test_cell_word():
    p = Partition.singletons(X3)
    w = CellWord(p, (2, 0))
    assert w.cells == (frozenset({2}), frozenset({0}))
    with pytest.raises(IndexError):
        CellWord(p, (3,))


def test_join_examples():
    p = Partition.from_labels(X3, [[0, 1], [2]])
    q = Partition.from_labels(X3, [[0], [1, 2]])
    assert join(Partition.trivial(X3), p).same_cells(p)
    assert join(Partition.singletons(X3), p).same_cells(Partition.singletons(X3))
    assert join(p, q).same_cells(Partition.singletons(X3))
    with pytest.raises(ValueError):
        join(p, Partition.trivial(StateSpace.range(2)))


def test_refines_examples():
    p = Partition.from_labels(X3, [[0, 1], [2]])
    q = Partition.from_labels(X3, [[0], [1, 2]])
    assert refines(p, Partition.trivial(X3))
    assert not refines(Partition.trivial(X3), Partition.singletons(X3))
    assert refines(join(p, q), p)
    assert not refines(p, q)


def test_preimage_examples():
    q = Partition.from_labels(X3, [[0], [1, 2]])
    assert preimage_partition([0, 1, 2], q, X3).same_cells(q)
    assert preimage_partition([1, 1, 1], q, X3).same_cells(Partition.trivial(X3))
    y = Partition.singletons(StateSpace(("a", "b")))
    assert cells(preimage_partition([0, 0, 1], y)) == {frozenset({0, 1}), frozenset({2})}
    with pytest.raises(IndexError):
        preimage_partition([0, 5, 1], y)


def test_product_partition_examples():
    X, Y = StateSpace.range(2), StateSpace.range(3)
    assert len(product_partition(Partition.trivial(X), Partition.trivial(Y))) == 1
    assert product_partition(Partition.singletons(X), Partition.singletons(Y)).same_cells(
        Partition.singletons(X.product(Y)))
    p2 = Partition.singletons(X)
    q3 = Partition.singletons(Y)
    assert len(product_partition(p2, q3)) == 6
    # rectangle A x B sits at index i*|q| + j
    pr = product_partition(Partition.from_labels(X, [[0, 1]]), Partition.from_labels(Y, [[0], [1, 2]]))
    assert pr.cells[1] == frozenset({1, 2, 4, 5})


def test_power_partition_matches_iterated_product():
    p = Partition.from_labels(X3, [[0, 2], [1]])
    pp = power_partition(p, 2)
    assert pp.space == X3.power(2)
    # cell (A, B) contains x*3+y for x in A, y in B
    assert pp.cells[1] == frozenset({0 * 3 + 1, 2 * 3 + 1})
    assert power_partition(p, 1) is not None and len(power_partition(p, 3)) == 8


# --- hypothesis properties --------------------------------------------------

unit = st.floats(0, 1, allow_nan=False)
nonneg = st.floats(0, 50, allow_nan=False)


@given(nonneg, nonneg, unit)
def test_phi_convex(x, y, t):
    assert phi(t * x + (1 - t) * y) <= t * phi(x) + (1 - t) * phi(y) + 1e-9 * (1 + x + y)


def test_phi_convex_grid():
    g = np.linspace(0, 3, 31)
    for x in g:
        for y in g:
            for t in np.linspace(0, 1, 11):
                assert phi(t * x + (1 - t) * y) <= t * phi(x) + (1 - t) * phi(y) + 1e-12


def _normalise(raw):
    tot = math.fsum(raw)
    w = [r / tot for r in raw]
    w[-1] = 1 - math.fsum(w[:-1])
    return Distribution(tuple(max(x, 0.0) for x in w))


weights = st.lists(st.floats(1e-6, 1.0), min_size=1, max_size=8)


@given(weights)
def test_max_entropy_uniform(raw):
    d = _normalise(raw)
    m = len(d)
    h = dist_entropy(d)
    assert h <= math.log(m) + 1e-12
    if max(d.weights) - min(d.weights) > 1e-3:
        assert h < math.log(m) - 1e-12
    assert dist_entropy(Distribution.uniform(m)) == pytest.approx(math.log(m), abs=1e-12)


@given(st.lists(st.floats(0, 10), min_size=1, max_size=8))
def test_grouping_inequality(r):
    total = math.fsum(r)
    lhs = -math.fsum(phi(x) for x in r)
    rhs = -phi(total) + total * math.log(len(r))
    assert lhs <= rhs + 1e-9 * (1 + total)


assignments = st.lists(st.integers(0, 3), min_size=4, max_size=4)
X4 = StateSpace.range(4)


@given(assignments, assignments, assignments)
@settings(max_examples=200)
def test_join_algebra(a, b, c):
    p, q, r = (Partition.from_assignment(X4, v) for v in (a, b, c))
    assert join(p, q).same_cells(join(q, p))
    assert join(join(p, q), r).same_cells(join(p, join(q, r)))
    assert refines(join(p, q), p) and refines(join(p, q), q)


@given(assignments, assignments, assignments)
@settings(max_examples=200)
def test_refines_partial_order(a, b, c):
    p, q, r = (Partition.from_assignment(X4, v) for v in (a, b, c))
    assert refines(p, p)
    if refines(p, q) and refines(q, p):
        assert p.same_cells(q)
    if refines(p, q) and refines(q, r):
        assert refines(p, r)
