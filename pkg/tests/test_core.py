import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transop.core import (
    FiniteSystem,
    Measure,
    PartitionOfUnity,
    birkhoff_sum,
    delta_map,
    delta_power,
    empirical_measure,
    invariant_measures,
    is_invariant,
    point_partition,
    pushforward,
    random_partition,
)
from transop.errors import ArgumentError, DimensionError, NormalizationError

SYS2 = FiniteSystem([1, 0])
SYSI3 = FiniteSystem([0, 1, 2])
SYSD4 = FiniteSystem([0, 2, 0, 2])


def test_finite_system_validation():
    with pytest.raises(ArgumentError):
        FiniteSystem([])
    with pytest.raises(ArgumentError):
        FiniteSystem([0, 2])
    with pytest.raises(ArgumentError):
        FiniteSystem([0, -1])
    assert FiniteSystem([0.0, 1.0]).alpha.tolist() == [0, 1]
    assert FiniteSystem([1, 0]) == SYS2


@pytest.mark.parametrize(
    "sys, f, expected",
    [
        (SYS2, [3, 5], [5, 3]),
        (SYSI3, [1, 2, 3], [1, 2, 3]),
        (SYSD4, [1, 2, 3, 4], [1, 3, 1, 3]),
    ],
)
def test_delta_map(sys, f, expected):
    np.testing.assert_array_equal(delta_map(sys, f), expected)


def test_delta_map_dimension():
    with pytest.raises(DimensionError):
        delta_map(SYS2, [1, 2, 3])


def test_birkhoff_sum_examples():
    phi = np.array([0.3, -1.2])
    np.testing.assert_array_equal(birkhoff_sum(SYS2, phi, 1), phi)
    np.testing.assert_array_equal(birkhoff_sum(SYS2, [1, 2], 2), [3, 3])
    np.testing.assert_array_equal(birkhoff_sum(SYSD4, [0, 1, 2, 3], 2), [0, 3, 2, 5])
    with pytest.raises(ArgumentError):
        birkhoff_sum(SYS2, phi, 0)


def test_pushforward_examples():
    np.testing.assert_array_equal(pushforward(SYS2, [1, 0]).weights, [0, 1])
    mu = [0.2, 0.3, 0.5]
    np.testing.assert_array_equal(pushforward(SYSI3, mu).weights, mu)
    np.testing.assert_array_equal(pushforward(SYSD4, [0.25] * 4).weights, [0.5, 0, 0.5, 0])


def test_is_invariant_examples():
    assert is_invariant(SYS2, [0.5, 0.5])
    assert not is_invariant(SYS2, [1, 0])
    assert is_invariant(SYSD4, [1, 0, 0, 0])
    with pytest.raises(ArgumentError):
        is_invariant(SYS2, [0.5, 0.5], tol=0)


def test_empirical_measure_examples():
    np.testing.assert_array_equal(empirical_measure(SYSD4, 3, 1).weights, [0, 0, 0, 1])
    np.testing.assert_array_equal(empirical_measure(SYS2, 0, 2).weights, [0.5, 0.5])
    np.testing.assert_allclose(empirical_measure(SYSD4, 1, 3).weights, [1 / 3, 1 / 3, 1 / 3, 0], atol=1e-15)
    with pytest.raises(ArgumentError):
        empirical_measure(SYS2, 2, 1)


def test_invariant_measures_examples():
    assert [m.weights.tolist() for m in invariant_measures(SYS2)] == [[0.5, 0.5]]
    assert [m.weights.tolist() for m in invariant_measures(SYSI3)] == np.eye(3).tolist()
    assert [m.weights.tolist() for m in invariant_measures(SYSD4)] == [[1, 0, 0, 0]]


def _null_space_dim(sys):
    n = sys.n_points
    P = np.zeros((n, n))
    P[sys.alpha, np.arange(n)] = 1.0
    return n - np.linalg.matrix_rank(P - np.eye(n))


def test_invariant_measures_match_linear_algebra(rng):
    # oracle: the fixed-point space of the pushforward matrix has one
    # dimension per extreme invariant measure, and every vertex lies in it
    for _ in range(200):
        n = int(rng.integers(1, 9))
        sys = FiniteSystem(rng.integers(0, n, n))
        verts = invariant_measures(sys)
        assert len(verts) == _null_space_dim(sys)
        for v in verts:
            assert is_invariant(sys, v, 1e-10)
        W = np.array([v.weights for v in verts])
        assert np.linalg.matrix_rank(W) == len(verts)


def test_measure_validation():
    with pytest.raises(NormalizationError):
        Measure([0.5, 0.4])
    with pytest.raises(NormalizationError):
        Measure([1.5, -0.5])
    Measure([1 / 3, 1 / 3, 1 / 3])


def test_point_partition():
    D = point_partition(SYS2)
    np.testing.assert_array_equal(D.members, [[1, 0], [0, 1]])
    assert len(point_partition(SYSI3)) == 3
    np.testing.assert_array_equal(point_partition(SYSD4).members.sum(axis=0), 1)


def test_random_partition():
    one = random_partition(SYSD4, 1, 7)
    np.testing.assert_array_equal(one.members, np.ones((1, 4)))
    a = random_partition(SYSD4, 5, 11)
    b = random_partition(SYSD4, 5, 11)
    np.testing.assert_array_equal(a.members, b.members)
    assert np.all(a.members >= 0)
    assert np.max(np.abs(a.members.sum(axis=0) - 1)) <= 1e-12
    with pytest.raises(NormalizationError):
        PartitionOfUnity([[0.5, 0.5], [0.4, 0.5]])


# property tests

@st.composite
def systems(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    alpha = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return FiniteSystem(alpha)


def _vec(n, lo=-5.0, hi=5.0):
    return st.lists(st.floats(lo, hi, allow_nan=False), min_size=n, max_size=n).map(np.array)


@given(st.data())
def test_delta_is_multiplicative(data):
    sys = data.draw(systems())
    f = data.draw(_vec(sys.n_points))
    g = data.draw(_vec(sys.n_points))
    np.testing.assert_array_equal(delta_map(sys, f * g), delta_map(sys, f) * delta_map(sys, g))


@given(st.data())
def test_pushforward_is_adjoint(data):
    sys = data.draw(systems())
    w = data.draw(_vec(sys.n_points, 0.0, 1.0))
    if w.sum() == 0:
        w[0] = 1.0
    mu = Measure(w / w.sum())
    f = data.draw(_vec(sys.n_points))
    assert abs(mu(delta_map(sys, f)) - pushforward(sys, mu)(f)) <= 1e-12


@settings(max_examples=50)
@given(st.data())
def test_birkhoff_cocycle(data):
    sys = data.draw(systems())
    phi = data.draw(_vec(sys.n_points))
    m = data.draw(st.integers(1, 6))
    n = data.draw(st.integers(1, 6))
    lhs = birkhoff_sum(sys, phi, m + n)
    rhs = birkhoff_sum(sys, phi, m) + delta_power(sys, birkhoff_sum(sys, phi, n), m)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12, rtol=0)


@given(st.data())
def test_empirical_measure_is_birkhoff_average(data):
    sys = data.draw(systems())
    x = data.draw(st.integers(0, sys.n_points - 1))
    n = data.draw(st.integers(1, 10))
    f = data.draw(_vec(sys.n_points))
    assert abs(empirical_measure(sys, x, n)(f) - birkhoff_sum(sys, f, n)[x] / n) <= 1e-12
