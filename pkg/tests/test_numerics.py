import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import solve_continuous_are

from etrc.errors import (NonFinite, NonStabilizable, OutOfRange, Overflow,
                         RankDeficient, Singular)
from etrc.numerics import (HistoryBuffer, care_residual, is_hurwitz,
                           left_pseudo_inverse, matrix_exponential, rk4_step,
                           solve_care)
from etrc.plant import paper_plant
from etrc.synthesis import build_augmented


def test_care_scalar_unit():
    # -K^2 + 1 = 0, stabilizing root K = 1
    k = solve_care([[0.0]], [[1.0]], [[1.0]], [[1.0]])
    assert abs(k[0, 0] - 1.0) < 1e-12


def test_care_scalar_stable_plant():
    # -2K - K^2 + 1 = 0, positive root sqrt(2) - 1
    k = solve_care([[-1.0]], [[1.0]], [[1.0]], [[1.0]])
    assert abs(k[0, 0] - (math.sqrt(2.0) - 1.0)) < 1e-12


def test_care_benchmark_augmentation_vs_scipy():
    plant = paper_plant()
    aug = build_augmented(plant, omega_c=100.0)
    q = np.diag([100.0, 100.0, 100.0, 20000.0, 0.001])
    r = np.array([[1.0]])
    k = solve_care(aug.a_bar, aug.b_bar, q, r)
    assert care_residual(aug.a_bar, aug.b_bar, q, r, k) < 1e-9
    assert np.linalg.norm(k - k.T) < 1e-10
    assert np.min(np.linalg.eigvalsh(k)) >= -1e-10
    acl = aug.a_bar - aug.b_bar @ np.linalg.solve(r, aug.b_bar.T @ k)
    assert is_hurwitz(acl)
    # independent oracle: SciPy's direct Hamiltonian-based solver
    k_ref = solve_continuous_are(aug.a_bar, aug.b_bar, q, r)
    assert np.allclose(k, k_ref, rtol=1e-7, atol=1e-7 * np.linalg.norm(k_ref))


def test_care_random_systems_vs_scipy(rng):
    for n, m in [(2, 1), (3, 2), (5, 1), (6, 3)]:
        a = rng.normal(size=(n, n))
        b = rng.normal(size=(n, m))
        q_half = rng.normal(size=(n, n))
        q = q_half.T @ q_half + 0.1 * np.eye(n)
        r = np.eye(m) * rng.uniform(0.5, 2.0)
        k = solve_care(a, b, q, r)
        k_ref = solve_continuous_are(a, b, q, r)
        assert np.allclose(k, k_ref, rtol=1e-6, atol=1e-6 * np.linalg.norm(k_ref))


def test_care_rejects_singular_r():
    with pytest.raises(Singular):
        solve_care([[0.0]], [[1.0]], [[1.0]], [[0.0]])


def test_care_rejects_unstabilizable_pair():
    with pytest.raises(NonStabilizable):
        solve_care([[1.0]], [[0.0]], [[1.0]], [[1.0]])


def test_hurwitz_examples():
    assert is_hurwitz([[-1.0, 0.0], [0.0, -2.0]])
    assert not is_hurwitz([[0.0, 1.0], [-1.0, 0.0]])


def test_hurwitz_benchmark_observer():
    plant = paper_plant()
    l_gain = np.array([[0.52], [2.215], [-0.245]])
    assert is_hurwitz(plant.a - l_gain @ plant.c)


def test_expm_zero_matrix():
    assert np.array_equal(matrix_exponential(np.zeros((4, 4)), 5.0), np.eye(4))


def test_expm_scalar():
    assert abs(matrix_exponential([[-1.0]], 1.0)[0, 0] - math.exp(-1.0)) < 1e-14


def test_expm_nilpotent():
    out = matrix_exponential([[0.0, 1.0], [0.0, 0.0]], 2.0)
    assert np.allclose(out, [[1.0, 2.0], [0.0, 1.0]], atol=1e-14)


def test_expm_semigroup_property(rng):
    for _ in range(10):
        a = rng.normal(size=(4, 4))
        a *= min(1.0, 5.0 / np.linalg.norm(a))
        a -= (np.max(np.linalg.eigvals(a).real) + 0.1) * np.eye(4)
        t1, t2 = rng.uniform(0.0, 1.0, size=2)
        lhs = matrix_exponential(a, t1 + t2)
        rhs = matrix_exponential(a, t1) @ matrix_exponential(a, t2)
        assert np.allclose(lhs, rhs, atol=1e-8)


def test_expm_overflow():
    with np.errstate(over="ignore"), pytest.raises(Overflow):
        matrix_exponential([[1000.0]], 1000.0)


def test_pinv_unit_column():
    assert np.allclose(left_pseudo_inverse([[1.0], [0.0], [0.0]]),
                       [[1.0, 0.0, 0.0]], atol=1e-15)


def test_pinv_scaled_column():
    assert np.allclose(left_pseudo_inverse([[0.0], [2.0], [0.0]]),
                       [[0.0, 0.5, 0.0]], atol=1e-15)


def test_pinv_benchmark_input_column():
    out = left_pseudo_inverse([[28.06], [0.0], [0.0]])
    assert np.allclose(out, [[1.0 / 28.06, 0.0, 0.0]], atol=1e-15)


def test_pinv_identity_property(rng):
    for rows, cols in [(3, 1), (5, 2), (10, 3), (4, 4)]:
        b = rng.normal(size=(rows, cols))
        assert np.allclose(left_pseudo_inverse(b) @ b, np.eye(cols), atol=1e-12)


def test_pinv_rank_deficient():
    with pytest.raises(RankDeficient):
        left_pseudo_inverse(np.zeros((3, 1)))


def test_history_round_trip_bit_identical():
    buf = HistoryBuffer(step=0.25, capacity=8, t_first=0.0, dim=2)
    values = [np.array([i * 0.1, -i]) for i in range(6)]
    for v in values:
        buf.append(v)
    for i, v in enumerate(values):
        assert np.array_equal(buf.sample(i * 0.25), v)


def test_history_constant_fill():
    buf = HistoryBuffer(step=0.5, capacity=10, t_first=-2.0)
    buf.extend_constant(3.5, 6)
    for t in (-2.0, -1.5, -0.7, 0.4):  # -0.7 rounds to a stored grid point
        assert buf.sample(t)[0] == 3.5


def test_history_sine_grid_lookup():
    h = 1e-3
    buf = HistoryBuffer(step=h, capacity=1001, t_first=0.0)
    for k in range(1001):
        buf.append(math.sin(k * h))
    assert buf.sample(0.5)[0] == math.sin(0.5)


def test_history_initial_window_clamps_to_zero():
    # zero-initialized history: every lookup at or before time zero is zero
    buf = HistoryBuffer(step=1e-3, capacity=3000, t_first=-2.0)
    buf.extend_constant(0.0, 2001)
    for t in (-2.0, -1.234, 0.0, -5.0):  # before t_first clamps to oldest
        assert buf.sample(t)[0] == 0.0


def test_history_out_of_range():
    buf = HistoryBuffer(step=0.1, capacity=3, t_first=0.0)
    for i in range(6):
        buf.append(float(i))
    with pytest.raises(OutOfRange):
        buf.sample(0.0)  # overwritten by the ring
    with pytest.raises(OutOfRange):
        buf.sample(0.7)  # not yet written


def test_rk4_zero_field():
    x0 = np.array([1.0, -2.0])
    assert np.array_equal(rk4_step(lambda t, x: np.zeros(2), 0.0, x0, 0.5), x0)


def test_rk4_exponential_decay():
    out = rk4_step(lambda t, x: -x, 0.0, np.array([1.0]), 0.1)
    assert abs(out[0] - 0.9048375) < 1e-12  # the exact RK4 value
    assert abs(out[0] - math.exp(-0.1)) <= 1e-7


def test_rk4_exact_for_constant_rate():
    out = rk4_step(lambda t, x: np.array([1.0]), 0.0, np.array([0.0]), 0.25)
    assert out[0] == 0.25


def test_rk4_exact_for_cubic_integrand():
    out = rk4_step(lambda t, x: np.array([3.0 * t * t]), 0.0, np.array([0.0]), 0.7)
    assert abs(out[0] - 0.7 ** 3) < 1e-15


def test_rk4_fast_decay_accuracy():
    # reproduces exp(-100 t) over 0.1 s within 1e-8 at h = 1e-4
    w = 100.0
    h = 1e-4
    x = np.array([1.0])
    worst = 0.0
    for k in range(1000):
        x = rk4_step(lambda t, s: -w * s, k * h, x, h)
        worst = max(worst, abs(x[0] - math.exp(-w * (k + 1) * h)))
    assert worst < 1e-8


def test_rk4_nonfinite_detection():
    with pytest.raises(NonFinite):
        rk4_step(lambda t, x: np.array([math.nan]), 0.0, np.array([1.0]), 0.1)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
def test_history_property_round_trip(values):
    buf = HistoryBuffer(step=0.5, capacity=len(values), t_first=0.0)
    for v in values:
        buf.append(v)
    for i, v in enumerate(values):
        assert buf.sample(i * 0.5)[0] == v
