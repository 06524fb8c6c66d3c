import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etrc.apetm import (ADAPTIVE, STATIC, TriggerState, check_and_update,
                        held_value, initial_transmission, saturate,
                        update_threshold)
from etrc.errors import InvalidBounds, NotOnGrid


def make_trigger(mode=ADAPTIVE, rho=0.5, kappa=0.01, rho_lo=0.01, rho_hi=0.99, n=3):
    trig = TriggerState(held=np.zeros(n), rho=rho, check_period=0.5,
                        psi1=np.eye(n), psi2=np.eye(n), rho_lo=rho_lo,
                        rho_hi=rho_hi, kappa=kappa, mode=mode)
    initial_transmission(trig, np.zeros(n), 0.0)
    return trig


def test_saturate_examples():
    assert saturate(0.5, 0.0, 1.0) == 0.5
    assert saturate(-3.0, 0.0, 1.0) == 0.0
    assert saturate(7.0, 0.0, 1.0) == 1.0


def test_saturate_invalid_bounds():
    with pytest.raises(InvalidBounds):
        saturate(0.5, 1.0, 0.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(-1e9, 1e9), st.floats(-100.0, 100.0), st.floats(0.0, 100.0))
def test_saturate_property(x, lo, width):
    hi = lo + width
    out = saturate(x, lo, hi)
    assert lo <= out <= hi
    if lo <= x <= hi:
        assert out == x


def test_hold_when_sample_unchanged():
    trig = make_trigger()
    trig.held = np.array([1.0, 2.0, 3.0])
    assert not check_and_update(trig, [1.0, 2.0, 3.0], 0.5)


def test_zero_sample_forces_transmission():
    trig = make_trigger(rho=0.9)
    trig.held = np.array([1.0, 0.0, 0.0])
    assert check_and_update(trig, [0.0, 0.0, 0.0], 0.5)
    assert np.array_equal(held_value(trig), [0.0, 0.0, 0.0])


def test_small_deviation_holds():
    # deviation 1e-4 against threshold 0.01 * 1.0201
    trig = make_trigger(mode=STATIC, rho=0.01)
    trig.held = np.array([1.0, 0.0, 0.0])
    assert not check_and_update(trig, [1.01, 0.0, 0.0], 0.5)
    assert np.array_equal(held_value(trig), [1.0, 0.0, 0.0])


def test_check_requires_grid_instant():
    trig = make_trigger()
    with pytest.raises(NotOnGrid):
        check_and_update(trig, np.zeros(3), 0.3)


def test_threshold_unchanged_for_balanced_samples():
    trig = make_trigger(rho=0.5)
    trig.held = np.array([1.0, 1.0, 0.0])
    trig.last_checked = trig.held.copy()
    assert update_threshold(trig) == 0.5


def test_threshold_increment_example():
    trig = make_trigger(rho=0.5, kappa=0.01)
    trig.held = np.array([np.sqrt(2.0), 0.0, 0.0])       # quadratic size 2
    trig.last_checked = np.array([1.0, 0.0, 0.0])        # quadratic size 1
    assert update_threshold(trig) == pytest.approx(0.51, abs=1e-15)


def test_threshold_saturates_at_upper_bound():
    trig = make_trigger(rho=0.98, kappa=1.0)
    trig.held = np.array([2.0, 0.0, 0.0])   # large imbalance pushes above hi
    trig.last_checked = np.zeros(3)
    assert update_threshold(trig) == 0.99


def test_transmission_resets_deviation_exactly():
    trig = make_trigger(rho=0.01)
    rng = np.random.default_rng(7)
    for k in range(1, 20):
        sample = rng.normal(size=3)
        check_and_update(trig, sample, 0.5 * k)
        if np.array_equal(held_value(trig), sample):
            dev = held_value(trig) - sample
            assert float(dev @ trig.psi1 @ dev) == 0.0


def test_event_log_spacing_is_grid_multiple():
    trig = make_trigger(rho=0.01)
    rng = np.random.default_rng(11)
    for k in range(1, 200):
        check_and_update(trig, rng.normal(size=3), 0.5 * k)
    intervals = np.diff(trig.event_log)
    assert intervals.size > 0
    assert np.all(intervals >= 0.5 - 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=60))
def test_threshold_confined_under_random_walks(samples):
    trig = make_trigger(rho=0.5, kappa=0.05, n=1)
    for k, value in enumerate(samples, start=1):
        check_and_update(trig, [value], 0.5 * k)
        assert trig.rho_lo <= trig.rho <= trig.rho_hi


def test_zero_adaptation_rate_matches_static_mode():
    rng = np.random.default_rng(3)
    samples = rng.normal(size=(100, 3))
    trig_a = make_trigger(mode=ADAPTIVE, rho=0.05, kappa=0.0)
    trig_s = make_trigger(mode=STATIC, rho=0.05)
    decisions_a = [check_and_update(trig_a, s, 0.5 * (k + 1))
                   for k, s in enumerate(samples)]
    decisions_s = [check_and_update(trig_s, s, 0.5 * (k + 1))
                   for k, s in enumerate(samples)]
    assert decisions_a == decisions_s
    assert trig_a.event_log == trig_s.event_log
    assert trig_a.rho == trig_s.rho == 0.05


def test_held_value_stable_across_holds():
    trig = make_trigger(mode=STATIC, rho=0.99)
    trig.held = np.array([1.0, 0.0, 0.0])
    snapshot = held_value(trig)
    for k in range(1, 4):
        check_and_update(trig, [1.0001, 0.0, 0.0], 0.5 * k)
        assert np.array_equal(held_value(trig), snapshot)


def test_state_validation():
    with pytest.raises(ValueError):
        TriggerState(held=np.zeros(2), rho=0.5, check_period=0.5,
                     psi1=np.eye(2), psi2=-np.eye(2))
    with pytest.raises(ValueError):
        TriggerState(held=np.zeros(2), rho=1.5, check_period=0.5,
                     psi1=np.eye(2), psi2=np.eye(2))
    with pytest.raises(ValueError):
        TriggerState(held=np.zeros(2), rho=0.5, check_period=0.5,
                     psi1=np.eye(2), psi2=np.eye(2), rho_lo=0.8, rho_hi=0.2)
