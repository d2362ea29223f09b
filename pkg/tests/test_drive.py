import math

import numpy as np
import pytest
from scipy.integrate import quad

from lambdacomb.drive import (
    DriveEnvelope,
    cw,
    evaluate,
    mixed,
    off,
    pulse_area,
    pulse_train,
    rep_rate_to_period,
)


def test_cw_is_constant():
    env = cw(1.0)
    assert evaluate(env, 0.0) == 1.0
    assert evaluate(env, 123.456) == 1.0
    assert evaluate(env, -5.0) == 1.0


def test_off_is_zero():
    assert evaluate(off(), 17.2) == 0.0


def test_pulse_train_peak_on_center():
    env = pulse_train(rep_period=10.0, pulse_width=0.1, pulse_height=1.0)
    assert evaluate(env, 20.0) == pytest.approx(1.0, abs=1e-12)


def test_pulse_train_negligible_between_pulses():
    env = pulse_train(rep_period=10.0, pulse_width=0.1, pulse_height=1.0)
    # midway between centers: exp(-5^2 / (2*0.1^2)) underflows
    assert evaluate(env, 25.0) < 1e-15


def test_mixed_sums_both_components():
    env = mixed(0.5, rep_period=10.0, pulse_width=0.1, pulse_height=2.0)
    assert evaluate(env, 30.0) == pytest.approx(2.5, abs=1e-12)
    assert evaluate(env, 35.0) == pytest.approx(0.5, abs=1e-12)


def test_n_start_excludes_early_pulses():
    env = pulse_train(rep_period=10.0, pulse_width=0.1, pulse_height=1.0, n_start=2)
    assert evaluate(env, 10.0) < 1e-15
    assert evaluate(env, 20.0) == pytest.approx(1.0, abs=1e-12)


def test_rep_rate_to_period():
    assert rep_rate_to_period(2.0 * math.pi) == pytest.approx(1.0)
    assert rep_rate_to_period(math.pi) == pytest.approx(2.0)
    assert rep_rate_to_period(11.0) == pytest.approx(2.0 * math.pi / 11.0)
    with pytest.raises(ValueError):
        rep_rate_to_period(0.0)
    with pytest.raises(ValueError):
        rep_rate_to_period(-1.0)


def test_width_guard_rejects_overlapping_pulses():
    with pytest.raises(ValueError):
        pulse_train(rep_period=0.5, pulse_width=0.1, pulse_height=1.0)


def test_periodicity_far_from_start():
    env = pulse_train(rep_period=0.7, pulse_width=0.05, pulse_height=1.3)
    rng = np.random.default_rng(7)
    t = 100 * 0.7 + rng.uniform(0.0, 70.0, size=50)
    np.testing.assert_allclose(
        evaluate(env, t + 0.7), evaluate(env, t), rtol=0, atol=1e-12
    )


def test_energy_per_pulse_independent_of_period():
    for tau in (0.5, 2.0, 10.0):
        env = pulse_train(rep_period=tau, pulse_width=tau / 20.0, pulse_height=0.8)
        center = 40 * tau
        integral, _ = quad(
            lambda t: evaluate(env, t), center - tau / 2, center + tau / 2, limit=200
        )
        assert integral == pytest.approx(pulse_area(env), abs=1e-9)


def test_vectorized_evaluation_matches_scalar():
    env = mixed(0.3, rep_period=2.0, pulse_width=0.1, pulse_height=1.0)
    t = np.linspace(0, 10, 101)
    vec = evaluate(env, t)
    scalar = np.array([evaluate(env, float(ti)) for ti in t])
    np.testing.assert_allclose(vec, scalar, rtol=0, atol=1e-15)


def test_kernel_envelope_matches_python():
    from lambdacomb._kernel import envelope_value

    for env in (
        cw(0.7),
        pulse_train(2.0, 0.1, 1.5),
        mixed(0.4, 3.0, 0.2, 0.9),
    ):
        packed = env.as_array()
        for t in np.linspace(-1.0, 12.0, 123):
            assert envelope_value(t, packed) == pytest.approx(
                evaluate(env, float(t)), abs=1e-14
            )


def test_invalid_kind_rejected():
    with pytest.raises(ValueError):
        DriveEnvelope(kind="square")
