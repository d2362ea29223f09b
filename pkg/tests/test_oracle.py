import math

import pytest

from lambdacomb.oracle import (
    OscillatorParams,
    classical_amplitude_analytic,
    classical_amplitude_timedomain,
    classical_sweep,
)


def params(omega0=10.0, damping=0.2, omega=10.0):
    return OscillatorParams(omega0, damping, 2.0 * math.pi / omega)


def test_resonant_amplitude_matches_resonant_term():
    # the k = +/-1 pair at resonance contributes 2*(1/tau)/(b*w0); smaller
    # off-resonant harmonics add at the percent level
    p = params(omega=10.0)
    expected = 2.0 * (1.0 / p.rep_period) / (p.damping * p.omega0)
    assert classical_amplitude_analytic(p) == pytest.approx(expected, rel=0.02)


def test_comb_amplitudes_decrease_with_n():
    amps = [classical_amplitude_analytic(params(omega=10.0 / n)) for n in (1, 2, 3)]
    assert amps[0] > amps[1] > amps[2]


def test_off_resonance_amplitude_is_small():
    on = classical_amplitude_analytic(params(omega=10.0))
    off = classical_amplitude_analytic(params(omega=7.3))
    assert off < 0.1 * on


def test_cross_oracle_agreement():
    # narrow kicks reproduce the Dirac-comb result
    for n in (1, 2, 3):
        p = params(omega=10.0 / n)
        analytic = classical_amplitude_analytic(p)
        timedomain = classical_amplitude_timedomain(p, p.rep_period / 200.0)
        assert timedomain == pytest.approx(analytic, rel=0.02), f"n={n}"


def test_regularization_attenuation_is_the_gaussian_form_factor():
    # at finite width the resonant harmonic is attenuated by
    # exp(-(w0*width)^2/2); the time-domain oracle must track that
    for n in (1, 2, 3):
        p = params(omega=10.0 / n)
        width = p.rep_period / 50.0
        analytic = classical_amplitude_analytic(p)
        timedomain = classical_amplitude_timedomain(p, width)
        expected_ratio = math.exp(-0.5 * (p.omega0 * width) ** 2)
        assert timedomain / analytic == pytest.approx(expected_ratio, abs=0.01), f"n={n}"


def test_heavy_damping_washes_out_the_comb():
    heavy = dict(omega0=10.0, damping=19.0)
    on = classical_amplitude_timedomain(
        OscillatorParams(rep_period=2 * math.pi / 10.0, **heavy), 0.01
    )
    off = classical_amplitude_timedomain(
        OscillatorParams(rep_period=2 * math.pi / 7.3, **heavy), 0.01
    )
    assert on / off < 1.5


def test_zero_forcing_zero_amplitude():
    p = params(omega=10.0)
    amp = classical_amplitude_timedomain(p, 0.01, forcing_area=0.0)
    assert amp == 0.0


def test_overdamped_rejected():
    p = OscillatorParams(1.0, 2.5, 1.0)
    with pytest.raises(ValueError):
        classical_amplitude_analytic(p)
    with pytest.raises(ValueError):
        classical_amplitude_timedomain(p, 0.01)


def test_wide_pulse_rejected():
    p = params(omega=10.0)
    with pytest.raises(ValueError):
        classical_amplitude_timedomain(p, p.rep_period / 10.0)


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        OscillatorParams(-1.0, 0.2, 1.0)
    with pytest.raises(ValueError):
        OscillatorParams(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        OscillatorParams(1.0, 0.2, 0.0)


def test_sweep_shape_and_determinism():
    w1, a1 = classical_sweep(8.0, 12.0, 21, 10.0, 0.2, pulse_width=0.01, workers=1)
    w2, a2 = classical_sweep(8.0, 12.0, 21, 10.0, 0.2, pulse_width=0.01, workers=3)
    assert len(w1) == 21
    assert (w1 == w2).all()
    assert (a1 == a2).all()
    assert a1.max() == a1[list(w1).index(10.0)]
