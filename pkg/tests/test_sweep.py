import numpy as np
import pytest

from lambdacomb.model import SystemParams
from lambdacomb.sweep import (
    SweepConfig,
    detect_and_match,
    make_config,
    run_sweep,
    spectrum_rows,
    write_spectrum_csv,
)


def quiet_config(**kw):
    """A fast custom sweep: no drives, short integration."""
    defaults = dict(
        scenario="custom",
        params=SystemParams(omega_ab=11.0, gamma_ab=0.1),
        omega_rep_min=2.0,
        omega_rep_max=4.0,
        grid_points=3,
        f1_kind="cw",
        f2_kind="cw",
        cw_level_1=0.0,
        cw_level_2=0.0,
        t_end=200.0,
    )
    defaults.update(kw)
    return SweepConfig(**defaults)


def test_drives_off_flat_zero_spectrum():
    spec = run_sweep(quiet_config(grid_points=2), workers=1)
    amps = spec.channel("osc_amp_bc")
    np.testing.assert_allclose(amps, 0.0, atol=1e-9)
    detect_and_match(spec)
    assert spec.peaks == []


def test_parallel_determinism_bitwise():
    cfg = make_config(
        "fig2", omega_rep_min=10.8, omega_rep_max=11.2, grid_points=5, t_end=400.0
    )
    a = run_sweep(cfg, workers=1)
    b = run_sweep(cfg, workers=4)
    assert np.array_equal(spectrum_rows(a), spectrum_rows(b))


def test_failures_recorded_per_point_not_fatal():
    # mean-drive compensation pushes the cw level negative at high rates,
    # so those points fail while the rest of the sweep completes
    cfg = quiet_config(
        f1_kind="mixed",
        cw_level_1=0.25,
        hold_mean_drive_1=True,
        pulse_width=0.05,
        pulse_height=2.0,
        omega_rep_min=1.0,
        omega_rep_max=8.0,
        grid_points=6,
    )
    spec = run_sweep(cfg, workers=2)
    assert len(spec.failures) > 0
    assert len(spec.failures) < len(spec)
    amps = spec.channel("osc_amp_bc")
    failed_idx = [i for i, _ in spec.failures]
    assert np.all(np.isnan(amps[failed_idx]))
    ok_idx = [i for i in range(len(spec)) if i not in failed_idx]
    assert np.all(np.isfinite(amps[ok_idx]))


def test_adaptive_refine_adds_midpoints_without_recompute():
    cfg = make_config(
        "fig2",
        omega_rep_min=10.9,
        omega_rep_max=11.1,
        grid_points=5,
        grid_kind="adaptive-refine",
        t_end=600.0,
    )
    refined = run_sweep(cfg, workers=2)
    coarse = run_sweep(
        make_config(
            "fig2", omega_rep_min=10.9, omega_rep_max=11.1, grid_points=5, t_end=600.0
        ),
        workers=2,
    )
    assert len(refined) > len(coarse)
    # the coarse grid's points are bit-identical inside the refined spectrum
    idx = {w: i for i, w in enumerate(refined.omega_rep)}
    for j, w in enumerate(coarse.omega_rep):
        i = idx[float(w)]
        a = refined.observables[i]
        b = coarse.observables[j]
        assert a.osc_amplitude_bc == b.osc_amplitude_bc
        assert a.mean_pops == b.mean_pops


def test_spectrum_csv_schema_and_determinism(tmp_path):
    cfg = quiet_config()
    spec = run_sweep(cfg, workers=2)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_spectrum_csv(spec, p1)
    write_spectrum_csv(run_sweep(cfg, workers=1), p2)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0] == (
        "omega_rep,osc_amp_bc,pop_a,pop_b,pop_c,abs_pump,abs_probe,"
        "inv_pump,inv_probe,osc_amp_ab"
    )
    assert len(lines) == len(spec) + 1


def test_scenario_configs_build_valid_envelopes():
    for name in ("fig2", "fig3", "fig5"):
        cfg = make_config(name)
        f1, f2 = cfg.envelopes(0.5 * (cfg.omega_rep_min + cfg.omega_rep_max))
        assert f1.kind in ("cw", "pulse_train", "mixed")
        assert f2.kind in ("cw", "pulse_train", "mixed")
    cfg = make_config("fig3")
    # compensation holds the mean envelope at the configured cw level
    from lambdacomb.drive import evaluate

    f1, _ = cfg.envelopes(8.0)
    t = np.linspace(100.0, 100.0 + 50 * f1.rep_period, 200001)
    assert np.mean(evaluate(f1, t)) == pytest.approx(cfg.cw_level_1, abs=2e-3)


def test_fixed_average_power_scales_pulse_height():
    import math

    cfg = quiet_config(
        f2_kind="pulse_train", pulse_width=0.05, pulse_height=2.0,
        fixed_average_power=True,
    )
    _, f2_slow = cfg.envelopes(2.0)
    _, f2_fast = cfg.envelopes(4.0)
    assert f2_slow.pulse_height == pytest.approx(2.0 * math.pi)  # 2 * tau(2.0)
    assert f2_slow.pulse_height / f2_fast.pulse_height == pytest.approx(2.0)
    # average drive is then rate-independent
    mean_slow = f2_slow.pulse_height * f2_slow.pulse_width / f2_slow.rep_period
    mean_fast = f2_fast.pulse_height * f2_fast.pulse_width / f2_fast.rep_period
    assert mean_slow == pytest.approx(mean_fast)


def test_make_config_param_overrides():
    cfg = make_config("fig2", omega_ab=9.0, rabi_bc=0.2, grid_points=10)
    assert cfg.params.omega_ab == 9.0
    assert cfg.params.rabi_bc == 0.2
    assert cfg.params.rabi_bca == 0.2  # cross amplitude follows
    assert cfg.grid_points == 10


def test_config_validation():
    with pytest.raises(ValueError):
        quiet_config(omega_rep_min=5.0, omega_rep_max=2.0)
    with pytest.raises(ValueError):
        quiet_config(grid_points=1)
    with pytest.raises(ValueError):
        quiet_config(channel="nope")
    with pytest.raises(ValueError):
        make_config("fig9")


def test_predicted_comb_follows_scenario():
    fig2 = make_config("fig2")
    assert [round(f, 3) for f in fig2.predicted_comb().frequencies()] == [
        11.0, 5.5, 3.667, 2.75,
    ]
    fig3 = make_config("fig3")
    assert [round(f, 1) for f in fig3.predicted_comb().frequencies()] == [
        12.0, 10.0, 6.0, 5.0,
    ]
    fig5 = make_config("fig5")
    freqs = [round(f, 3) for f in fig5.predicted_comb().frequencies()]
    assert 5.5 in freqs and 4.4 in freqs and 7.333 in freqs


def test_observable_at_nearest_grid_point():
    spec = run_sweep(quiet_config(), workers=1)
    assert spec.observable_at(2.1) is spec.observables[0]
    assert spec.observable_at(3.9) is spec.observables[2]
