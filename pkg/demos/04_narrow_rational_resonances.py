"""Needle-thin quantum resonances at rational frequencies m*omega_ab/n.

With a strong pulse train pumping a-c (Rabi amplitude 20) and a weak cw probe
on b-c, the atom responds whenever n repetition periods contain exactly m full
cycles of the ground-state precession. These stroboscopic resonances are a few
thousandths of a frequency unit wide, so each window below is scanned with a
step of 0.002 around a predicted rational frequency. The probe's oscillation
amplitude shows a sharp transparency dip, accompanied by strong probe gain
without inversion.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from lambdacomb import make_config, run_pipeline

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

WINDOWS = {"1/1": 11.0, "1/2": 5.5, "2/5": 4.4, "2/3": 22.0 / 3.0}

fig, axes = plt.subplots(1, 4, figsize=(12, 3.2), sharey=False)
for ax, (label, center) in zip(axes, WINDOWS.items()):
    cfg = make_config(
        "fig5", omega_rep_min=center - 0.05, omega_rep_max=center + 0.05,
        grid_points=51,
    )
    spectrum = run_pipeline(cfg)
    ax.plot(spectrum.omega_rep, spectrum.channel("osc_amp_bc"), lw=1)
    ax.axvline(center, color="tab:red", ls=":", lw=0.8)
    ax.set_title(f"$\\omega_{{rep}} = {label}\\,\\omega_{{ab}}$")
    ax.set_xlabel(r"$\omega_{\rm rep}$")
    depth = max((p.prominence for p in spectrum.peaks), default=0.0)
    obs = spectrum.observable_at(center)
    print(
        f"{label:4s}: dip depth {depth:.4f}, probe absorption at centre "
        f"{obs.absorption_probe:+.4f} (gain), inversion {obs.inversion_probe:+.3f}"
    )
axes[0].set_ylabel("probe oscillation amplitude")
fig.suptitle("Narrow transparency dips at rational fractions of $\\omega_{ab}$")
fig.tight_layout()
fig.savefig(OUT / "rational_resonances.png", dpi=130)
print("figure:", OUT / "rational_resonances.png")
