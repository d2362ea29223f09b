"""Warm-up: integrate the lambda atom and look at basic dynamics.

Two sanity checks that anchor the conventions: a resonant cw field of Rabi
amplitude 1 flops the ground population as cos^2(t), and with all drives off
the excited population cascades back to |a>. Writes PNG figures next to this
script under output/.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lambdacomb import DensityState, SystemParams, cw, integrate, off

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# --- Rabi flopping on a-c, no decay
params = SystemParams(
    omega_ab=0.0, gamma_ab=0.0, gamma_ac=0.0, gamma_bc=0.0,
    rabi_ac=1.0, rabi_acb=0.0, rabi_bca=0.0,
)
traj = integrate(DensityState.ground(), 3 * np.pi, np.pi / 100, params, cw(1.0), off())

fig, ax = plt.subplots(figsize=(7, 3.2))
ax.plot(traj.times, traj.rho_aa, label=r"$\rho_{aa}$")
ax.plot(traj.times, traj.rho_cc, label=r"$\rho_{cc}$")
ax.plot(traj.times, np.cos(traj.times) ** 2, "k:", lw=1, label=r"$\cos^2 t$")
ax.set_xlabel("time")
ax.set_ylabel("population")
ax.legend(loc="center right")
ax.set_title("Rabi flopping, cw drive with unit Rabi amplitude")
fig.tight_layout()
fig.savefig(OUT / "rabi_flopping.png", dpi=130)
print("max |rho_aa - cos^2 t| =", np.max(np.abs(traj.rho_aa - np.cos(traj.times) ** 2)))

# --- radiative cascade with drives off
params = SystemParams(omega_ab=11.0, gamma_ab=0.05, gamma_ac=1.0, gamma_bc=1.0)
traj = integrate(DensityState.pure_c(), 150.0, 0.025, params, off(), off())

fig, ax = plt.subplots(figsize=(7, 3.2))
ax.plot(traj.times, traj.rho_aa, label=r"$\rho_{aa}$")
ax.plot(traj.times, traj.rho_bb, label=r"$\rho_{bb}$")
ax.plot(traj.times, traj.rho_cc, label=r"$\rho_{cc}$")
ax.set_xlabel("time")
ax.set_ylabel("population")
ax.set_xscale("log")
ax.legend()
ax.set_title("Cascade |c> -> |a>,|b> -> |a| with drives off")
fig.tight_layout()
fig.savefig(OUT / "decay_cascade.png", dpi=130)
print("final rho_aa =", traj.rho_aa[-1])
print("figures in", OUT)
