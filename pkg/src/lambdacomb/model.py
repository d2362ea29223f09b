"""Three-level lambda system: parameters, density-matrix state, equations of motion.

Level scheme: two lower states |a>, |b> split by omega_ab, one upper state |c>.
Field 1 (envelope f1) is nominally resonant with a-c, field 2 (envelope f2)
with b-c; each field also cross-couples to the other lower state, picking up a
phase factor exp(+/- i*omega_ab*t). Populations decay c->a (gamma_ac),
c->b (gamma_bc) and b->a (gamma_ab).

Only five density-matrix components are independent and stored: rho_aa, rho_bb
and the upper-triangle coherences rho_ac, rho_bc, rho_ab. rho_cc is always
derived from the trace; rho_ca, rho_cb, rho_ba are conjugates.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .drive import DriveEnvelope, evaluate


@dataclass(frozen=True)
class SystemParams:
    """Atomic frequencies, decay rates and the four Rabi amplitudes.

    rabi_acb is the amplitude with which field 1 drives the b-c transition,
    rabi_bca the amplitude with which field 2 drives a-c. Both default to the
    equal-dipole-moment values (rabi_acb = rabi_ac, rabi_bca = rabi_bc), since
    a cross coupling shares its field with the direct coupling of the same
    envelope. Pass explicit values to model unequal dipole moments.

    symmetric_bc_decay drops the extra gamma_ab/2 from the b-c coherence decay
    (sensitivity switch; the default keeps the full radiative-cascade rate).
    """

    omega_ab: float
    gamma_ab: float = 0.01
    gamma_ac: float = 1.0
    gamma_bc: float = 1.0
    rabi_ac: float = 0.0
    rabi_bc: float = 0.0
    rabi_acb: Optional[float] = None
    rabi_bca: Optional[float] = None
    symmetric_bc_decay: bool = False

    def __post_init__(self):
        if self.omega_ab < 0:
            raise ValueError("omega_ab must be >= 0")
        for name in ("gamma_ab", "gamma_ac", "gamma_bc"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.rabi_acb is None:
            object.__setattr__(self, "rabi_acb", self.rabi_ac)
        if self.rabi_bca is None:
            object.__setattr__(self, "rabi_bca", self.rabi_bc)

    @property
    def gamma_min(self) -> float:
        rates = [g for g in (self.gamma_ab, self.gamma_ac, self.gamma_bc) if g > 0]
        return min(rates) if rates else 0.0

    def with_rabi(self, rabi_ac=None, rabi_bc=None) -> "SystemParams":
        """Copy with new direct Rabi amplitudes; cross amplitudes follow."""
        kw = {}
        if rabi_ac is not None:
            kw["rabi_ac"] = rabi_ac
            kw["rabi_acb"] = None
        if rabi_bc is not None:
            kw["rabi_bc"] = rabi_bc
            kw["rabi_bca"] = None
        return replace(self, **kw)

    def as_array(self) -> np.ndarray:
        """Pack into the flat float vector the integration kernel consumes."""
        return np.array(
            [
                self.omega_ab,
                self.gamma_ab,
                self.gamma_ac,
                self.gamma_bc,
                self.rabi_ac,
                self.rabi_bc,
                self.rabi_acb,
                self.rabi_bca,
                1.0 if self.symmetric_bc_decay else 0.0,
            ],
            dtype=np.float64,
        )


@dataclass(frozen=True)
class DensityState:
    """The five independent density-matrix components.

    Also used as the value type for time derivatives, so field ranges are not
    enforced at construction; use validate() to check physicality.
    """

    rho_aa: float
    rho_bb: float
    rho_ac: complex = 0j
    rho_bc: complex = 0j
    rho_ab: complex = 0j

    @classmethod
    def ground(cls) -> "DensityState":
        return cls(1.0, 0.0)

    @classmethod
    def pure_b(cls) -> "DensityState":
        return cls(0.0, 1.0)

    @classmethod
    def pure_c(cls) -> "DensityState":
        return cls(0.0, 0.0)

    @property
    def rho_cc(self) -> float:
        return rho_cc(self)

    def validate(self, tol: float = 1e-6) -> None:
        """Raise ValueError if the state is unphysical beyond tol."""
        cc = 1.0 - self.rho_aa - self.rho_bb
        for name, p in (("rho_aa", self.rho_aa), ("rho_bb", self.rho_bb), ("rho_cc", cc)):
            if p < -tol or p > 1.0 + tol:
                raise ValueError(f"{name}={p} outside [0, 1] beyond tol={tol}")
        pops = {"a": self.rho_aa, "b": self.rho_bb, "c": cc}
        for (i, j), coh in (
            (("a", "c"), self.rho_ac),
            (("b", "c"), self.rho_bc),
            (("a", "b"), self.rho_ab),
        ):
            if abs(coh) ** 2 > pops[i] * pops[j] + tol:
                raise ValueError(
                    f"coherence rho_{i}{j} violates |rho_ij|^2 <= rho_ii*rho_jj by "
                    f"more than tol={tol}"
                )

    def as_matrix(self) -> np.ndarray:
        """Reconstruct the full 3x3 density matrix, basis order (a, b, c)."""
        cc = 1.0 - self.rho_aa - self.rho_bb
        return np.array(
            [
                [self.rho_aa, self.rho_ab, self.rho_ac],
                [np.conj(self.rho_ab), self.rho_bb, self.rho_bc],
                [np.conj(self.rho_ac), np.conj(self.rho_bc), cc],
            ],
            dtype=np.complex128,
        )

    def to_vector(self) -> np.ndarray:
        """Flatten to the 8 real components used by the integrator."""
        return np.array(
            [
                self.rho_aa,
                self.rho_bb,
                self.rho_ac.real,
                self.rho_ac.imag,
                self.rho_bc.real,
                self.rho_bc.imag,
                self.rho_ab.real,
                self.rho_ab.imag,
            ],
            dtype=np.float64,
        )

    @classmethod
    def from_vector(cls, v) -> "DensityState":
        return cls(
            float(v[0]),
            float(v[1]),
            complex(v[2], v[3]),
            complex(v[4], v[5]),
            complex(v[6], v[7]),
        )


def rho_cc(state: DensityState, clamp_tol: float = 1e-9) -> float:
    """Upper-state population from trace closure, 1 - rho_aa - rho_bb.

    Negative values within clamp_tol are rounded to 0; anything more negative
    is returned as-is so callers can treat it as an integration-failure signal.
    """
    cc = 1.0 - state.rho_aa - state.rho_bb
    if -clamp_tol < cc < 0.0:
        return 0.0
    return cc


def drive_coefficients(t: float, params: SystemParams, f1: DriveEnvelope, f2: DriveEnvelope):
    """Instantaneous complex drive amplitudes (A on a-c, B on b-c).

    A(t) = rabi_ac*f1 + rabi_bca*f2*exp(-i*omega_ab*t) multiplies |c><a| in the
    coupling Hamiltonian; B(t) = rabi_bc*f2 + rabi_acb*f1*exp(+i*omega_ab*t)
    multiplies |c><b|.
    """
    F1 = evaluate(f1, t)
    F2 = evaluate(f2, t)
    E = cmath.exp(1j * params.omega_ab * t)
    A = params.rabi_ac * F1 + params.rabi_bca * F2 * E.conjugate()
    B = params.rabi_bc * F2 + params.rabi_acb * F1 * E
    return A, B


def master_rhs(
    t: float,
    state: DensityState,
    params: SystemParams,
    f1: DriveEnvelope,
    f2: DriveEnvelope,
) -> DensityState:
    """Time derivative of the five stored density-matrix components.

    Pure function; conjugate components are substituted (rho_ca = rho_ac* etc.)
    and rho_cc comes from trace closure, so hermiticity and trace conservation
    hold by construction.
    """
    A, B = drive_coefficients(t, params, f1, f2)
    aa = state.rho_aa
    bb = state.rho_bb
    cc = 1.0 - aa - bb
    r_ac = state.rho_ac
    r_bc = state.rho_bc
    r_ab = state.rho_ab

    g_ac = 0.5 * (params.gamma_ac + params.gamma_bc)
    g_bc = g_ac if params.symmetric_bc_decay else g_ac + 0.5 * params.gamma_ab

    d_aa = params.gamma_ab * bb + params.gamma_ac * cc + 2.0 * (A * r_ac).imag
    d_bb = -params.gamma_ab * bb + params.gamma_bc * cc + 2.0 * (B * r_bc).imag
    Ac = A.conjugate()
    Bc = B.conjugate()
    d_ac = -g_ac * r_ac - 1j * Bc * r_ab + 1j * Ac * (cc - aa)
    d_bc = -g_bc * r_bc - 1j * Ac * r_ab.conjugate() + 1j * Bc * (cc - bb)
    d_ab = -0.5 * params.gamma_ab * r_ab - 1j * B * r_ac + 1j * Ac * r_bc.conjugate()

    return DensityState(d_aa, d_bb, d_ac, d_bc, d_ab)
