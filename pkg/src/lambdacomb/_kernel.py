"""Compiled Dormand-Prince 5(4) stepper with dense output.

All hot-loop code lives here as nopython numba functions so that repetition-rate
sweeps can run grid points on plain threads (the kernel releases the GIL).
Two right-hand sides are built in: the five-component lambda-atom master
equation (plus a redundantly integrated rho_cc used as a trace-error monitor)
and the driven damped classical oscillator used for cross-validation.

State layout, atom (RHS_ATOM):
    y = [rho_aa, rho_bb, rho_cc_redundant,
         Re rho_ac, Im rho_ac, Re rho_bc, Im rho_bc, Re rho_ab, Im rho_ab]
Parameter vector pp (see SystemParams.as_array):
    [omega_ab, gamma_ab, gamma_ac, gamma_bc,
     rabi_ac, rabi_bc, rabi_acb, rabi_bca, symmetric_bc_decay]
Envelope vectors (see DriveEnvelope.as_array):
    [kind, cw_level, rep_period, pulse_width, pulse_height, n_start]

State layout, oscillator (RHS_OSCILLATOR): y = [x, v], pp = [omega0, damping].
"""

import math

import numpy as np
from numba import njit

RHS_ATOM = 0
RHS_OSCILLATOR = 1

# integration outcome codes
OK = 0
STEP_UNDERFLOW = 1
INVARIANT_VIOLATION = 2
STEP_BUDGET_EXCEEDED = 3

_POP_TOL = 1e-4  # hard bound on population excursions during stepping


@njit(cache=True, nogil=True, fastmath=True)
def envelope_value(t, env):
    """Evaluate a packed drive envelope at time t."""
    val = env[1]
    if env[0] > 0.5:  # pulse_train or mixed
        tau = env[2]
        sig = env[3]
        height = env[4]
        n_start = env[5]
        n0 = math.floor(t / tau + 0.5)
        for dn in range(-1, 2):
            n = n0 + dn
            if n >= n_start:
                x = (t - n * tau) / sig
                val += height * math.exp(-0.5 * x * x)
    return val


@njit(cache=True, nogil=True, fastmath=True)
def _pulse_step_cap(t, env, cap):
    """Largest step allowed by one envelope: never larger than sigma/4 inside
    a 6-sigma pulse zone, and never long enough to hop over an upcoming zone."""
    if env[0] < 0.5:
        return cap
    tau = env[2]
    sig = env[3]
    n_start = env[5]
    zone = 6.0 * sig
    near = math.floor(t / tau + 0.5)
    if near < n_start:
        near = n_start
    d = abs(t - near * tau)
    if d < zone:
        allowed = 0.25 * sig
    else:
        nxt = math.floor(t / tau) + 1.0
        if nxt < n_start:
            nxt = n_start
        allowed = (nxt * tau - zone - t) + 0.25 * sig
        if allowed < 0.25 * sig:
            allowed = 0.25 * sig
    if allowed < cap:
        return allowed
    return cap


@njit(cache=True, nogil=True, fastmath=True)
def _rhs(rhs_id, t, y, dy, pp, env1, env2):
    if rhs_id == RHS_OSCILLATOR:
        dy[0] = y[1]
        dy[1] = -pp[1] * y[1] - pp[0] * pp[0] * y[0] + envelope_value(t, env1)
        return

    f1 = envelope_value(t, env1)
    f2 = envelope_value(t, env2)
    w = pp[0]
    gab = pp[1]
    gac = pp[2]
    gbc = pp[3]
    cwt = math.cos(w * t)
    swt = math.sin(w * t)
    e_plus = complex(cwt, swt)  # exp(+i w t)
    A = pp[4] * f1 + pp[7] * f2 * e_plus.conjugate()
    B = pp[5] * f2 + pp[6] * f1 * e_plus

    aa = y[0]
    bb = y[1]
    cc = 1.0 - aa - bb
    r_ac = complex(y[3], y[4])
    r_bc = complex(y[5], y[6])
    r_ab = complex(y[7], y[8])

    g_ac = 0.5 * (gac + gbc)
    g_bc = g_ac if pp[8] > 0.5 else g_ac + 0.5 * gab

    wa2 = 2.0 * (A * r_ac).imag
    wb2 = 2.0 * (B * r_bc).imag
    dy[0] = gab * bb + gac * cc + wa2
    dy[1] = -gab * bb + gbc * cc + wb2
    dy[2] = -(gac + gbc) * y[2] - wa2 - wb2

    Ac = A.conjugate()
    Bc = B.conjugate()
    d_ac = -g_ac * r_ac - 1j * Bc * r_ab + 1j * Ac * (cc - aa)
    d_bc = -g_bc * r_bc - 1j * Ac * r_ab.conjugate() + 1j * Bc * (cc - bb)
    d_ab = -0.5 * gab * r_ab - 1j * B * r_ac + 1j * Ac * r_bc.conjugate()
    dy[3] = d_ac.real
    dy[4] = d_ac.imag
    dy[5] = d_bc.real
    dy[6] = d_bc.imag
    dy[7] = d_ab.real
    dy[8] = d_ab.imag


@njit(cache=True, nogil=True, fastmath=True)
def integrate_fixed_grid(
    rhs_id,
    y0,
    t0,
    dt_sample,
    n_samples,
    rtol,
    atol,
    hmax,
    fixed_step,
    max_steps,
    pp,
    env1,
    env2,
    out,
):
    """Adaptive DP54 integration sampled on a uniform grid via dense output.

    out must be (n_samples, len(y0)). fixed_step > 0 forces constant steps of
    that size with no error control (used by convergence-order tests).
    Returns (status, t_fail, n_steps, n_accepted).
    """
    nv = y0.shape[0]
    t_end = t0 + dt_sample * (n_samples - 1)

    y = y0.copy()
    ynew = np.empty(nv)
    ytmp = np.empty(nv)
    yerr = np.empty(nv)
    k = np.empty((7, nv))

    for i in range(nv):
        out[0, i] = y[i]

    _rhs(rhs_id, t0, y, k[0], pp, env1, env2)

    t = t0
    if fixed_step > 0.0:
        h = fixed_step
    else:
        h = dt_sample
        h = _pulse_step_cap(t, env1, h)
        h = _pulse_step_cap(t, env2, h)
        if h > hmax:
            h = hmax
    isamp = 1
    n_steps = 0
    n_accepted = 0

    while isamp < n_samples:
        if n_steps >= max_steps:
            return STEP_BUDGET_EXCEEDED, t, n_steps, n_accepted
        if fixed_step <= 0.0:
            cap = hmax
            cap = _pulse_step_cap(t, env1, cap)
            cap = _pulse_step_cap(t, env2, cap)
            if h > cap:
                h = cap
        if t + h > t_end:
            h = t_end - t
        if h <= 1e-13 * max(1.0, abs(t)):
            return STEP_UNDERFLOW, t, n_steps, n_accepted

        # Dormand-Prince 5(4) stages (FSAL: k[6] becomes next k[0])
        for i in range(nv):
            ytmp[i] = y[i] + h * (0.2 * k[0, i])
        _rhs(rhs_id, t + 0.2 * h, ytmp, k[1], pp, env1, env2)

        for i in range(nv):
            ytmp[i] = y[i] + h * (3.0 / 40.0 * k[0, i] + 9.0 / 40.0 * k[1, i])
        _rhs(rhs_id, t + 0.3 * h, ytmp, k[2], pp, env1, env2)

        for i in range(nv):
            ytmp[i] = y[i] + h * (
                44.0 / 45.0 * k[0, i] - 56.0 / 15.0 * k[1, i] + 32.0 / 9.0 * k[2, i]
            )
        _rhs(rhs_id, t + 0.8 * h, ytmp, k[3], pp, env1, env2)

        for i in range(nv):
            ytmp[i] = y[i] + h * (
                19372.0 / 6561.0 * k[0, i]
                - 25360.0 / 2187.0 * k[1, i]
                + 64448.0 / 6561.0 * k[2, i]
                - 212.0 / 729.0 * k[3, i]
            )
        _rhs(rhs_id, t + 8.0 / 9.0 * h, ytmp, k[4], pp, env1, env2)

        for i in range(nv):
            ytmp[i] = y[i] + h * (
                9017.0 / 3168.0 * k[0, i]
                - 355.0 / 33.0 * k[1, i]
                + 46732.0 / 5247.0 * k[2, i]
                + 49.0 / 176.0 * k[3, i]
                - 5103.0 / 18656.0 * k[4, i]
            )
        _rhs(rhs_id, t + h, ytmp, k[5], pp, env1, env2)

        for i in range(nv):
            ynew[i] = y[i] + h * (
                35.0 / 384.0 * k[0, i]
                + 500.0 / 1113.0 * k[2, i]
                + 125.0 / 192.0 * k[3, i]
                - 2187.0 / 6784.0 * k[4, i]
                + 11.0 / 84.0 * k[5, i]
            )
        _rhs(rhs_id, t + h, ynew, k[6], pp, env1, env2)

        # embedded error estimate
        err = 0.0
        for i in range(nv):
            yerr[i] = h * (
                71.0 / 57600.0 * k[0, i]
                - 71.0 / 16695.0 * k[2, i]
                + 71.0 / 1920.0 * k[3, i]
                - 17253.0 / 339200.0 * k[4, i]
                + 22.0 / 525.0 * k[5, i]
                - 1.0 / 40.0 * k[6, i]
            )
            ay = abs(y[i])
            ayn = abs(ynew[i])
            scale = atol + rtol * (ay if ay > ayn else ayn)
            e = yerr[i] / scale
            err += e * e
        err = math.sqrt(err / nv)

        n_steps += 1
        accept = err <= 1.0 or fixed_step > 0.0
        if not math.isfinite(err):
            accept = False

        if accept:
            tnew = t + h
            if rhs_id == RHS_ATOM:
                if (
                    ynew[0] < -_POP_TOL
                    or ynew[0] > 1.0 + _POP_TOL
                    or ynew[1] < -_POP_TOL
                    or ynew[1] > 1.0 + _POP_TOL
                    or ynew[2] < -_POP_TOL
                    or ynew[2] > 1.0 + _POP_TOL
                    or not math.isfinite(ynew[0])
                ):
                    return INVARIANT_VIOLATION, tnew, n_steps, n_accepted

            # dense output on samples inside (t, tnew]
            edge = tnew + 1e-12 * max(1.0, abs(tnew))
            while isamp < n_samples:
                ts = t0 + isamp * dt_sample
                if ts > edge:
                    break
                th = (ts - t) / h
                # quartic interpolant: y + h * sum_s k_s * Q_s(th)
                b0 = th * (
                    1.0
                    + th
                    * (
                        -8048581381.0 / 2820520608.0
                        + th
                        * (
                            8663915743.0 / 2820520608.0
                            + th * (-12715105075.0 / 11282082432.0)
                        )
                    )
                )
                b2 = (
                    th
                    * th
                    * (
                        131558114200.0 / 32700410799.0
                        + th
                        * (
                            -68118460800.0 / 10900136933.0
                            + th * (87487479700.0 / 32700410799.0)
                        )
                    )
                )
                b3 = (
                    th
                    * th
                    * (
                        -1754552775.0 / 470086768.0
                        + th
                        * (
                            14199869525.0 / 1410260304.0
                            + th * (-10690763975.0 / 1880347072.0)
                        )
                    )
                )
                b4 = (
                    th
                    * th
                    * (
                        127303824393.0 / 49829197408.0
                        + th
                        * (
                            -318862633887.0 / 49829197408.0
                            + th * (701980252875.0 / 199316789632.0)
                        )
                    )
                )
                b5 = (
                    th
                    * th
                    * (
                        -282668133.0 / 205662961.0
                        + th
                        * (
                            2019193451.0 / 616988883.0
                            + th * (-1453857185.0 / 822651844.0)
                        )
                    )
                )
                b6 = (
                    th
                    * th
                    * (
                        40617522.0 / 29380423.0
                        + th
                        * (-110615467.0 / 29380423.0 + th * (69997945.0 / 29380423.0))
                    )
                )
                for i in range(nv):
                    out[isamp, i] = y[i] + h * (
                        b0 * k[0, i]
                        + b2 * k[2, i]
                        + b3 * k[3, i]
                        + b4 * k[4, i]
                        + b5 * k[5, i]
                        + b6 * k[6, i]
                    )
                isamp += 1

            t = tnew
            for i in range(nv):
                y[i] = ynew[i]
                k[0, i] = k[6, i]
            n_accepted += 1
            if fixed_step <= 0.0:
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = 0.9 * err ** -0.2
                    if fac > 5.0:
                        fac = 5.0
                    elif fac < 0.2:
                        fac = 0.2
                h *= fac
        else:
            if math.isfinite(err) and err > 0.0:
                fac = 0.9 * err ** -0.2
                if fac < 0.2:
                    fac = 0.2
            else:
                fac = 0.2
            h *= fac

    return OK, t, n_steps, n_accepted
