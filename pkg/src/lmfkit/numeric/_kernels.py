"""Integration kernels for the numeric front end.

The hot loop is an adaptive Dormand-Prince 5(4) stepper over a bivariate
polynomial field given as monomial arrays.  Kernels are compiled with numba
unless the environment variable ``LMFKIT_PURE_NUMPY`` is set to a non-empty
value, in which case the same functions run as plain Python/numpy.  Both
paths execute the identical statements; results agree to the last few bits
(the compiler lowers integer powers differently) and each path is
deterministic run to run.
"""

from __future__ import annotations

import math
import os

USE_NUMBA = not os.environ.get("LMFKIT_PURE_NUMPY")

if USE_NUMBA:
    from numba import njit

    def _jit(f):
        return njit(cache=True, fastmath=False)(f)
else:
    def _jit(f):
        return f


def _poly_eval(ei, ej, ec, x, y):
    acc = 0.0
    for k in range(ei.shape[0]):
        acc += ec[k] * x ** ei[k] * y ** ej[k]
    return acc


poly_eval = _jit(_poly_eval)


def _field_eval(pi, pj, pc, qi, qj, qc, x, y):
    u = 0.0
    v = 0.0
    for k in range(pi.shape[0]):
        u += pc[k] * x ** pi[k] * y ** pj[k]
    for k in range(qi.shape[0]):
        v += qc[k] * x ** qi[k] * y ** qj[k]
    return u, v


field_eval = _jit(_field_eval)


# Dormand-Prince 5(4) tableau
_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0),
)
_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
      -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


def _dp_step(pi, pj, pc, qi, qj, qc, x, y, h):
    """One Dormand-Prince step: returns (x5, y5, err)."""
    k1x, k1y = field_eval(pi, pj, pc, qi, qj, qc, x, y)
    k2x, k2y = field_eval(pi, pj, pc, qi, qj, qc,
                          x + h * 0.2 * k1x, y + h * 0.2 * k1y)
    k3x, k3y = field_eval(pi, pj, pc, qi, qj, qc,
                          x + h * (0.075 * k1x + 0.225 * k2x),
                          y + h * (0.075 * k1y + 0.225 * k2y))
    a4 = _A[2]
    k4x, k4y = field_eval(pi, pj, pc, qi, qj, qc,
                          x + h * (a4[0] * k1x + a4[1] * k2x + a4[2] * k3x),
                          y + h * (a4[0] * k1y + a4[1] * k2y + a4[2] * k3y))
    a5 = _A[3]
    k5x, k5y = field_eval(pi, pj, pc, qi, qj, qc,
                          x + h * (a5[0] * k1x + a5[1] * k2x + a5[2] * k3x
                                   + a5[3] * k4x),
                          y + h * (a5[0] * k1y + a5[1] * k2y + a5[2] * k3y
                                   + a5[3] * k4y))
    a6 = _A[4]
    k6x, k6y = field_eval(pi, pj, pc, qi, qj, qc,
                          x + h * (a6[0] * k1x + a6[1] * k2x + a6[2] * k3x
                                   + a6[3] * k4x + a6[4] * k5x),
                          y + h * (a6[0] * k1y + a6[1] * k2y + a6[2] * k3y
                                   + a6[3] * k4y + a6[4] * k5y))
    a7 = _A[5]
    x5 = x + h * (a7[0] * k1x + a7[2] * k3x + a7[3] * k4x + a7[4] * k5x
                  + a7[5] * k6x)
    y5 = y + h * (a7[0] * k1y + a7[2] * k3y + a7[3] * k4y + a7[4] * k5y
                  + a7[5] * k6y)
    k7x, k7y = field_eval(pi, pj, pc, qi, qj, qc, x5, y5)
    ex = h * (_E[0] * k1x + _E[2] * k3x + _E[3] * k4x + _E[4] * k5x
              + _E[5] * k6x + _E[6] * k7x)
    ey = h * (_E[0] * k1y + _E[2] * k3y + _E[3] * k4y + _E[4] * k5y
              + _E[5] * k6y + _E[6] * k7y)
    err = math.sqrt(ex * ex + ey * ey)
    return x5, y5, err


dp_step = _jit(_dp_step)


def _advance(pi, pj, pc, qi, qj, qc, x, y, t, h, rtol, hmax, out):
    """Take up to out.shape[0] accepted adaptive steps.

    Fills out[k] = (x, y, t, h_used) per accepted step and returns
    (x, y, t, h, count)."""
    n_max = out.shape[0]
    count = 0
    rejected = 0
    while count < n_max and rejected < 60:
        x5, y5, err = dp_step(pi, pj, pc, qi, qj, qc, x, y, h)
        scale = rtol * (1.0 + math.sqrt(x * x + y * y))
        if err <= scale:
            used = h
            x = x5
            y = y5
            t = t + h
            out[count, 0] = x
            out[count, 1] = y
            out[count, 2] = t
            out[count, 3] = used
            count += 1
            rejected = 0
        else:
            rejected += 1
        fac = 0.9 * (scale / (err + 1e-300)) ** 0.2
        if fac > 4.0:
            fac = 4.0
        if fac < 0.15:
            fac = 0.15
        h = h * fac
        if h > hmax:
            h = hmax
        if h < 1e-14:
            break
    return x, y, t, h, count


advance = _jit(_advance)


def fixed_step(pi, pj, pc, qi, qj, qc, x, y, h):
    """Non-adaptive fifth-order step, used to localize events by bisection."""
    x5, y5, _ = dp_step(pi, pj, pc, qi, qj, qc, x, y, h)
    return x5, y5
