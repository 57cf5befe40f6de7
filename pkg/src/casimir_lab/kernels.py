"""Hot numeric loops: numba-jitted by default, interpreted/numpy otherwise.

Set the environment variable ``CASIMIR_LAB_NUMBA=0`` to force the pure
numpy/interpreted fallback path (useful for debugging and for the
``benchmarks/`` comparison).  Both paths run the same floating-point
operations, so results agree to the last few ulps.
"""

import os

import numpy as np

_FLAG = os.environ.get("CASIMIR_LAB_NUMBA", "1").strip().lower()
if _FLAG in ("0", "false", "no", "off"):
    _numba = None
else:
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover - numba is a regular dependency
        _numba = None

USING_NUMBA = _numba is not None

STATUS_OK = 0
STATUS_NONFINITE = 1
STATUS_MAXSTEPS = 2


# ---------------------------------------------------------------------------
# Rattleback integration loops.  State is the dual-space triple (p, r, s),
# rhs = (-h*p*s, -r*s, r*r + h*p*p).
# ---------------------------------------------------------------------------

def _rk4_loop(p, r, s, h, dt, n_steps, stride, out):
    """Fixed-step RK4.  Fills out[m] = (p, r, s) every ``stride`` steps.

    out[0] must hold the initial state.  Returns (rows_filled, status).
    """
    m = 1
    for step in range(1, n_steps + 1):
        k1p = -h * p * s
        k1r = -r * s
        k1s = r * r + h * p * p
        p2 = p + 0.5 * dt * k1p
        r2 = r + 0.5 * dt * k1r
        s2 = s + 0.5 * dt * k1s
        k2p = -h * p2 * s2
        k2r = -r2 * s2
        k2s = r2 * r2 + h * p2 * p2
        p3 = p + 0.5 * dt * k2p
        r3 = r + 0.5 * dt * k2r
        s3 = s + 0.5 * dt * k2s
        k3p = -h * p3 * s3
        k3r = -r3 * s3
        k3s = r3 * r3 + h * p3 * p3
        p4 = p + dt * k3p
        r4 = r + dt * k3r
        s4 = s + dt * k3s
        k4p = -h * p4 * s4
        k4r = -r4 * s4
        k4s = r4 * r4 + h * p4 * p4
        p = p + dt * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        r = r + dt * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
        s = s + dt * (k1s + 2.0 * k2s + 2.0 * k3s + k4s) / 6.0
        if not (np.isfinite(p) and np.isfinite(r) and np.isfinite(s)):
            return m, STATUS_NONFINITE
        if step % stride == 0:
            out[m, 0] = p
            out[m, 1] = r
            out[m, 2] = s
            m += 1
    return m, STATUS_OK


def _rk45_loop(p, r, s, h, t_final, rtol, atol, max_steps, t_out, x_out):
    """Adaptive Dormand-Prince 5(4).  Records every accepted step.

    t_out[0]/x_out[0] must hold the initial time and state.
    Returns (rows_filled, status).
    """
    t = 0.0
    dt = min(1e-3, t_final)
    m = 1
    nrec = t_out.shape[0]
    for _ in range(max_steps):
        if t >= t_final:
            return m, STATUS_OK
        if dt > t_final - t:
            dt = t_final - t

        k1p = -h * p * s
        k1r = -r * s
        k1s = r * r + h * p * p

        ap = p + dt * 0.2 * k1p
        ar = r + dt * 0.2 * k1r
        as_ = s + dt * 0.2 * k1s
        k2p = -h * ap * as_
        k2r = -ar * as_
        k2s = ar * ar + h * ap * ap

        ap = p + dt * (3.0 / 40.0 * k1p + 9.0 / 40.0 * k2p)
        ar = r + dt * (3.0 / 40.0 * k1r + 9.0 / 40.0 * k2r)
        as_ = s + dt * (3.0 / 40.0 * k1s + 9.0 / 40.0 * k2s)
        k3p = -h * ap * as_
        k3r = -ar * as_
        k3s = ar * ar + h * ap * ap

        ap = p + dt * (44.0 / 45.0 * k1p - 56.0 / 15.0 * k2p + 32.0 / 9.0 * k3p)
        ar = r + dt * (44.0 / 45.0 * k1r - 56.0 / 15.0 * k2r + 32.0 / 9.0 * k3r)
        as_ = s + dt * (44.0 / 45.0 * k1s - 56.0 / 15.0 * k2s + 32.0 / 9.0 * k3s)
        k4p = -h * ap * as_
        k4r = -ar * as_
        k4s = ar * ar + h * ap * ap

        ap = p + dt * (19372.0 / 6561.0 * k1p - 25360.0 / 2187.0 * k2p
                       + 64448.0 / 6561.0 * k3p - 212.0 / 729.0 * k4p)
        ar = r + dt * (19372.0 / 6561.0 * k1r - 25360.0 / 2187.0 * k2r
                       + 64448.0 / 6561.0 * k3r - 212.0 / 729.0 * k4r)
        as_ = s + dt * (19372.0 / 6561.0 * k1s - 25360.0 / 2187.0 * k2s
                        + 64448.0 / 6561.0 * k3s - 212.0 / 729.0 * k4s)
        k5p = -h * ap * as_
        k5r = -ar * as_
        k5s = ar * ar + h * ap * ap

        ap = p + dt * (9017.0 / 3168.0 * k1p - 355.0 / 33.0 * k2p
                       + 46732.0 / 5247.0 * k3p + 49.0 / 176.0 * k4p
                       - 5103.0 / 18656.0 * k5p)
        ar = r + dt * (9017.0 / 3168.0 * k1r - 355.0 / 33.0 * k2r
                       + 46732.0 / 5247.0 * k3r + 49.0 / 176.0 * k4r
                       - 5103.0 / 18656.0 * k5r)
        as_ = s + dt * (9017.0 / 3168.0 * k1s - 355.0 / 33.0 * k2s
                        + 46732.0 / 5247.0 * k3s + 49.0 / 176.0 * k4s
                        - 5103.0 / 18656.0 * k5s)
        k6p = -h * ap * as_
        k6r = -ar * as_
        k6s = ar * ar + h * ap * ap

        # 5th-order solution (b row); k7 = rhs at the new point (FSAL).
        np_ = p + dt * (35.0 / 384.0 * k1p + 500.0 / 1113.0 * k3p + 125.0 / 192.0 * k4p
                        - 2187.0 / 6784.0 * k5p + 11.0 / 84.0 * k6p)
        nr = r + dt * (35.0 / 384.0 * k1r + 500.0 / 1113.0 * k3r + 125.0 / 192.0 * k4r
                       - 2187.0 / 6784.0 * k5r + 11.0 / 84.0 * k6r)
        ns = s + dt * (35.0 / 384.0 * k1s + 500.0 / 1113.0 * k3s + 125.0 / 192.0 * k4s
                       - 2187.0 / 6784.0 * k5s + 11.0 / 84.0 * k6s)
        k7p = -h * np_ * ns
        k7r = -nr * ns
        k7s = nr * nr + h * np_ * np_

        ep = dt * (71.0 / 57600.0 * k1p - 71.0 / 16695.0 * k3p + 71.0 / 1920.0 * k4p
                   - 17253.0 / 339200.0 * k5p + 22.0 / 525.0 * k6p - 1.0 / 40.0 * k7p)
        er = dt * (71.0 / 57600.0 * k1r - 71.0 / 16695.0 * k3r + 71.0 / 1920.0 * k4r
                   - 17253.0 / 339200.0 * k5r + 22.0 / 525.0 * k6r - 1.0 / 40.0 * k7r)
        es = dt * (71.0 / 57600.0 * k1s - 71.0 / 16695.0 * k3s + 71.0 / 1920.0 * k4s
                   - 17253.0 / 339200.0 * k5s + 22.0 / 525.0 * k6s - 1.0 / 40.0 * k7s)

        sp = atol + rtol * max(abs(p), abs(np_))
        sr = atol + rtol * max(abs(r), abs(nr))
        ss = atol + rtol * max(abs(s), abs(ns))
        err = np.sqrt(((ep / sp) ** 2 + (er / sr) ** 2 + (es / ss) ** 2) / 3.0)

        if err <= 1.0:
            t = t + dt
            p, r, s = np_, nr, ns
            if not (np.isfinite(p) and np.isfinite(r) and np.isfinite(s)):
                return m, STATUS_NONFINITE
            if m < nrec:
                t_out[m] = t
                x_out[m, 0] = p
                x_out[m, 1] = r
                x_out[m, 2] = s
                m += 1
            else:
                return m, STATUS_MAXSTEPS
        if err == 0.0:
            factor = 5.0
        else:
            factor = 0.9 * err ** -0.2
            if factor < 0.2:
                factor = 0.2
            elif factor > 5.0:
                factor = 5.0
        dt = dt * factor
    return m, STATUS_MAXSTEPS


# ---------------------------------------------------------------------------
# Trigonometric-interpolant evaluation at scattered points.
# coef is the full (n, n, n) FFT coefficient array divided by n^3; kvec the
# integer wavenumbers in fft order.  Evaluation is a separable contraction,
# n^3 + n^2 + n complex multiply-adds per point.
# ---------------------------------------------------------------------------

def _trig_eval_loop(coef, kvec, pts, out):
    n = kvec.shape[0]
    two_pi_i = 2j * np.pi
    for a in range(pts.shape[0]):
        ex = np.empty(n, np.complex128)
        ey = np.empty(n, np.complex128)
        ez = np.empty(n, np.complex128)
        for i in range(n):
            ex[i] = np.exp(two_pi_i * (kvec[i] * pts[a, 0]))
            ey[i] = np.exp(two_pi_i * (kvec[i] * pts[a, 1]))
            ez[i] = np.exp(two_pi_i * (kvec[i] * pts[a, 2]))
        acc = 0.0 + 0.0j
        for i in range(n):
            row = 0.0 + 0.0j
            for j in range(n):
                inner = 0.0 + 0.0j
                for k in range(n):
                    inner += coef[i, j, k] * ez[k]
                row += inner * ey[j]
            acc += row * ex[i]
        out[a] = acc.real
    return out


def trig_eval_numpy(coef, kvec, pts):
    """Vectorized fallback: contract coefficient cube against per-point phases."""
    out = np.empty(pts.shape[0])
    chunk = 512
    for lo in range(0, pts.shape[0], chunk):
        hi = min(lo + chunk, pts.shape[0])
        ex = np.exp(2j * np.pi * np.outer(pts[lo:hi, 0], kvec))
        ey = np.exp(2j * np.pi * np.outer(pts[lo:hi, 1], kvec))
        ez = np.exp(2j * np.pi * np.outer(pts[lo:hi, 2], kvec))
        t1 = np.tensordot(ez, coef, axes=(1, 2))      # (m, i, j)
        t2 = np.einsum("mij,mj->mi", t1, ey)
        out[lo:hi] = np.einsum("mi,mi->m", t2, ex).real
    return out


# Interpreted references are kept importable for the benchmark and for the
# cross-path equivalence tests.
rk4_loop_py = _rk4_loop
rk45_loop_py = _rk45_loop

if _numba is not None:
    rk4_loop = _numba.njit(cache=True)(_rk4_loop)
    rk45_loop = _numba.njit(cache=True)(_rk45_loop)
    _trig_eval_jit = _numba.njit(cache=True)(_trig_eval_loop)

    def trig_eval_numba(coef, kvec, pts):
        out = np.empty(pts.shape[0])
        _trig_eval_jit(coef, kvec, pts, out)
        return out
else:
    rk4_loop = _rk4_loop
    rk45_loop = _rk45_loop

    def trig_eval_numba(coef, kvec, pts):
        out = np.empty(pts.shape[0])
        _trig_eval_loop(coef, kvec, pts, out)
        return out

# The vectorized contraction beats the serial jitted loop on few-core hosts
# (see benchmarks/bench_kernels.py), so it is the default evaluation path.
trig_eval = trig_eval_numpy
