"""Finite-dimensional Lie-Poisson engine for the rattleback spinning top.

The algebra is the three-dimensional solvable algebra of Bianchi type VI_h,
spanned by pitching, rolling and spinning generators (P, R, S) with

    [P, R] = 0,    [S, P] = h P,    [S, R] = R.

Dual coordinates are written (p, r, s).  The quadratic Hamiltonian
H = (p^2 + r^2 + s^2)/2 produces the flow

    dp/dt = -h p s,   dr/dt = -r s,   ds/dt = r^2 + h p^2,

whose generic Casimir is C = p * r**(-h).  On the singular line (0, 0, s)
the Poisson matrix vanishes identically and s itself becomes invariant: a
Casimir of the restricted (trivial) bracket on the line.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BlowUpError, DomainError, InvalidParameterError

__all__ = [
    "AlgebraStructure",
    "RattlebackState",
    "Trajectory",
    "bianchi_vi",
    "poisson_matrix",
    "rattleback_rhs",
    "hamiltonian",
    "casimir",
    "casimir_gradient",
    "casimir_gradient_check",
    "integrate",
    "restricted_casimir_report",
]


@dataclass(frozen=True, eq=False)
class AlgebraStructure:
    """Structure constants c[k, i, j] of e_k in [e_i, e_j], plus the shape parameter h."""

    c: np.ndarray
    h: float

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (3, 3, 3):
            raise InvalidParameterError("structure constants must be a 3x3x3 array")
        object.__setattr__(self, "c", c)
        if not np.isfinite(self.h):
            raise InvalidParameterError("parameter h must be finite")
        if self.antisymmetry_residual() > 0.0:
            raise InvalidParameterError("structure constants must be antisymmetric in (i, j)")
        scale = max(1.0, float(np.abs(c).max()))
        if self.jacobi_residual() > 1e-14 * scale * scale:
            raise InvalidParameterError("structure constants violate the Jacobi identity")

    def antisymmetry_residual(self) -> float:
        return float(np.abs(self.c + self.c.transpose(0, 2, 1)).max())

    def jacobi_residual(self) -> float:
        # sum_m c[m,i,j] c[l,m,k] + cyclic in (i, j, k), for every l.
        t = np.einsum("mij,lmk->lijk", self.c, self.c)
        res = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
        return float(np.abs(res).max())


@dataclass(frozen=True)
class RattlebackState:
    """Dual-space point: pitching, rolling and spinning amplitudes."""

    p: float
    r: float
    s: float

    def __post_init__(self):
        for name in ("p", "r", "s"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParameterError(f"component {name} must be finite")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.r, self.s])


@dataclass(eq=False)
class Trajectory:
    """Sampled solution with per-sample energy and Casimir diagnostics."""

    times: np.ndarray
    states: np.ndarray          # shape (m, 3), rows (p, r, s)
    hamiltonians: np.ndarray
    casimirs: np.ndarray        # nan where r <= 0 leaves the Casimir chart
    h: float
    method: str

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise InvalidParameterError("times and states must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidParameterError("times must be strictly increasing")

    @property
    def final_state(self) -> RattlebackState:
        p, r, s = self.states[-1]
        return RattlebackState(p, r, s)


def bianchi_vi(h: float) -> AlgebraStructure:
    """Structure constants of Bianchi VI_h in the ordered basis (P, R, S).

    Emits a warning for h >= -1: the algebraic identities hold for any h,
    but the chiral spinning-top interpretation needs h < -1.
    """
    if not (isinstance(h, (int, float)) and math.isfinite(h)):
        raise InvalidParameterError("h must be a finite real number")
    h = float(h)
    if h >= -1:
        warnings.warn(
            f"h = {h:g} is outside the chiral regime h < -1; "
            "algebraic identities still hold",
            stacklevel=2,
        )
    c = np.zeros((3, 3, 3))
    # [S, P] = h P, [S, R] = R, [P, R] = 0; indices (P, R, S) = (0, 1, 2).
    c[0, 2, 0] = h
    c[0, 0, 2] = -h
    c[1, 2, 1] = 1.0
    c[1, 1, 2] = -1.0
    return AlgebraStructure(c=c, h=h)


def poisson_matrix(alg: AlgebraStructure, xi: RattlebackState) -> np.ndarray:
    """Lie-Poisson matrix J_ij = c[k, i, j] xi_k, so that {F, G} = grad F . J grad G."""
    return np.einsum("kij,k->ij", alg.c, xi.as_array())


def rattleback_rhs(xi: RattlebackState, h: float) -> RattlebackState:
    """Time derivative (-h p s, -r s, r^2 + h p^2); equals J(xi) grad H."""
    p, r, s = xi.p, xi.r, xi.s
    return RattlebackState(-h * p * s, -r * s, r * r + h * p * p)


def hamiltonian(xi: RattlebackState) -> float:
    return 0.5 * (xi.p ** 2 + xi.r ** 2 + xi.s ** 2)


def casimir(xi: RattlebackState, h: float) -> float:
    """Generic Casimir C = p * r**(-h) on the chart r > 0."""
    if xi.r <= 0:
        raise DomainError("Casimir chart requires r > 0 (non-integer power of r)")
    return xi.p * xi.r ** (-h)


def casimir_gradient(xi: RattlebackState, h: float) -> np.ndarray:
    if xi.r <= 0:
        raise DomainError("Casimir chart requires r > 0 (non-integer power of r)")
    return np.array([xi.r ** (-h), -h * xi.p * xi.r ** (-h - 1.0), 0.0])


def casimir_gradient_check(xi: RattlebackState, h: float) -> float:
    """Max-norm of J grad C; vanishes identically when C is a Casimir."""
    j = poisson_matrix(bianchi_vi_quiet(h), xi)
    return float(np.abs(j @ casimir_gradient(xi, h)).max())


def bianchi_vi_quiet(h: float) -> AlgebraStructure:
    """bianchi_vi without the chirality-regime warning (internal plumbing)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return bianchi_vi(h)


def integrate(
    xi0: RattlebackState,
    h: float,
    dt: float,
    t_final: float,
    method: str = "rk4",
    *,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    stride: int = 1,
) -> Trajectory:
    """Integrate the rattleback flow.

    method="rk4" takes fixed steps of size dt and records every ``stride``-th
    step; method="rk45" is adaptive Dormand-Prince (dt is ignored) and records
    every accepted step.  No conservation projection is applied: drift in H
    and C is a genuine accuracy diagnostic.
    """
    if not (dt > 0):
        raise InvalidParameterError("dt must be positive")
    if not (t_final > 0):
        raise InvalidParameterError("t_final must be positive")
    if not math.isfinite(h):
        raise InvalidParameterError("h must be finite")
    if method not in ("rk4", "rk45"):
        raise InvalidParameterError(f"unknown method {method!r}")

    if method == "rk4":
        n_steps = int(round(t_final / dt))
        if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, t_final):
            raise InvalidParameterError("t_final must be an integer number of steps")
        n_rec = n_steps // stride + 1
        out = np.empty((n_rec, 3))
        out[0] = xi0.as_array()
        filled, status = kernels.rk4_loop(
            xi0.p, xi0.r, xi0.s, float(h), float(dt), n_steps, stride, out
        )
        if status == kernels.STATUS_NONFINITE:
            raise BlowUpError("state became non-finite", time=filled * stride * dt)
        times = np.arange(filled) * (stride * dt)
        states = out[:filled]
    else:
        max_steps = 10_000_000
        n_rec = 4_000_000
        t_out = np.empty(n_rec)
        x_out = np.empty((n_rec, 3))
        t_out[0] = 0.0
        x_out[0] = xi0.as_array()
        filled, status = kernels.rk45_loop(
            xi0.p, xi0.r, xi0.s, float(h), float(t_final), rtol, atol, max_steps, t_out, x_out
        )
        if status == kernels.STATUS_NONFINITE:
            raise BlowUpError("state became non-finite", time=float(t_out[filled - 1]))
        if status == kernels.STATUS_MAXSTEPS:
            raise BlowUpError("step budget exhausted", time=float(t_out[filled - 1]))
        times = t_out[:filled].copy()
        states = x_out[:filled].copy()

    ham = 0.5 * np.einsum("ij,ij->i", states, states)
    with np.errstate(invalid="ignore"):
        cas = np.where(states[:, 1] > 0, states[:, 0] * states[:, 1] ** (-h), np.nan)
    return Trajectory(times=times, states=states, hamiltonians=ham, casimirs=cas,
                      h=float(h), method=method)


def restricted_casimir_report(s0: float, h: float) -> dict:
    """Verify the singular-line structure at (0, 0, s0).

    Checks that the flow vanishes exactly, the Poisson matrix is identically
    zero, and that the bracket of any function of s with a basis of cubic
    monomials is exactly zero on the line, so every function of s (s itself
    in particular) is a Casimir of the bracket restricted to the line.
    """
    xi = RattlebackState(0.0, 0.0, float(s0))
    alg = bianchi_vi_quiet(h)

    rhs = rattleback_rhs(xi, h)
    rhs_residual = max(abs(rhs.p), abs(rhs.r), abs(rhs.s))
    j = poisson_matrix(alg, xi)
    j_residual = float(np.abs(j).max())

    # {phi(s), F} = grad phi . J grad F with grad phi = (0, 0, phi'(s)).
    # J = 0 makes every such bracket vanish exactly; probe a monomial basis.
    bracket_residual = 0.0
    grad_phi = np.array([0.0, 0.0, 1.0])  # any phi'(s0) rescales this
    for grad_f in _monomial_gradients(xi):
        bracket_residual = max(bracket_residual, abs(float(grad_phi @ j @ grad_f)))

    checks = {
        "rhs_zero_on_line": rhs_residual,
        "poisson_matrix_zero_on_line": j_residual,
        "bracket_trivial_on_line": bracket_residual,
    }
    return {
        "s0": float(s0),
        "h": float(h),
        "checks": {k: {"residual": v, "pass": v == 0.0} for k, v in checks.items()},
        "pass": all(v == 0.0 for v in checks.values()),
    }


def _monomial_gradients(xi: RattlebackState):
    """Gradients at xi of all monomials p^a r^b s^c with 1 <= a+b+c <= 3."""
    vals = xi.as_array()
    grads = []
    for a in range(4):
        for b in range(4 - a):
            for c in range(4 - a - b):
                if not 1 <= a + b + c <= 3:
                    continue
                exps = np.array([a, b, c], dtype=float)
                grad = np.zeros(3)
                for i in range(3):
                    if exps[i] == 0:
                        continue
                    e = exps.copy()
                    e[i] -= 1
                    grad[i] = exps[i] * np.prod(vals ** e)
                grads.append(grad)
    return grads
