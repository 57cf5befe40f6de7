"""Lie-Poisson structure of ideal fluids on the spectral torus engine.

State is a velocity 1-form representative alpha of the coset modulo exact
forms.  The pairing with a vector field u is <alpha, u> = int (i_u alpha) mu;
the coadjoint action is [u, alpha]+ = -i_u d(alpha); helicity int alpha^d(alpha)
is the generic Casimir.  Representative independence is never assumed: it is
tested by shifting alpha by exact forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError, InvalidParameterError, PreconditionError
from .forms3 import (
    Form0,
    Form1,
    VectorField,
    d,
    dealias,
    eval_at,
    integrate3,
    interior,
    leray_project,
    scale_by,
    sharp,
    vf_bracket,
    closed_curve,
    curve_velocity,
    wedge,
)

__all__ = [
    "FluidState",
    "pairing",
    "lie_poisson_bracket",
    "coadjoint",
    "helicity",
    "helicity_gradient_check",
    "velocity_of",
    "energy",
    "euler_rhs",
    "euler_evolve",
    "subalgebra_orthogonality",
    "loop_integral",
    "helicity_density_check",
]


@dataclass(frozen=True)
class FluidState:
    """A representative velocity 1-form on its grid."""

    alpha: Form1

    def __post_init__(self):
        if not self.alpha.is_finite():
            raise InvalidParameterError("fluid state must have finite components")

    @property
    def grid(self):
        return self.alpha.grid


def pairing(alpha: Form1, u: VectorField) -> float:
    """<alpha, u> = int (i_u alpha) mu; representative independent for div-free u."""
    return float(np.mean(np.sum(alpha.data * u.data, axis=0)))


def lie_poisson_bracket(alpha: Form1, u: VectorField, v: VectorField) -> float:
    """<alpha, [u, v]>, the ideal-fluid Lie-Poisson bracket on representatives."""
    return pairing(alpha, vf_bracket(u, v))


def coadjoint(u: VectorField, alpha: Form1) -> Form1:
    """[u, alpha]+ = -i_u d(alpha), the motion generated by u on the dual."""
    return -interior(u, d(alpha))


def helicity(alpha: Form1) -> float:
    return integrate3(wedge(alpha, d(alpha)))


def helicity_gradient_check(alpha: Form1, da: Form1, eps: float = 1e-5) -> tuple[float, float]:
    """Directional derivative of helicity two ways.

    Returns (centered finite difference, pairing of da with twice the
    vorticity).  Helicity is quadratic, so the centered difference is exact
    up to roundoff and the two values agree to the functional-gradient
    identity delta H = <da, 2 W>.
    """
    lhs = (helicity(alpha + eps * da) - helicity(alpha - eps * da)) / (2.0 * eps)
    rhs = 2.0 * integrate3(wedge(da, d(alpha)))
    return lhs, rhs


def velocity_of(alpha: Form1) -> VectorField:
    """Divergence-free velocity representative: Leray projection of alpha sharp."""
    return leray_project(sharp(alpha))


def energy(alpha: Form1) -> float:
    """Kinetic energy (1/2) <alpha, v>; depends only on the coset of alpha."""
    return 0.5 * pairing(alpha, velocity_of(alpha))


def euler_rhs(state: FluidState) -> Form1:
    """Coset representative of d(alpha)/dt = -i_v d(alpha), v = Leray(alpha sharp).

    The pressure term of Euler's equations is an exact form and is dropped:
    only the coset evolves.
    """
    v = velocity_of(state.alpha)
    return -interior(v, d(state.alpha))


@dataclass
class EvolveDiagnostics:
    times: np.ndarray
    energies: np.ndarray
    helicities: np.ndarray
    extra: dict = field(default_factory=dict)


def euler_evolve(state: FluidState, dt: float, t_final: float,
                 sample_every: int = 1) -> tuple[FluidState, EvolveDiagnostics]:
    """RK4 Euler evolution with 2/3-rule dealiasing of each right-hand side.

    Diagnostics record energy and helicity every ``sample_every`` steps.
    """
    if not dt > 0:
        raise InvalidParameterError("dt must be positive")
    g = state.grid
    a = dealias(state.alpha.data, g)
    n_steps = int(np.ceil(t_final / dt - 1e-12))

    def rhs(arr):
        st = FluidState(Form1(g, arr))
        return dealias(euler_rhs(st).data, g)

    times = [0.0]
    energies = [energy(Form1(g, a))]
    helicities = [helicity(Form1(g, a))]
    t = 0.0
    # divergence shows up as inf/nan mid-step; the contract is the exception
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(n_steps):
            h = min(dt, t_final - t)
            k1 = rhs(a)
            k2 = rhs(a + 0.5 * h * k1)
            k3 = rhs(a + 0.5 * h * k2)
            k4 = rhs(a + h * k3)
            a = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
            if not np.all(np.isfinite(a)):
                raise BlowUpError("Euler evolution blew up", time=t)
            if (step + 1) % sample_every == 0 or step == n_steps - 1:
                al = Form1(g, a)
                times.append(t)
                energies.append(energy(al))
                helicities.append(helicity(al))
    diag = EvolveDiagnostics(np.asarray(times), np.asarray(energies), np.asarray(helicities))
    return FluidState(Form1(g, a)), diag


def subalgebra_orthogonality(alpha: Form1, beta: Form1, h_fn: Form0,
                             integrability_tol: float = 1e-9) -> float:
    """<alpha, Y> for the leaf-tangent field Y with i_Y mu = d(h_fn * beta).

    Vanishes whenever alpha is a function multiple of the integrable defining
    form beta; the returned pairing is the raw residual.
    """
    from .foliation import check_integrability  # local import avoids a module cycle

    report = check_integrability(beta)
    if report["relative_residual"] > integrability_tol:
        raise PreconditionError(
            f"beta is not integrable: residual {report['relative_residual']:.3e}"
        )
    nu = d(scale_by(h_fn, beta))
    y = VectorField(alpha.grid, nu.data)
    return pairing(alpha, y)


def loop_integral(alpha: Form1, points: np.ndarray) -> float:
    """int_gamma alpha over a closed curve given as uniform parameter samples.

    ``points`` includes the closing row (last == first mod 1, to 1e-12);
    quadrature is the uniform-grid mean of the pulled-back integrand, which
    is spectrally accurate for smooth curves.
    """
    samples = closed_curve(np.asarray(points, dtype=float))
    vel = curve_velocity(samples)
    vals = eval_at(alpha, samples)          # (m, 3) component samples
    return float(np.mean(np.sum(vals * vel, axis=1)))


def helicity_density_check(alpha: Form1) -> float:
    """Pointwise max of |alpha ^ d(alpha)|; zero iff the helicity density vanishes."""
    return wedge(alpha, d(alpha)).linf()
