"""casimir-lab: Lie-Poisson and foliation-invariant verification toolkit.

Two engines under one roof:

* a finite-dimensional Lie-Poisson integrator for the rattleback spinning
  top (Bianchi VI_h algebra), with energy/Casimir diagnostics and the
  singular-line restricted-Casimir checks;
* a spectral exterior-calculus engine on the periodic unit 3-torus, with
  ideal-fluid structure (pairing, coadjoint action, helicity, Euler
  evolution) and codimension-1 foliation machinery (eta/gamma solvers,
  Godbillon-Vey integral, gauge freedom, degeneracy fields).
"""

__version__ = "0.1.0"

from . import errors  # noqa: E402  (re-exported for callers catching typed errors)

