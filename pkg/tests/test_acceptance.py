"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Run with output visible:  pytest tests/test_acceptance.py -v -s

Criterion 13 drives the CLI end to end, so this module re-verifies the
machine-readable report against every bound asserted by criteria 1-12.
"""

import json
import time

import numpy as np
import pytest

from casimir_lab import cli
from casimir_lab import rattleback as rb
from casimir_lab.verify import DEFAULT_SEED, SuiteConfig, run_suite

# criterion number -> (check name, pinned tolerance or None for dynamic)
CRITERIA_CHECKS = {
    1: [("rattleback-energy-conservation-rk4", 1e-8),
        ("rattleback-casimir-conservation-rk4", 1e-8)],
    2: [("rattleback-rhs-zero-on-line", 0.0),
        ("rattleback-poisson-matrix-zero-on-line", 0.0),
        ("rattleback-bracket-trivial-on-line", 0.0),
        ("rattleback-singular-line-constant", 0.0)],
    3: [("forms-dd-zero", 1e-12),
        ("forms-contraction-identity", 1e-12)],
    4: [("fluid-helicity-beltrami", 1e-10)],
    5: [("fluid-euler-helicity-conservation", 1e-6),
        ("fluid-euler-energy-conservation", 1e-6)],
    6: [("fluid-helicity-gradient", 1e-6)],
    7: [("fluid-subalgebra-orthogonality", 1e-10),
        ("fluid-helicity-density-foliated", 1e-10),
        ("fluid-loop-leaf-tangent", 1e-10)],
    8: [("gv-eta-defining-residual", 1e-9),
        ("gv-gamma-defining-residual", 1e-9),
        ("gv-gamma-solvability-certificate", 1e-10)],
    9: [("gv-gauge-scaling-spread", None),
        ("gv-graph-family-zero", 1e-10),
        ("gv-graph-family-zero-steep", 1e-10)],
    10: [("gv-chi-tangency", 1e-8),
         ("gv-chi-closure", 1e-8),
         ("gv-chi-gauge-shift-formula", 1e-10)],
    11: [("gv-variation-profile-deformation", 1e-6),
         ("gv-variation-rescaling", 1e-6),
         ("gv-variation-diffeo-transport", 1e-6)],
    12: [("gv-transport-casimir-drift", None),
         ("gv-transport-nondivfree-drift", None),
         ("gv-degeneracy-pairing", 1e-9),
         ("gv-bracket-degeneracy", 1e-8)],
}


@pytest.fixture(scope="module")
def full_report():
    return run_suite("all", SuiteConfig(grid_n=32, seed=DEFAULT_SEED))


def _verdict(n, ok, detail=""):
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {n} failed: {detail}"


def _assert_checks(report, n):
    by_name = {c["check"]: c for c in report["checks"]}
    details = []
    ok = True
    for name, pinned_tol in CRITERIA_CHECKS[n]:
        rec = by_name.get(name)
        if rec is None:
            ok = False
            details.append(f"{name}: MISSING")
            continue
        if pinned_tol is not None and rec["tolerance"] != pinned_tol:
            ok = False
            details.append(f"{name}: tolerance {rec['tolerance']} != {pinned_tol}")
            continue
        if not rec["pass"]:
            ok = False
            details.append(f"{name}: {rec['value']:.3e} > {rec['tolerance']:.3e}")
        else:
            details.append(f"{name}={rec['value']:.2e}")
    return ok, "; ".join(details)


def test_criterion_01_rattleback_conservation(full_report):
    # warm start, then time the pinned acceptance run
    rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3, t_final=0.01)
    t0 = time.perf_counter()
    tr = rb.integrate(rb.RattlebackState(0.1, 0.2, 1.0), -2.0, dt=1e-3, t_final=100.0)
    elapsed = time.perf_counter() - t0
    h_drift = float(np.abs(tr.hamiltonians - tr.hamiltonians[0]).max() / tr.hamiltonians[0])
    c_drift = float(np.abs(tr.casimirs - tr.casimirs[0]).max() / abs(tr.casimirs[0]))
    ok, detail = _assert_checks(full_report, 1)
    ok = ok and h_drift <= 1e-8 and c_drift <= 1e-8 and elapsed < 5.0
    _verdict(1, ok, f"H drift {h_drift:.2e}, C drift {c_drift:.2e}, "
                    f"runtime {elapsed:.2f}s (< 5s); {detail}")


def test_criterion_02_singular_line(full_report):
    ok, detail = _assert_checks(full_report, 2)
    # direct exactness probes on top of the suite records
    for s0 in (0.0, 1.0, -7.3):
        rhs = rb.rattleback_rhs(rb.RattlebackState(0.0, 0.0, s0), -2.0)
        ok = ok and (rhs.p, rhs.r, rhs.s) == (0.0, 0.0, 0.0)
    _verdict(2, ok, detail)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8, 9, 10, 11, 12])
def test_criteria_on_report(full_report, n):
    ok, detail = _assert_checks(full_report, n)
    _verdict(n, ok, detail)


def test_criterion_13_full_cli_verify(tmp_path):
    report_path = tmp_path / "verify_all.json"
    t0 = time.perf_counter()
    code = cli.main(["verify", "--suite", "all", "--grid", "32",
                     "--seed", str(DEFAULT_SEED), "--report", str(report_path)])
    elapsed = time.perf_counter() - t0
    doc = json.loads(report_path.read_text())
    by_name = {c["check"]: c for c in doc["checks"]}
    covered = all(name in by_name
                  for n in CRITERIA_CHECKS for name, _ in CRITERIA_CHECKS[n])
    ok = (code == 0 and elapsed < 600.0 and doc["passed"] and covered
          and doc["grid"] == 32 and doc["version"])
    _verdict(13, ok, f"exit {code}, {elapsed:.0f}s (< 600s), "
                     f"{len(doc['checks'])} checks, criteria 1-12 covered: {covered}")
