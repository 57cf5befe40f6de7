"""Command-line entry point.

Subcommands:
    rattleback simulate | verify
    fluid helicity | evolve | gv | verify
    verify
    run            (execute a JSON scenario file)

Exit codes: 0 all checks passed / computation done, 1 numerical check
failure (failing check names on stderr), 2 configuration or parse errors.
The environment variable CASIMIR_LAB_SEED overrides any configured seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import fieldexpr
from . import foliation as fol
from . import forms3 as f3
from . import rattleback as rb
from .errors import BlowUpError, CasimirLabError, ConfigError, ParseError
from .fluid import FluidState, euler_evolve, helicity
from .verify import DEFAULT_SEED, SuiteConfig, report_json, run_suite

SCENARIO_KINDS = ("rattleback", "fluid-helicity", "fluid-euler", "foliation-gv",
                  "verify-all")
TAIL_WARN_FRACTION = 1e-8


@dataclass
class Scenario:
    kind: str
    grid: int = 32
    profile: str | None = None
    scale: str | None = None
    field_spec: str | None = None
    h: float = -2.0
    ic: tuple = (0.1, 0.2, 1.0)
    dt: float = 1e-3
    t_final: float = 1.0
    method: str = "rk4"
    seed: int = DEFAULT_SEED
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    report: str | None = None
    dump_fields: str | None = None


_SCENARIO_KEYS = {
    "kind", "grid", "profile", "scale", "field", "h", "ic", "dt", "t_final",
    "method", "seed", "tolerances", "out", "report", "dump_fields",
}


def load_config(path: str) -> Scenario:
    """Map a JSON document onto a Scenario, applying defaults."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - _SCENARIO_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "kind" not in doc:
        raise ConfigError("config is missing the required key 'kind'")
    if doc["kind"] not in SCENARIO_KINDS:
        raise ConfigError(
            f"unknown kind {doc['kind']!r}; expected one of {', '.join(SCENARIO_KINDS)}")
    sc = Scenario(kind=doc["kind"])
    for key, value in doc.items():
        if key == "kind":
            continue
        attr = "field_spec" if key == "field" else key
        if key == "ic":
            value = tuple(float(v) for v in value)
        setattr(sc, attr, value)
    if not isinstance(sc.tolerances, dict):
        raise ConfigError("'tolerances' must be an object of check-name: bound")
    sc.seed = _seed_override(sc.seed)
    return sc


def _seed_override(seed) -> int:
    env = os.environ.get("CASIMIR_LAB_SEED")
    return int(env) if env else int(seed)


def _parse_expr(text: str, what: str):
    try:
        return fieldexpr.parse(text)
    except ParseError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}: {exc}") from None


def _eval_expr_field(text: str, grid: f3.Grid, what: str) -> f3.Form0:
    form = fieldexpr.eval_on_grid(_parse_expr(text, what), grid)
    tail = f3.spectral_tail_fraction(form.data, grid)
    if tail > TAIL_WARN_FRACTION:
        print(f"warning: {what} {text!r} has a spectral tail fraction "
              f"{tail:.2e}; it may not be periodic or resolved at n = {grid.n}",
              file=sys.stderr)
    return form


def _split_components(spec: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_field_spec(spec: str, grid_n: int) -> f3.Form1:
    """A 1-form from either an .f3rm container or 'expr,expr,expr' components."""
    if spec.endswith(".f3rm"):
        obj = f3.io.load(spec)
        if isinstance(obj, f3.VectorField):
            return f3.flat(obj)
        if not isinstance(obj, f3.Form1):
            raise ConfigError(f"container {spec} holds rank {obj.rank}, need a 1-form")
        return obj
    parts = _split_components(spec)
    if len(parts) != 3:
        raise ConfigError(
            f"field spec needs three comma-separated components, got {len(parts)}")
    grid = f3.Grid(grid_n)
    comps = [_eval_expr_field(p.strip(), grid, "field component") for p in parts]
    return f3.Form1(grid, np.stack([c.data for c in comps]))


def _expr_uses(expr, names: set) -> bool:
    if isinstance(expr, fieldexpr.Name):
        return expr.name in names
    if isinstance(expr, fieldexpr.Neg):
        return _expr_uses(expr.operand, names)
    if isinstance(expr, fieldexpr.Call):
        return _expr_uses(expr.arg, names)
    if isinstance(expr, fieldexpr.BinOp):
        return _expr_uses(expr.left, names) or _expr_uses(expr.right, names)
    return False


def write_trajectory_csv(path: str, tr: rb.Trajectory) -> None:
    table = np.column_stack([tr.times, tr.states, tr.hamiltonians, tr.casimirs])
    np.savetxt(path, table, fmt="%.17g", delimiter=",",
               header="t,p,r,s,H,C", comments="")


# --- subcommand handlers -----------------------------------------------------

def cmd_rattleback_simulate(args) -> int:
    try:
        ic = tuple(float(v) for v in args.ic.split(","))
        if len(ic) != 3:
            raise ValueError
    except ValueError:
        print(f"error: --ic must be three comma-separated reals, got {args.ic!r}",
              file=sys.stderr)
        return 2
    method = {"rk4": "rk4", "rk45": "rk45"}[args.method]
    tr = rb.integrate(rb.RattlebackState(*ic), args.h, dt=args.dt,
                      t_final=args.t_final, method=method, stride=args.stride)
    if args.out:
        write_trajectory_csv(args.out, tr)
        print(f"wrote {len(tr.times)} samples to {args.out}")
    else:
        h_drift = float(np.abs(tr.hamiltonians - tr.hamiltonians[0]).max())
        print(json.dumps({"samples": len(tr.times), "H0": tr.hamiltonians[0],
                          "H_drift_abs": h_drift,
                          "final": list(tr.states[-1])}, indent=2))
    return 0


def cmd_rattleback_verify(args) -> int:
    cfg = SuiteConfig(seed=_seed_override(args.seed), rattleback_h=args.h)
    report = run_suite("rattleback", cfg)
    named = {c["check"]: {"residual": c["value"], "tolerance": c["tolerance"],
                          "pass": c["pass"]}
             for c in report["checks"]}
    print(json.dumps(named, indent=2, sort_keys=True))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report_json(report))
    return 0 if report["passed"] else 1


def cmd_fluid_helicity(args) -> int:
    alpha = parse_field_spec(args.field, args.grid)
    print(json.dumps({"helicity": helicity(alpha), "grid": alpha.grid.n}, indent=2))
    return 0


def cmd_fluid_evolve(args) -> int:
    alpha = parse_field_spec(args.field, args.grid)
    state, diag = euler_evolve(FluidState(alpha), dt=args.dt, t_final=args.t_final)
    if args.out:
        table = np.column_stack([diag.times, diag.energies, diag.helicities])
        np.savetxt(args.out, table, fmt="%.17g", delimiter=",",
                   header="t,energy,helicity", comments="")
        print(f"wrote diagnostics to {args.out}")
    summary = {
        "t_final": args.t_final,
        "energy_initial": diag.energies[0],
        "energy_final": diag.energies[-1],
        "helicity_initial": diag.helicities[0],
        "helicity_final": diag.helicities[-1],
    }
    print(json.dumps(summary, indent=2))
    if args.dump_fields:
        f3.io.save(args.dump_fields, state.alpha)
        print(f"dumped final state to {args.dump_fields}")
    return 0


def cmd_fluid_gv(args) -> int:
    if args.preset != "graph":
        print(f"error: unknown preset {args.preset!r}", file=sys.stderr)
        return 2
    grid = f3.Grid(args.grid)
    prof_expr = _parse_expr(args.profile, "--profile")
    if _expr_uses(prof_expr, {"x", "y"}):
        print("error: --profile must be an expression in z only (graph preset)",
              file=sys.stderr)
        return 2
    profile = _eval_expr_field(args.profile, grid, "--profile")
    scale = _eval_expr_field(args.scale, grid, "--scale") if args.scale else None
    alpha = fol.graph_foliation_form(grid, profile, scale)
    state = fol.FoliatedState.from_alpha(alpha)
    gv = fol.godbillon_vey(state)
    print(f"GV = {gv:.15e}")
    print(f"{'residual':35s} value")
    for key, value in state.residuals.items():
        print(f"{key:35s} {value:.6e}")
    if args.report:
        doc = {"gv": gv, "grid": grid.n, "profile": args.profile,
               "scale": args.scale, "residuals": state.residuals}
        with open(args.report, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
    return 0


def _run_verify(suite: str, grid: int, seed, tolerances, report_path) -> int:
    cfg = SuiteConfig(grid_n=grid, seed=_seed_override(seed),
                      tolerances=tolerances or {})
    report = run_suite(suite, cfg)
    text = report_json(report)
    if report_path:
        with open(report_path, "w") as fh:
            fh.write(text)
        print(f"report written to {report_path}")
    else:
        print(text)
    if not report["passed"]:
        print("failed checks: " + ", ".join(report["failed_checks"]), file=sys.stderr)
        return 1
    return 0


def cmd_fluid_verify(args) -> int:
    return _run_verify(args.suite, args.grid, args.seed, {}, args.report)


def cmd_verify(args) -> int:
    return _run_verify(args.suite, args.grid, args.seed, {}, args.report)


def cmd_run(args) -> int:
    sc = load_config(args.config)
    return run_scenario(sc)


def run_scenario(sc: Scenario) -> int:
    """Dispatch a Scenario; exit code contract as for the CLI."""
    if sc.kind == "rattleback":
        tr = rb.integrate(rb.RattlebackState(*sc.ic), sc.h, dt=sc.dt,
                          t_final=sc.t_final, method=sc.method)
        if sc.out:
            write_trajectory_csv(sc.out, tr)
        h_drift = float(np.abs(tr.hamiltonians - tr.hamiltonians[0]).max()
                        / max(abs(tr.hamiltonians[0]), 1e-300))
        print(json.dumps({"kind": sc.kind, "samples": len(tr.times),
                          "H_drift_rel": h_drift}, indent=2))
        return 0
    if sc.kind == "fluid-helicity":
        if not sc.field_spec:
            raise ConfigError("fluid-helicity scenario needs 'field'")
        alpha = parse_field_spec(sc.field_spec, sc.grid)
        print(json.dumps({"kind": sc.kind, "helicity": helicity(alpha)}, indent=2))
        return 0
    if sc.kind == "fluid-euler":
        if not sc.field_spec:
            raise ConfigError("fluid-euler scenario needs 'field'")
        alpha = parse_field_spec(sc.field_spec, sc.grid)
        state, diag = euler_evolve(FluidState(alpha), dt=sc.dt, t_final=sc.t_final)
        if sc.dump_fields:
            f3.io.save(sc.dump_fields, state.alpha)
        print(json.dumps({"kind": sc.kind,
                          "energy_drift": float(abs(diag.energies[-1] - diag.energies[0])),
                          "helicity_drift": float(abs(diag.helicities[-1]
                                                      - diag.helicities[0]))}, indent=2))
        return 0
    if sc.kind == "foliation-gv":
        if not sc.profile:
            raise ConfigError("foliation-gv scenario needs 'profile'")
        grid = f3.Grid(sc.grid)
        profile = _eval_expr_field(sc.profile, grid, "profile")
        scale = _eval_expr_field(sc.scale, grid, "scale") if sc.scale else None
        state = fol.FoliatedState.from_alpha(
            fol.graph_foliation_form(grid, profile, scale))
        doc = {"kind": sc.kind, "gv": fol.godbillon_vey(state),
               "residuals": state.residuals}
        print(json.dumps(doc, indent=2, sort_keys=True))
        if sc.report:
            with open(sc.report, "w") as fh:
                json.dump(doc, fh, indent=2, sort_keys=True)
        return 0
    # verify-all
    return _run_verify("all", sc.grid, sc.seed, sc.tolerances, sc.report)


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-lab",
        description="Lie-Poisson and foliation-invariant verification toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rat = sub.add_parser("rattleback", help="rattleback spinning-top engine")
    rat_sub = p_rat.add_subparsers(dest="subcommand", required=True)
    p_sim = rat_sub.add_parser("simulate", help="integrate and write t,p,r,s,H,C")
    p_sim.add_argument("--h", type=float, required=True, help="shape parameter")
    p_sim.add_argument("--ic", required=True, help="initial p,r,s")
    p_sim.add_argument("--dt", type=float, default=1e-3)
    p_sim.add_argument("--t-final", type=float, default=100.0)
    p_sim.add_argument("--method", choices=("rk4", "rk45"), default="rk4")
    p_sim.add_argument("--stride", type=int, default=1, help="record every k-th step")
    p_sim.add_argument("--out", help="CSV output path")
    p_sim.set_defaults(func=cmd_rattleback_simulate)
    p_ver = rat_sub.add_parser("verify", help="run the rattleback invariant suite")
    p_ver.add_argument("--h", type=float, default=-2.0)
    p_ver.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_ver.add_argument("--report", help="also write the full JSON report here")
    p_ver.set_defaults(func=cmd_rattleback_verify)

    p_fluid = sub.add_parser("fluid", help="spectral torus fluid engine")
    fl_sub = p_fluid.add_subparsers(dest="subcommand", required=True)
    p_hel = fl_sub.add_parser("helicity", help="helicity of a 1-form field")
    p_hel.add_argument("--field", required=True,
                       help="'ex,ey,ez' component expressions or an .f3rm path")
    p_hel.add_argument("--grid", type=int, default=32)
    p_hel.set_defaults(func=cmd_fluid_helicity)
    p_evo = fl_sub.add_parser("evolve", help="ideal Euler evolution")
    p_evo.add_argument("--field", required=True)
    p_evo.add_argument("--grid", type=int, default=32)
    p_evo.add_argument("--dt", type=float, default=1e-3)
    p_evo.add_argument("--t-final", type=float, default=0.5)
    p_evo.add_argument("--out", help="diagnostics CSV path")
    p_evo.add_argument("--dump-fields", help="write the final state container here")
    p_evo.set_defaults(func=cmd_fluid_evolve)
    p_gv = fl_sub.add_parser("gv", help="Godbillon-Vey of a graph foliation")
    p_gv.add_argument("--preset", default="graph", choices=("graph",))
    p_gv.add_argument("--profile", required=True, help="slope a(z), expression in z")
    p_gv.add_argument("--scale", help="nonvanishing multiplier expression")
    p_gv.add_argument("--grid", type=int, default=32)
    p_gv.add_argument("--report", help="JSON report path")
    p_gv.set_defaults(func=cmd_fluid_gv)
    p_fv = fl_sub.add_parser("verify", help="run a fluid suite")
    p_fv.add_argument("--suite", choices=("lie-poisson", "godbillon-vey"),
                      required=True)
    p_fv.add_argument("--grid", type=int, default=32)
    p_fv.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_fv.add_argument("--report", help="JSON report path")
    p_fv.set_defaults(func=cmd_fluid_verify)

    p_all = sub.add_parser("verify", help="run verification suites")
    p_all.add_argument("--suite", default="all",
                       choices=("all", "rattleback", "forms", "lie-poisson",
                                "godbillon-vey"))
    p_all.add_argument("--grid", type=int, default=32)
    p_all.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_all.add_argument("--report", help="JSON report path")
    p_all.set_defaults(func=cmd_verify)

    p_run = sub.add_parser("run", help="execute a JSON scenario file")
    p_run.add_argument("--config", required=True)
    p_run.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except BlowUpError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        code = 1
    except CasimirLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
