"""Command-line driver.

Exit codes: 0 ok, 2 configuration error, 3 invalid model, 4 solver failure,
5 analysis failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import plotting
from .basis import OptimizationError, make_basis
from .eigensolver import EigensolverError
from .field import base_model, scan_field, solve, uniform_grid
from .hamiltonian import assemble, dump_matrix
from .model import DoubleWellParams, ModelError, make_model
from .perturbation import (AnalysisError, curvature_grid, curvature_oracle, find_avoided_crossing,
                           response_coefficients, response_model)
from .report import write_columns, write_report, write_wavefunctions
from .scan import convergence_study
from .wavefunction import PositionGrid, eigenstate_on_grid, position_matrix, unconverged_states

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_SOLVER, EXIT_ANALYSIS = 0, 2, 3, 4, 5
COMMANDS = ("spectrum", "scan", "wavefunction", "response", "repulsion", "converge")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    lambdas: tuple | None = None
    alpha: float | None = None
    beta: float | None = None
    p: float = 0.0
    mass: float = 1.0
    hbar: float = 1.0
    n_basis: int = 50
    pivot: str = "half"
    p_min: float = 0.0
    p_max: float = 1.0
    p_step: float = 0.01
    q_min: float = -5.0
    q_max: float = 5.0
    q_points: int = 1001
    fit_window: float = 0.6
    fit_step: float = 0.01
    levels: int | None = None
    bracket: tuple | None = None
    window: float = 0.05
    n_list: tuple = (10, 20, 30, 40)
    output: str | None = None
    threads: int | None = None
    plot: bool = False
    dump_matrix: str | None = None

    def system(self):
        if self.lambdas is not None:
            return make_model(self.lambdas, self.mass, self.hbar)
        return DoubleWellParams(self.alpha, self.beta, 0.0)


_ALIASES = {"n": "n_basis"}
_FIELDS = {f.name: f for f in fields(RunConfig)}


def _coerce(name, value):
    if value is None:
        return None
    try:
        if name in ("lambdas", "bracket", "n_list"):
            conv = int if name == "n_list" else float
            return tuple(conv(v) for v in value)
        kind = _FIELDS[name].type
        if "int" in kind and "float" not in kind:
            return int(value)
        if "float" in kind:
            return float(value)
        if kind == "bool":
            return bool(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{name}': cannot use value {value!r}") from exc


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"field 'command': unknown command {cfg.command!r}")
    has_dw = cfg.alpha is not None or cfg.beta is not None
    if cfg.lambdas is not None and has_dw:
        raise ConfigError("give either 'lambdas' or 'alpha'/'beta', not both")
    if cfg.lambdas is None and not (cfg.alpha is not None and cfg.beta is not None):
        raise ConfigError("no model: give 'lambdas' or both 'alpha' and 'beta'")
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        vals = v if isinstance(v, tuple) else (v,)
        for x in vals:
            if isinstance(x, float) and not math.isfinite(x):
                raise ConfigError(f"field '{f.name}': value must be finite")
    if cfg.n_basis < 2:
        raise ConfigError("field 'n_basis': need at least 2 basis functions")
    if cfg.bracket is not None and len(cfg.bracket) != 2:
        raise ConfigError("field 'bracket': need two values")
    return cfg


def parse_config(file=None, flags: dict | None = None) -> RunConfig:
    """Merge a JSON config file with flag values; flags win over the file."""
    values: dict = {}
    if file is not None:
        try:
            text = Path(file).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {file}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{file}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{file}: top level must be an object")
        for key, value in raw.items():
            name = _ALIASES.get(key, key)
            if name not in _FIELDS:
                raise ConfigError(f"{file}: unknown field '{key}'")
            values[name] = _coerce(name, value)
    for key, value in (flags or {}).items():
        if value is not None:
            name = _ALIASES.get(key, key)
            values[name] = _coerce(name, value)
    if "command" not in values:
        raise ConfigError("field 'command': missing")
    return _validate(RunConfig(**values))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model")
    g.add_argument("--alpha", type=float, help="quadratic coefficient of the double well (< 0)")
    g.add_argument("--beta", type=float, help="quartic coefficient of the double well (> 0)")
    g.add_argument("--lambdas", type=float, nargs="+", help="general coefficients lambda_0 .. lambda_I")
    g.add_argument("--p", type=float, help="external field (default 0)")
    g.add_argument("--mass", type=float)
    g.add_argument("--hbar", type=float)
    b = common.add_argument_group("basis and run")
    b.add_argument("--n", dest="n_basis", type=int, help="basis size N (default 50)")
    b.add_argument("--pivot", help="pivot level rule: half, zero or an integer (default half)")
    b.add_argument("--config", help="JSON config file; flags override its values")
    b.add_argument("-o", "--output", help="output file")
    b.add_argument("--threads", type=int, help="worker threads for field sweeps "
                   "(default: $ANHARM_THREADS or all cores)")
    b.add_argument("--plot", action="store_true", default=None,
                   help="also render a PNG figure next to the output")
    s = common.add_argument_group("grids")
    s.add_argument("--p-min", type=float)
    s.add_argument("--p-max", type=float)
    s.add_argument("--p-step", type=float)
    s.add_argument("--q-min", type=float)
    s.add_argument("--q-max", type=float)
    s.add_argument("--q-points", type=int)
    s.add_argument("--levels", type=int, help="number of levels (repulsion: index of the lower level)")

    parser = argparse.ArgumentParser(
        prog="anharm",
        description="Spectra of polynomial oscillators in a linear field.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="exit codes: 0 ok, 2 configuration error, 3 invalid model, "
               "4 solver failure, 5 analysis failure")
    sub = parser.add_subparsers(dest="command", metavar="command")
    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues at one field value")
    p.add_argument("--dump-matrix", help="write the Hamiltonian matrix as plain text")
    sub.add_parser("scan", parents=[common], help="eigenvalue curves over a field grid")
    sub.add_parser("wavefunction", parents=[common], help="position-space eigenstates")
    p = sub.add_parser("response", parents=[common], help="ground-state field response analysis")
    p.add_argument("--fit-window", type=float, help="fit a on p in [0, w] (default 0.6)")
    p.add_argument("--fit-step", type=float)
    p = sub.add_parser("repulsion", parents=[common], help="avoided crossing analysis")
    p.add_argument("--bracket", type=float, nargs=2, help="field interval holding the gap minimum")
    p.add_argument("--window", type=float, help="half width of the local-model comparison (default 0.05)")
    p = sub.add_parser("converge", parents=[common], help="convergence table over basis sizes")
    p.add_argument("--n-list", type=int, nargs="+")
    p.add_argument("--fit-window", type=float)
    p.add_argument("--fit-step", type=float)
    return parser


def _out(cfg: RunConfig, default: str, suffix: str = "") -> Path:
    path = Path(cfg.output or default)
    return path.with_name(path.stem + suffix) if suffix else path


def _run_spectrum(cfg: RunConfig):
    base = base_model(cfg.system(), cfg.mass, cfg.hbar)
    basis = make_basis(base, cfg.n_basis, cfg.pivot)
    model = base.with_field(cfg.p)
    matrix = assemble(model, basis)
    if cfg.dump_matrix:
        dump_matrix(matrix, cfg.dump_matrix)
    res = solve(model, basis)
    k = min(cfg.levels or 5, cfg.n_basis)
    print(f"N = {cfg.n_basis}  t = {basis.pivot}  r0^2 = {basis.r0_squared:.6f}")
    for n in range(k):
        print(f"E_{n} = {res.eigenvalues[n]:.12f}")
    print(f"|Q01| = {position_matrix(res, 2).q01_abs:.9f}")
    bad = [n for n in unconverged_states(res) if n < k]
    if bad:
        print(f"warning: levels {bad} not converged at N = {cfg.n_basis}", file=sys.stderr)
    if cfg.output:
        values = {"n_basis": cfg.n_basis, "pivot": basis.pivot, "r0": basis.r0,
                  "r0_squared": basis.r0_squared, "p": cfg.p}
        values.update({f"E{n}": res.eigenvalues[n] for n in range(k)})
        write_report(cfg.output, values)


def _run_scan(cfg: RunConfig):
    grid = uniform_grid(cfg.p_min, cfg.p_max, cfg.p_step)
    scan = scan_field(cfg.system(), grid, cfg.n_basis, cfg.levels or 2, cfg.pivot,
                      cfg.threads, m=cfg.mass, hbar=cfg.hbar)
    path = _out(cfg, "scan.csv")
    scan.to_csv(path)
    print(f"r0^2 = {scan.basis.r0_squared:.6f}  points = {len(grid)}  -> {path}")
    for n in range(scan.levels):
        print(f"E_{n}: [{scan.energies[n].min():.9f}, {scan.energies[n].max():.9f}]")
    if cfg.plot:
        plotting.plot_levels(scan.p_values, scan.energies, path.with_suffix(".png"))


def _run_wavefunction(cfg: RunConfig):
    base = base_model(cfg.system(), cfg.mass, cfg.hbar)
    basis = make_basis(base, cfg.n_basis, cfg.pivot)
    res = solve(base.with_field(cfg.p), basis)
    grid = PositionGrid(cfg.q_min, cfg.q_max, cfg.q_points)
    k = cfg.levels or 2
    psi = eigenstate_on_grid(res, list(range(k)), grid)
    path = _out(cfg, "wavefunction.csv")
    write_wavefunctions(path, grid.q, psi)
    print(f"p = {cfg.p}  r0^2 = {basis.r0_squared:.6f}  states = {k}  -> {path}")
    if cfg.plot:
        plotting.plot_wavefunctions(grid.q, psi, path.with_suffix(".png"), title=f"p = {cfg.p}")


def _run_response(cfg: RunConfig):
    system = cfg.system()
    base = base_model(system, cfg.mass, cfg.hbar)
    basis = make_basis(base, cfg.n_basis, cfg.pivot)
    res = solve(base, basis)
    window = scan_field(base, uniform_grid(0.0, cfg.fit_window, cfg.fit_step), cfg.n_basis, 1,
                        cfg.pivot, cfg.threads)
    coef = response_coefficients(res, window)
    fd = scan_field(base, curvature_grid(), cfg.n_basis, 1, cfg.pivot, cfg.threads)
    c_fd = curvature_oracle(fd)
    grid = uniform_grid(cfg.p_min, cfg.p_max, cfg.p_step)
    data = scan_field(base, grid, cfg.n_basis, 1, cfg.pivot, cfg.threads)
    e0 = data.energies[0]
    quad = coef.e0_at_zero + coef.c1 * grid ** 2
    fit = response_model(coef.e0_at_zero, coef.a, coef.omega, grid)
    a_pt = -coef.q01_abs
    pt = response_model(coef.e0_at_zero, a_pt, coef.c1 / a_pt, grid)
    report = _out(cfg, "response.txt")
    write_report(report, {
        "n_basis": cfg.n_basis, "pivot": basis.pivot, "r0_squared": basis.r0_squared,
        "E0": coef.e0_at_zero, "E1": res.eigenvalues[1],
        "c1": coef.c1, "c1_single_term": coef.c1_single_term, "c1_curvature": c_fd,
        "q01_abs": coef.q01_abs, "degenerate_slope": a_pt,
        "fit_window": cfg.fit_window, "a": coef.a, "omega": coef.omega,
        "omega_pt": coef.c1 / a_pt,
    })
    resid = report.with_name(report.stem + "_residuals.csv")
    write_columns(resid, {"p": grid, "E0": e0, "quadratic": quad, "tanh_fit": fit, "tanh_pt": pt,
                          "res_quadratic": e0 - quad, "res_tanh_fit": e0 - fit,
                          "res_tanh_pt": e0 - pt})
    print(f"E_0 = {coef.e0_at_zero:.12f}")
    print(f"c1 = {coef.c1:.9f}  (single term {coef.c1_single_term:.9f}, curvature {c_fd:.9f})")
    print(f"|Q01| = {coef.q01_abs:.9f}  a = {coef.a:.9f}  omega = {coef.omega:.9f}")
    print(f"-> {report}, {resid}")
    if cfg.plot:
        plotting.plot_response(grid, e0, quad, fit, report.with_suffix(".png"))


def _run_repulsion(cfg: RunConfig):
    level = 1 if cfg.levels is None else cfg.levels
    bracket = cfg.bracket or (cfg.p_min, cfg.p_max)
    ca = find_avoided_crossing(cfg.system(), cfg.n_basis, level, bracket, cfg.pivot,
                               m=cfg.mass, hbar=cfg.hbar)
    dp = np.linspace(-cfg.window, cfg.window, 101)
    data = None
    if 4 * (level + 2) <= cfg.n_basis:
        data = scan_field(cfg.system(), ca.p1 + dp, cfg.n_basis, level + 2, cfg.pivot,
                          cfg.threads, m=cfg.mass, hbar=cfg.hbar)
    report = _out(cfg, "repulsion.txt")
    write_report(report, {
        "n_basis": cfg.n_basis, "level_lo": ca.level_lo, "level_hi": ca.level_hi,
        "p1": ca.p1, "gap_min": ca.gap_min, "E_lo": ca.models.e_lo, "E_hi": ca.models.e_hi,
        "q_lo": ca.q_lo, "q_hi": ca.q_hi, "c2": ca.c2,
    })
    print(f"p1 = {ca.p1:.7f}  gap = {ca.gap_min:.9f}")
    print(f"Q{level}{level} = {ca.q_lo:.6f}  Q{level + 1}{level + 1} = {ca.q_hi:.6f}  c2 = {ca.c2:.5f}")
    if data is not None:
        lo, hi = ca.models.lower(dp), ca.models.upper(dp)
        local = report.with_name(report.stem + "_local.csv")
        write_columns(local, {"dp": dp, "p": ca.p1 + dp, "E_lo": data.energies[level],
                              "E_hi": data.energies[level + 1], "model_lo": lo, "model_hi": hi,
                              "res_lo": data.energies[level] - lo,
                              "res_hi": data.energies[level + 1] - hi})
        print(f"-> {report}, {local}")
        if cfg.plot:
            plotting.plot_repulsion(ca.p1 + dp, data.energies[level], data.energies[level + 1],
                                    lo, hi, report.with_suffix(".png"))
    else:
        print(f"-> {report}")


def _run_converge(cfg: RunConfig):
    table = convergence_study(cfg.system(), cfg.n_list, cfg.fit_window, cfg.fit_step,
                              cfg.pivot, cfg.threads)
    path = _out(cfg, "convergence.csv")
    table.to_csv(path)
    print(f"{'N':>4} {'r0^2':>6} {'E0':>16} {'E1':>16} {'c1':>16} {'c1 single':>16} {'a':>16}")
    for r in table.rows:
        print(f"{r.n_basis:4d} {r.r0_squared:6.2f} {r.e0:16.12f} {r.e1:16.12f} "
              f"{r.c1:16.12f} {r.c1_single_term:16.12f} {r.a:16.12f}")
    print(f"-> {path}")


RUNNERS = {"spectrum": _run_spectrum, "scan": _run_scan, "wavefunction": _run_wavefunction,
           "response": _run_response, "repulsion": _run_repulsion, "converge": _run_converge}


def run(cfg: RunConfig) -> int:
    try:
        RUNNERS[cfg.command](cfg)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (EigensolverError, OptimizationError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except AnalysisError as exc:
        print(f"analysis failure: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    flags = {k: v for k, v in vars(args).items() if k != "config"}
    try:
        cfg = parse_config(args.config, flags)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg.system()
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
