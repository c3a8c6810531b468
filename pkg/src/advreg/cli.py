"""Command-line front end: solve, sweep, and alpha-study subcommands.

Exit codes: 0 success, 2 bad flags or configuration, 3 solver failure.
Sweep outputs (records CSV, fit CSV, optional SVGs) land in an output
directory together with a manifest.json that reproduces the run.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .backend import BACKEND
from .errors import compute_error_record
from .fem import assemble, field_from_solution, peclet_guard
from .mesh import build_unit_square_mesh, classify_boundary, dump_mesh
from .problems import expected_rate, registry_get
from .solvers import SolverError, solve_direct, solve_iterative
from .svgplot import alpha_svg, loglog_svg
from .sweep import (
    DEFAULT_ALPHA_S,
    SweepConfig,
    alpha_csv,
    alpha_study,
    config_from_preset,
    fits_csv,
    records_csv,
    run_sweep,
)


class CliError(Exception):
    pass


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("ADVREG_OUTDIR") or "advreg_out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(out: Path, command: str, config: SweepConfig, outputs, extra=None):
    manifest = {
        "tool": "advreg",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "backend": BACKEND,
        "command": command,
        "config": asdict(config),
        "outputs": sorted(str(p.name) for p in outputs),
    }
    if extra:
        manifest.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _config_from_args(args, label: str) -> SweepConfig:
    if args.from_manifest:
        data = json.loads(Path(args.from_manifest).read_text())
        cfg = SweepConfig(**data["config"])
        cfg.validate()
        args.svg = bool(data.get("svg", args.svg))
        return cfg
    cfg = config_from_preset(
        label,
        preset=args.preset,
        n_cells=args.n_cells,
        k_min=args.k_min,
        k_max=args.k_max,
        fit_lo=args.fit_lo,
        fit_hi=args.fit_hi,
    )
    return SweepConfig(
        label=cfg.label,
        s=getattr(args, "s", None),
        n_cells=cfg.n_cells,
        base=args.base,
        k_min=cfg.k_min,
        k_max=cfg.k_max,
        fit_lo=cfg.fit_lo,
        fit_hi=cfg.fit_hi,
        solver=args.solver,
        tol=args.tol,
        jobs=args.jobs,
    )


def cmd_solve(args) -> int:
    problem = registry_get(args.example, args.s)
    if args.eps <= 0:
        raise CliError(f"--eps must be positive, got {args.eps}")
    mesh = build_unit_square_mesh(args.n_cells)
    tags = classify_boundary(mesh, problem.beta)
    system = assemble(mesh, problem, args.eps, tags=tags)
    if args.solver == "direct":
        report = solve_direct(system)
    else:
        report = solve_iterative(system, tol=args.tol)
        if not report.converged:
            raise SolverError(f"gmres stalled at residual {report.relative_residual:.3e}")
    fld = field_from_solution(mesh, system, report.solution)
    record = compute_error_record(
        fld, problem, args.eps,
        residual=report.relative_residual,
        peclet=peclet_guard(mesh, problem, args.eps),
        tags=tags,
    )
    print(f"{args.example}  eps={args.eps:g}  n_cells={args.n_cells}  solver={args.solver}")
    for name in ("l2_domain", "l2_gamma_plus", "h1_semi", "l2_gamma0"):
        value = getattr(record, name)
        print(f"  {name:14s} = {'absent' if value is None else format(value, '.6e')}")
    print(f"  {'peclet':14s} = {record.peclet:.4g}")
    print(f"  {'residual':14s} = {record.residual:.3e}")
    if record.peclet > 1.0:
        print("warning: element Peclet number exceeds 1", file=sys.stderr)
    if args.dump_mesh:
        with open(args.dump_mesh, "w") as fh:
            dump_mesh(mesh, tags, fh)
    if args.dump_field:
        with open(args.dump_field, "w") as fh:
            for (x, y), c in zip(mesh.vertices, fld.coeffs):
                fh.write(f"{x:.17g} {y:.17g} {c:.17g}\n")
    return 0


def cmd_sweep(args) -> int:
    config = _config_from_args(args, args.example)
    result = run_sweep(config)
    for line in result.warnings:
        print(f"warning: {line}", file=sys.stderr)

    out = _out_dir(args)
    rec_path = out / f"{config.label}_records.csv"
    fit_path = out / f"{config.label}_fits.csv"
    rec_path.write_text(records_csv(result))
    fit_path.write_text(fits_csv(result))
    outputs = [rec_path, fit_path]
    if args.svg:
        lo, hi = config.fit_lo, config.fit_hi
        for norm in result.available_norms():
            fit = result.fit(norm)
            svg = loglog_svg(
                [r.epsilon for r in result.records],
                [getattr(r, norm) for r in result.records],
                title=f"{config.label}: {norm} vs epsilon (fit on k in [{lo}, {hi}])",
                ylabel=norm,
                fit_rate=fit.rate,
                fit_intercept=fit.intercept,
            )
            svg_path = out / f"{config.label}_{norm}.svg"
            svg_path.write_text(svg)
            outputs.append(svg_path)
    _write_manifest(out, "sweep", config, outputs, extra={"svg": bool(args.svg)})

    print(f"{config.label}: n_cells={config.n_cells}, k in [{config.k_min}, {config.k_max}], "
          f"fit on [{config.fit_lo}, {config.fit_hi}]")
    for norm in result.available_norms():
        fit = result.fit(norm)
        try:
            expected = expected_rate(config.label, norm, config.s)
        except ValueError:
            expected = None
        exp_txt = "n/a" if expected is None else f"{expected:.4g}"
        print(f"  {norm:14s} rate = {fit.rate:+.4f}  (expected {exp_txt}, R^2 = {fit.r_squared:.4f})")
    print(f"wrote {rec_path} and {fit_path}")
    return 0


def cmd_alpha_study(args) -> int:
    if args.from_manifest:
        data = json.loads(Path(args.from_manifest).read_text())
        template = SweepConfig(**data["config"])
        s_list = data.get("s_list", list(DEFAULT_ALPHA_S))
        args.svg = bool(data.get("svg", args.svg))
    else:
        template = _config_from_args(args, "example4")
        s_list = args.s_list if args.s_list else list(DEFAULT_ALPHA_S)
    for s in s_list:
        if s <= 0:
            raise CliError(f"--s-list entries must be positive, got {s}")
    template.validate()

    rows = alpha_study(s_list, template)
    out = _out_dir(args)
    table_path = out / "alpha_study.csv"
    table_path.write_text(alpha_csv(rows))
    outputs = [table_path]
    good = [row for row in rows if row.error is None]
    if args.svg and good:
        svg_path = out / "alpha_study.svg"
        svg_path.write_text(
            alpha_svg(
                [row.alpha for row in good],
                [row.rate for row in good],
                title="L2 convergence rate vs alpha",
            )
        )
        outputs.append(svg_path)
    _write_manifest(
        out, "alpha-study", template, outputs,
        extra={"s_list": list(s_list), "svg": bool(args.svg)},
    )

    for row in rows:
        if row.error is None:
            print(f"  s={row.s:g}  alpha={row.alpha:.4g}  rate={row.rate:.4f}  "
                  f"expected={row.expected:.4g}")
        else:
            print(f"  s={row.s:g}  alpha={row.alpha:.4g}  FAILED: {row.error}", file=sys.stderr)
    print(f"wrote {table_path}")
    return 0 if good else 3


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="advreg",
        description="Viscous regularization of stationary advection problems: "
        "solve, epsilon sweeps, and rate studies.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=f"advreg {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_solver(p):
        p.add_argument("--solver", choices=["direct", "gmres"], default="direct",
                       help="linear solver")
        p.add_argument("--tol", type=float, default=1e-10, help="iterative solver tolerance")

    def add_sweep_flags(p):
        p.add_argument("--preset", choices=["desk", "paper"], default="desk",
                       help="resolution/grid preset")
        p.add_argument("--n-cells", type=int, default=None, help="cells per side (preset override)")
        p.add_argument("--k-min", type=int, default=None, help="smallest exponent k (preset override)")
        p.add_argument("--k-max", type=int, default=None, help="largest exponent k (preset override)")
        p.add_argument("--fit-lo", type=int, default=None, help="fit window lower k (preset override)")
        p.add_argument("--fit-hi", type=int, default=None, help="fit window upper k (preset override)")
        p.add_argument("--base", type=float, default=1.6, help="epsilon grid base, eps = base^-k")
        p.add_argument("--jobs", type=int, default=1, help="concurrent epsilon solves")
        p.add_argument("--out", default=None,
                       help="output directory (falls back to $ADVREG_OUTDIR, then ./advreg_out)")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
        p.add_argument("--from-manifest", default=None,
                       help="re-run the configuration stored in a manifest.json")
        add_common_solver(p)

    p_solve = sub.add_parser("solve", help="solve one (example, eps) and print error norms",
                             formatter_class=fmt)
    p_solve.add_argument("--example", required=True, help="registry label, e.g. example2")
    p_solve.add_argument("--s", type=float, default=None, help="exponent for example1/example4")
    p_solve.add_argument("--eps", type=float, default=0.01, help="regularization parameter")
    p_solve.add_argument("--n-cells", type=int, default=64, help="cells per side")
    p_solve.add_argument("--dump-mesh", default=None, help="write a plain-text mesh dump here")
    p_solve.add_argument("--dump-field", default=None, help="write 'x y value' lines here")
    add_common_solver(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run an epsilon sweep and fit convergence rates",
                             formatter_class=fmt)
    p_sweep.add_argument("--example", required=True, help="registry label")
    p_sweep.add_argument("--s", type=float, default=None, help="exponent for example1/example4")
    add_sweep_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_alpha = sub.add_parser("alpha-study", help="rate vs alpha study for the degenerate family",
                             formatter_class=fmt)
    p_alpha.add_argument("--s-list", type=lambda t: [float(v) for v in t.split(",")],
                         default=None, help="comma-separated s values (unset: 4,2,4/3,1,0.8)")
    add_sweep_flags(p_alpha)
    p_alpha.set_defaults(func=cmd_alpha_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, KeyError, FileNotFoundError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
