"""Epsilon sweeps, log-log rate fits, and the alpha study.

A sweep solves the regularized problem on one mesh for eps = base^-k over a
k range, records the error norms per eps, and fits ln(error) against
ln(eps) by ordinary least squares inside a fit window.
"""

import concurrent.futures
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import ErrorRecord, compute_error_record
from .fem import (
    assemble_from_blocks,
    dirichlet_mask,
    element_blocks_for,
    field_from_solution,
    peclet_guard,
    triangle_rule,
)
from .mesh import build_unit_square_mesh, classify_boundary
from .problems import alpha_of_s, expected_rate, registry_get
from .solvers import SolverError, solve_direct, solve_iterative

#: named resolution/grid presets; "paper" mirrors the published experiment scale
PRESETS = {
    "desk": dict(n_cells=256, k_min=4, k_max=11, fit_lo=6, fit_hi=11),
    "paper": dict(n_cells=512, k_min=0, k_max=14, fit_lo=8, fit_hi=14),
}

FIT_NORMS = ("l2_domain", "l2_gamma_plus", "h1_semi", "l2_gamma0")


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce one sweep."""

    label: str
    s: float | None = None
    n_cells: int = 256
    base: float = 1.6
    k_min: int = 4
    k_max: int = 11
    fit_lo: int | None = 6
    fit_hi: int | None = 11
    solver: str = "direct"
    tol: float = 1e-10
    edge_order: int = 3
    jobs: int = 1

    def validate(self) -> None:
        if self.base <= 1:
            raise ValueError(f"base must exceed 1, got {self.base}")
        if self.n_cells < 1:
            raise ValueError("n_cells must be positive")
        if self.k_min > self.k_max:
            raise ValueError(f"empty k range [{self.k_min}, {self.k_max}]")
        if self.solver not in ("direct", "gmres"):
            raise ValueError(f"unknown solver {self.solver!r}")
        if (self.fit_lo is None) != (self.fit_hi is None):
            raise ValueError("fit_lo and fit_hi must be given together")
        if self.fit_lo is not None:
            if not self.k_min <= self.fit_lo <= self.fit_hi <= self.k_max:
                raise ValueError(
                    f"fit window [{self.fit_lo}, {self.fit_hi}] must lie inside "
                    f"k range [{self.k_min}, {self.k_max}]"
                )
            if self.fit_hi - self.fit_lo < 1:
                raise ValueError("fit window needs at least 2 points")

    @property
    def ks(self) -> list[int]:
        return list(range(self.k_min, self.k_max + 1))

    def epsilon(self, k: int) -> float:
        return self.base ** (-k)


def config_from_preset(label: str, preset: str = "desk", **overrides) -> SweepConfig:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; known: {', '.join(PRESETS)}")
    merged = {**PRESETS[preset], **{k: v for k, v in overrides.items() if v is not None}}
    cfg = SweepConfig(label=label, **merged)
    cfg.validate()
    return cfg


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    ks: list[int]
    records: list[ErrorRecord]
    warnings: list[str] = field(default_factory=list)

    def fit(self, norm: str, window: tuple[int, int] | None = None) -> "RateFit":
        if window is None:
            if self.config.fit_lo is None:
                raise ValueError("sweep config has no fit window")
            window = (self.config.fit_lo, self.config.fit_hi)
        return fit_rate(self.records, norm, window=window, ks=self.ks)

    def available_norms(self) -> list[str]:
        names = []
        for name in FIT_NORMS:
            if all(getattr(r, name) is not None for r in self.records):
                names.append(name)
        return names


def run_sweep(config: SweepConfig) -> SweepResult:
    """Solve one problem across the epsilon grid and record the error norms.

    Records come back in descending epsilon order.  A solver failure aborts
    the sweep, naming the offending exponent k.
    """
    config.validate()
    problem = registry_get(config.label, config.s)
    mesh = build_unit_square_mesh(config.n_cells)
    tags = classify_boundary(mesh, problem.beta)
    dmask = dirichlet_mask(mesh, tags)
    rule = triangle_rule(5)
    blocks = element_blocks_for(mesh, problem.beta, problem.mu, problem.f, rule)

    def solve_one(k: int) -> ErrorRecord:
        eps = config.epsilon(k)
        system = assemble_from_blocks(mesh, blocks, eps, dmask)
        try:
            if config.solver == "direct":
                report = solve_direct(system)
            else:
                report = solve_iterative(system, tol=config.tol)
                if not report.converged:
                    raise SolverError(
                        f"gmres stalled at residual {report.relative_residual:.3e}"
                    )
        except SolverError as exc:
            raise SolverError(f"solve failed at k={k} (eps={eps:.6g}): {exc}") from exc
        fld = field_from_solution(mesh, system, report.solution)
        return compute_error_record(
            fld,
            problem,
            eps,
            residual=report.relative_residual,
            peclet=peclet_guard(mesh, problem, eps),
            tags=tags,
            rule=rule,
            edge_order=config.edge_order,
        )

    ks = config.ks
    if config.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(solve_one, ks))
    else:
        records = [solve_one(k) for k in ks]

    warnings = [
        f"k={k}: element Peclet {rec.peclet:.3g} exceeds 1; plain Galerkin may oscillate"
        for k, rec in zip(ks, records)
        if rec.peclet > 1.0
    ]
    return SweepResult(config=config, ks=ks, records=records, warnings=warnings)


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of ln(error) vs ln(eps) inside the fit window."""

    norm: str
    rate: float
    intercept: float
    r_squared: float
    n_points: int


def fit_rate(
    records: Sequence[ErrorRecord],
    norm: str,
    window: tuple[int, int] | None = None,
    ks: Sequence[int] | None = None,
) -> RateFit:
    """Fit the convergence rate of one norm.

    window bounds are inclusive exponents k; ks aligns records with their
    exponents (defaults to 0..len-1).  Only strictly positive in-window
    errors enter the fit; fewer than two is an error.
    """
    if norm not in FIT_NORMS:
        raise ValueError(f"unknown norm {norm!r}")
    ks = list(range(len(records))) if ks is None else list(ks)
    if len(ks) != len(records):
        raise ValueError("ks and records must align")
    eps, errs = [], []
    for k, rec in zip(ks, records):
        if window is not None and not window[0] <= k <= window[1]:
            continue
        value = getattr(rec, norm)
        if value is None:
            raise ValueError(f"norm {norm} is absent from the sweep records")
        if value <= 0.0:
            raise ValueError(f"norm {norm} is not positive at k={k}; cannot fit a log-log rate")
        eps.append(rec.epsilon)
        errs.append(value)
    if len(errs) < 2:
        raise ValueError(f"need at least 2 in-window points to fit, have {len(errs)}")
    x = np.log(np.asarray(eps))
    y = np.log(np.asarray(errs))
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RateFit(norm=norm, rate=float(slope), intercept=float(intercept), r_squared=r2, n_points=len(errs))


@dataclass(frozen=True)
class AlphaRow:
    s: float
    alpha: float
    rate: float | None
    expected: float
    r_squared: float | None
    error: str | None = None


DEFAULT_ALPHA_S = (4.0, 2.0, 4.0 / 3.0, 1.0, 0.8)


def alpha_study(s_list: Sequence[float], template: SweepConfig) -> list[AlphaRow]:
    """Fitted L2-domain rate vs alpha = 1/s for the degenerate-outflow family.

    Rows failing to sweep or fit are kept with the failure message so a
    partial table still comes back.
    """
    rows = []
    for s in s_list:
        alpha = alpha_of_s(s)
        expected = min(1.0, (3.0 + alpha) / 4.0)
        cfg = replace(template, label="example4", s=float(s))
        try:
            result = run_sweep(cfg)
            fit = result.fit("l2_domain")
            rows.append(AlphaRow(float(s), alpha, fit.rate, expected, fit.r_squared))
        except (SolverError, ValueError) as exc:
            rows.append(AlphaRow(float(s), alpha, None, expected, None, error=str(exc)))
    return rows


def _fmt(value, pattern: str = ".12g") -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return format(value, pattern)


def records_csv(result: SweepResult) -> str:
    """Fixed-schema per-epsilon CSV; absent norms leave empty cells."""
    lines = ["k,eps,l2_domain,l2_gamma_plus,h1_semi,l2_gamma0,residual,peclet"]
    for k, r in zip(result.ks, result.records):
        cells = [
            str(k),
            _fmt(r.epsilon),
            _fmt(r.l2_domain),
            _fmt(r.l2_gamma_plus),
            _fmt(r.h1_semi),
            _fmt(r.l2_gamma0),
            _fmt(r.residual, ".6e"),
            _fmt(r.peclet),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def fits_csv(result: SweepResult) -> str:
    """Fit summary for every norm present in the sweep."""
    lines = ["norm,rate,intercept,r_squared,expected_rate"]
    for norm in result.available_norms():
        fit = result.fit(norm)
        try:
            expected = expected_rate(result.config.label, norm, result.config.s)
        except ValueError:
            expected = None
        lines.append(
            f"{norm},{_fmt(fit.rate)},{_fmt(fit.intercept)},{_fmt(fit.r_squared)},{_fmt(expected)}"
        )
    return "\n".join(lines) + "\n"


def alpha_csv(rows: Sequence[AlphaRow]) -> str:
    lines = ["s,alpha,rate,expected_rate,r_squared,status"]
    for row in rows:
        status = "ok" if row.error is None else "failed: " + row.error.replace(",", ";")
        lines.append(
            f"{_fmt(row.s)},{_fmt(row.alpha)},{_fmt(row.rate)},"
            f"{_fmt(row.expected)},{_fmt(row.r_squared)},{status}"
        )
    return "\n".join(lines) + "\n"
