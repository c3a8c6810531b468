"""The four manufactured advection problems and their derived constants.

Every field callable is vectorized: it accepts points of shape (..., 2) and
returns values of shape (...) for scalars or (..., 2) for vectors.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ScalarField = Callable[[np.ndarray], np.ndarray]
VectorField = Callable[[np.ndarray], np.ndarray]

LABELS = ("example1", "example2", "example3", "example4")

#: norms a rate can be requested for
NORMS = ("l2_domain", "l2_gamma_plus", "h1_semi", "l2_gamma0")


@dataclass(frozen=True)
class Problem:
    """Advection data with a known exact transport solution."""

    label: str
    beta: VectorField
    mu: ScalarField
    f: ScalarField
    u_exact: ScalarField
    grad_u_exact: VectorField
    div_beta: ScalarField | None = None
    params: dict = field(default_factory=dict)


def _check_s(label: str, s: float) -> float:
    s = float(s)
    if s <= 0:
        raise ValueError(f"{label} requires s > 0, got {s}")
    return s


def _example1(s: float) -> Problem:
    s = _check_s("example1", s)

    def beta(p):
        return np.stack([p[..., 0], np.ones_like(p[..., 1])], axis=-1)

    def u(p):
        return (1.0 + p[..., 0] ** s) * p[..., 1]

    def grad_u(p):
        x1, x2 = p[..., 0], p[..., 1]
        return np.stack([s * x1 ** (s - 1.0) * x2, 1.0 + x1**s], axis=-1)

    def f(p):
        x1, x2 = p[..., 0], p[..., 1]
        return (s + 1.0) * x1**s * x2 + x1**s + x2 + 1.0

    return Problem(
        label="example1",
        beta=beta,
        mu=lambda p: np.ones_like(p[..., 0]),
        f=f,
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=lambda p: np.ones_like(p[..., 0]),
        params={"s": s},
    )


def _example2() -> Problem:
    def beta(p):
        return np.stack([np.ones_like(p[..., 0]), np.zeros_like(p[..., 1])], axis=-1)

    return Problem(
        label="example2",
        beta=beta,
        mu=lambda p: np.ones_like(p[..., 0]),
        f=lambda p: p[..., 0] * p[..., 1] + p[..., 1],
        u_exact=lambda p: p[..., 0] * p[..., 1],
        grad_u_exact=lambda p: np.stack([p[..., 1], p[..., 0]], axis=-1),
        div_beta=lambda p: np.zeros_like(p[..., 0]),
    )


def _example3() -> Problem:
    # The published source term does not reproduce u = x2*sin(4*x1); f is
    # synthesized from u so the manufactured-solution residual vanishes.
    def beta(p):
        return np.stack([np.ones_like(p[..., 0]), np.ones_like(p[..., 1])], axis=-1)

    def u(p):
        return p[..., 1] * np.sin(4.0 * p[..., 0])

    def grad_u(p):
        x1, x2 = p[..., 0], p[..., 1]
        return np.stack([4.0 * x2 * np.cos(4.0 * x1), np.sin(4.0 * x1)], axis=-1)

    def f(p):
        x1, x2 = p[..., 0], p[..., 1]
        return (1.0 + x2) * np.sin(4.0 * x1) + 4.0 * x2 * np.cos(4.0 * x1)

    return Problem(
        label="example3",
        beta=beta,
        mu=lambda p: np.ones_like(p[..., 0]),
        f=f,
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=lambda p: np.zeros_like(p[..., 0]),
    )


def _example4(s: float) -> Problem:
    s = _check_s("example4", s)

    def beta(p):
        x1, x2 = p[..., 0], p[..., 1]
        return np.stack([1.0 - x1 + (1.0 - x2) ** s, 1.0 + x2], axis=-1)

    def u(p):
        return (np.exp(p[..., 0]) - 1.0) * np.sin(p[..., 1])

    def grad_u(p):
        x1, x2 = p[..., 0], p[..., 1]
        return np.stack([np.exp(x1) * np.sin(x2), (np.exp(x1) - 1.0) * np.cos(x2)], axis=-1)

    def f(p):
        return np.sum(beta(p) * grad_u(p), axis=-1) + u(p)

    return Problem(
        label="example4",
        beta=beta,
        mu=lambda p: np.ones_like(p[..., 0]),
        f=f,
        u_exact=u,
        grad_u_exact=grad_u,
        div_beta=lambda p: np.zeros_like(p[..., 0]),
        params={"s": s},
    )


def registry_get(label: str, s: float | None = None) -> Problem:
    """Look up a registry problem; example1 and example4 take the exponent s."""
    if label == "example1":
        return _example1(0.51 if s is None else s)
    if label == "example2":
        if s is not None:
            raise ValueError("example2 takes no parameter s")
        return _example2()
    if label == "example3":
        if s is not None:
            raise ValueError("example3 takes no parameter s")
        return _example3()
    if label == "example4":
        return _example4(2.0 if s is None else s)
    raise KeyError(f"unknown example {label!r}; known: {', '.join(LABELS)}")


def coercivity_constant(problem: Problem, n_samples: int = 64) -> float:
    """Sampled minimum of mu - div(beta)/2 over the domain; must be positive.

    Uses the closed-form divergence when the problem carries one, otherwise
    central differences with step 1e-6.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    # cell centers keep fractional-power fields away from the boundary
    side = (np.arange(n_samples) + 0.5) / n_samples
    xx, yy = np.meshgrid(side, side, indexing="xy")
    pts = np.stack([xx, yy], axis=-1)
    if problem.div_beta is not None:
        div = problem.div_beta(pts)
    else:
        step = 1e-6
        ex = np.array([step, 0.0])
        ey = np.array([0.0, step])
        div = (problem.beta(pts + ex)[..., 0] - problem.beta(pts - ex)[..., 0]) / (2 * step) + (
            problem.beta(pts + ey)[..., 1] - problem.beta(pts - ey)[..., 1]
        ) / (2 * step)
    mu0 = float(np.min(problem.mu(pts) - 0.5 * div))
    if mu0 <= 0:
        raise ValueError(f"{problem.label}: sampled mu - div(beta)/2 minimum {mu0} is not positive")
    return mu0


def alpha_of_s(s: float) -> float:
    """Largest admissible weight exponent for the degenerate outflow field."""
    s = float(s)
    if s <= 0:
        raise ValueError(f"s must be positive, got {s}")
    return 1.0 / s


def expected_rate(label: str, norm: str, s: float | None = None) -> float | None:
    """Theoretical convergence exponent for a registry problem and norm.

    Returns None when no rate is guaranteed (example1 with s <= 1/2).
    Raises ValueError for the characteristic-boundary norm of examples 3
    and 4, whose characteristic set has measure zero.
    """
    if norm not in NORMS:
        raise ValueError(f"unknown norm {norm!r}; known: {', '.join(NORMS)}")
    if label == "example1":
        s_val = 0.51 if s is None else float(s)
        if s_val <= 0.5:
            return None
        return {"l2_domain": 0.5, "l2_gamma_plus": 0.5, "h1_semi": 0.0, "l2_gamma0": 0.25}[norm]
    if label == "example2":
        return {"l2_domain": 0.75, "l2_gamma_plus": 0.75, "h1_semi": 0.25, "l2_gamma0": 0.5}[norm]
    if label == "example3":
        if norm == "l2_gamma0":
            raise ValueError("example3 has no characteristic boundary; no rate is defined there")
        return {"l2_domain": 1.0, "l2_gamma_plus": 1.0, "h1_semi": 0.5}[norm]
    if label == "example4":
        if norm == "l2_gamma0":
            raise ValueError("example4 has no characteristic boundary; no rate is defined there")
        alpha = alpha_of_s(2.0 if s is None else s)
        if norm == "h1_semi":
            return min(0.5, 0.25 + alpha / 4.0)
        return min(1.0, (3.0 + alpha) / 4.0)
    raise KeyError(f"unknown example {label!r}; known: {', '.join(LABELS)}")
