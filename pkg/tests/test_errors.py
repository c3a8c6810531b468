import numpy as np
import pytest

from advreg.errors import (
    characteristic_error,
    compute_error_record,
    h1_semi_error,
    l2_domain_error,
    weighted_outflow_error,
)
from advreg.fem import DiscreteField, assemble, evaluate_many, field_from_solution
from advreg.mesh import build_unit_square_mesh
from advreg.problems import Problem, registry_get
from advreg.solvers import solve_direct


def zero_field(n=16):
    mesh = build_unit_square_mesh(n)
    return DiscreteField(mesh, np.zeros(mesh.n_vertices))


def test_l2_domain_against_closed_form():
    # u = x1*x2 against the zero field: integral of x^2 y^2 is 1/9
    field = zero_field()
    assert l2_domain_error(field, registry_get("example2")) == pytest.approx(1.0 / 3.0, abs=1e-13)


def test_h1_semi_against_closed_form():
    field = zero_field()
    assert h1_semi_error(field, registry_get("example2")) == pytest.approx(np.sqrt(2.0 / 3.0), abs=1e-13)


def test_weighted_outflow_example2():
    # outflow is the right edge only; integrand x2^2 with unit weight
    field = zero_field()
    assert weighted_outflow_error(field, registry_get("example2")) == pytest.approx(
        np.sqrt(1.0 / 3.0), abs=1e-13
    )


def test_weighted_outflow_constant_one():
    # beta=(1,1): two unit outflow edges with unit weight each
    field = zero_field()
    one = Problem(
        label="one",
        beta=lambda p: np.stack([np.ones_like(p[..., 0]), np.ones_like(p[..., 1])], axis=-1),
        mu=lambda p: np.ones_like(p[..., 0]),
        f=lambda p: np.ones_like(p[..., 0]),
        u_exact=lambda p: np.ones_like(p[..., 0]),
        grad_u_exact=lambda p: np.zeros_like(p),
    )
    assert weighted_outflow_error(field, one) == pytest.approx(np.sqrt(2.0), abs=1e-13)


def test_characteristic_example2():
    # bottom contributes 0, top contributes the integral of x1^2
    field = zero_field()
    assert characteristic_error(field, registry_get("example2")) == pytest.approx(
        np.sqrt(1.0 / 3.0), abs=1e-13
    )


def test_characteristic_example1_left_edge():
    field = zero_field()
    assert characteristic_error(field, registry_get("example1", s=0.51)) == pytest.approx(
        np.sqrt(1.0 / 3.0), abs=1e-12
    )


def test_characteristic_absent_for_example3():
    field = zero_field()
    assert characteristic_error(field, registry_get("example3")) is None


def test_outflow_absent_when_no_outflow_edges():
    # beta = (0.5 - x1, 0): both vertical edges are inflow, the rest characteristic
    field = zero_field()
    pinched = Problem(
        label="pinched",
        beta=lambda p: np.stack([0.5 - p[..., 0], np.zeros_like(p[..., 1])], axis=-1),
        mu=lambda p: np.ones_like(p[..., 0]),
        f=lambda p: (0.5 - p[..., 0]) * (1 - 2 * p[..., 0]) + p[..., 0] * (1 - p[..., 0]),
        u_exact=lambda p: p[..., 0] * (1 - p[..., 0]),
        grad_u_exact=lambda p: np.stack([1 - 2 * p[..., 0], np.zeros_like(p[..., 1])], axis=-1),
    )
    assert weighted_outflow_error(field, pinched) is None


def test_all_norms_vanish_for_affine_interpolant():
    # example2's advection keeps characteristic edges so all four norms exist
    mesh = build_unit_square_mesh(9)
    u = lambda p: 0.5 * p[..., 0]
    affine = Problem(
        label="affine",
        beta=registry_get("example2").beta,
        mu=lambda p: np.ones_like(p[..., 0]),
        f=lambda p: 0.5 + 0.5 * p[..., 0],
        u_exact=u,
        grad_u_exact=lambda p: np.stack([np.full(p.shape[:-1], 0.5), np.zeros_like(p[..., 0])], axis=-1),
    )
    field = DiscreteField(mesh, u(mesh.vertices))
    assert l2_domain_error(field, affine) < 1e-12
    assert h1_semi_error(field, affine) < 1e-12
    assert weighted_outflow_error(field, affine) < 1e-12
    assert characteristic_error(field, affine) < 1e-12


@pytest.mark.parametrize(
    "label,s", [("example1", 0.51), ("example2", None), ("example3", None), ("example4", 2.0)]
)
def test_l2_domain_against_midpoint_grid_oracle(label, s):
    # independent integration: composite midpoint rule on a 2048^2 grid
    problem = registry_get(label, s)
    mesh = build_unit_square_mesh(64)
    eps = 1.6**-8
    system = assemble(mesh, problem, eps)
    field = field_from_solution(mesh, system, solve_direct(system).solution)
    value = l2_domain_error(field, problem)

    m = 2048
    side = (np.arange(m) + 0.5) / m
    xx, yy = np.meshgrid(side, side, indexing="xy")
    pts = np.stack([xx, yy], axis=-1)
    diff = problem.u_exact(pts) - evaluate_many(field, pts)
    oracle = float(np.sqrt(np.mean(diff**2)))
    # 3 significant digits; the fractional power of example1 dominates the gap
    assert value == pytest.approx(oracle, rel=2e-3)


def test_weighted_outflow_example4_against_composite_oracle():
    # the right-edge weight (1-x2)^2 vanishes at a corner but stays integrable
    problem = registry_get("example4", s=2.0)
    mesh = build_unit_square_mesh(64)
    field = DiscreteField(mesh, np.zeros(mesh.n_vertices))
    value = weighted_outflow_error(field, problem)

    m = 10_000
    t = (np.arange(m) + 0.5) / m
    right = np.stack([np.ones(m), t], axis=-1)
    top = np.stack([t, np.ones(m)], axis=-1)
    integral = float(
        np.mean(problem.u_exact(right) ** 2 * (1.0 - t) ** 2)
        + np.mean(problem.u_exact(top) ** 2 * 2.0)
    )
    assert value == pytest.approx(np.sqrt(integral), rel=1e-4)


def test_error_record_gamma0_presence():
    problem = registry_get("example2")
    mesh = build_unit_square_mesh(8)
    system = assemble(mesh, problem, 0.1)
    field = field_from_solution(mesh, system, solve_direct(system).solution)
    record = compute_error_record(field, problem, 0.1, residual=0.0, peclet=0.0)
    assert record.l2_gamma0 is not None
    assert record.l2_gamma_plus is not None
    assert min(record.l2_domain, record.h1_semi) >= 0

    problem3 = registry_get("example3")
    system3 = assemble(mesh, problem3, 0.1)
    field3 = field_from_solution(mesh, system3, solve_direct(system3).solution)
    record3 = compute_error_record(field3, problem3, 0.1, residual=0.0, peclet=0.0)
    assert record3.l2_gamma0 is None
