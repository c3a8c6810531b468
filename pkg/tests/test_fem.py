import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from advreg.fem import (
    DiscreteField,
    assemble,
    element_matrices,
    evaluate,
    evaluate_many,
    peclet_guard,
    tri_geometry,
    triangle_rule,
)
from advreg.mesh import build_unit_square_mesh
from advreg.problems import registry_get

UNIT_TRI = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def const(v):
    return lambda p: np.full(p.shape[:-1], float(v))


def const_vec(vx, vy):
    return lambda p: np.stack([np.full(p.shape[:-1], float(vx)), np.full(p.shape[:-1], float(vy))], axis=-1)


ZERO = const(0.0)
ONE = const(1.0)


def test_rule_weights_sum_to_one():
    for degree in (2, 5):
        rule = triangle_rule(degree)
        assert abs(rule.weights.sum() - 1.0) < 1e-14
        assert np.all(rule.points > 0)
        assert np.max(np.abs(rule.points.sum(axis=1) - 1.0)) < 1e-14


def test_rule_rejects_unknown_degree():
    with pytest.raises(ValueError):
        triangle_rule(7)


def _sympy_monomial_integrals(tri, max_degree):
    """Exact integrals of x^a y^b over the triangle, via symbolic integration."""
    import sympy as sp

    xi, eta = sp.symbols("xi eta")
    x = tri[0, 0] + xi * (tri[1, 0] - tri[0, 0]) + eta * (tri[2, 0] - tri[0, 0])
    y = tri[0, 1] + xi * (tri[1, 1] - tri[0, 1]) + eta * (tri[2, 1] - tri[0, 1])
    jac = abs(
        (tri[1, 0] - tri[0, 0]) * (tri[2, 1] - tri[0, 1])
        - (tri[1, 1] - tri[0, 1]) * (tri[2, 0] - tri[0, 0])
    )
    out = {}
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            val = sp.integrate(sp.integrate(x**a * y**b * jac, (eta, 0, 1 - xi)), (xi, 0, 1))
            out[(a, b)] = float(val)
    return out


@pytest.mark.parametrize(
    "tri",
    [UNIT_TRI, np.array([[0.2, 0.1], [0.9, 0.3], [0.4, 0.8]])],
    ids=["unit", "skewed"],
)
def test_degree5_rule_exact_on_quintics(tri):
    rule = triangle_rule(5)
    exact = _sympy_monomial_integrals(tri, 5)
    grads, areas = tri_geometry(tri, np.array([[0, 1, 2]]))
    pts = rule.points @ tri
    for (a, b), value in exact.items():
        approx = float(areas[0] * np.sum(rule.weights * pts[:, 0] ** a * pts[:, 1] ** b))
        assert abs(approx - value) < 1e-12 * max(1.0, abs(value))


def test_stiffness_block_unit_triangle():
    k, _ = element_matrices(UNIT_TRI, const_vec(0, 0), ZERO, ZERO, 1.0, triangle_rule(5))
    expected = np.array([[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
    assert np.max(np.abs(k - expected)) < 1e-12


def test_mass_block_unit_triangle():
    m, _ = element_matrices(UNIT_TRI, const_vec(0, 0), ONE, ZERO, 0.0, triangle_rule(5))
    expected = np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) / 24.0
    assert np.max(np.abs(m - expected)) < 1e-12


def test_advection_block_unit_triangle():
    c, _ = element_matrices(UNIT_TRI, const_vec(1, 0), ZERO, ZERO, 0.0, triangle_rule(5))
    expected = np.array([[-1, 1, 0], [-1, 1, 0], [-1, 1, 0]]) / 6.0
    assert np.max(np.abs(c - expected)) < 1e-12


def test_load_vector_constant_source():
    _, load = element_matrices(UNIT_TRI, const_vec(0, 0), ZERO, ONE, 0.0, triangle_rule(5))
    assert np.max(np.abs(load - 1.0 / 6.0)) < 1e-14  # area/3 per basis function


def test_degenerate_triangle_rejected():
    flat = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(ValueError):
        element_matrices(flat, const_vec(0, 0), ONE, ZERO, 1.0, triangle_rule(5))


def test_clockwise_triangle_rejected():
    cw = UNIT_TRI[[0, 2, 1]]
    with pytest.raises(ValueError):
        element_matrices(cw, const_vec(0, 0), ONE, ZERO, 1.0, triangle_rule(5))


def test_dirichlet_dimension_example3():
    # inflow = bottom + left: 5 of the 9 vertices on the 3x3 grid
    mesh = build_unit_square_mesh(2)
    system = assemble(mesh, registry_get("example3"), epsilon=1.0)
    assert system.dimension == 4


def test_dirichlet_dimension_example1():
    # inflow = bottom only (left edge is characteristic): 3 constrained
    mesh = build_unit_square_mesh(2)
    system = assemble(mesh, registry_get("example1"), epsilon=1.0)
    assert system.dimension == 6


def test_rejects_nonpositive_epsilon():
    mesh = build_unit_square_mesh(4)
    with pytest.raises(ValueError):
        assemble(mesh, registry_get("example2"), epsilon=0.0)


def test_empty_free_set_rejected():
    mesh = build_unit_square_mesh(1)
    problem = registry_get("example3")
    from advreg.fem import assemble_from_blocks, element_blocks_for

    blocks = element_blocks_for(mesh, problem.beta, problem.mu, problem.f, triangle_rule(5))
    with pytest.raises(ValueError):
        assemble_from_blocks(mesh, blocks, 1.0, np.ones(mesh.n_vertices, dtype=bool))


@pytest.mark.parametrize("label,s", [("example1", None), ("example2", None), ("example3", None), ("example4", None)])
@pytest.mark.parametrize("eps", [1.0, 0.01])
def test_assembled_system_positive_definite_quadratic_form(label, s, eps):
    mesh = build_unit_square_mesh(16)
    system = assemble(mesh, registry_get(label, s), epsilon=eps)
    gen = np.random.default_rng(7)
    for _ in range(100):
        x = gen.standard_normal(system.dimension)
        assert x @ (system.matrix @ x) > 0


def test_sparse_system_structure():
    mesh = build_unit_square_mesh(8)
    system = assemble(mesh, registry_get("example3"), epsilon=0.1)
    a = system.matrix
    assert a.shape == (system.dimension, system.dimension)
    assert a.has_sorted_indices
    assert np.all(np.diff(a.indptr) > 0)  # no empty rows
    assert np.all(a.indices >= 0) and np.all(a.indices < a.shape[0])
    assert not np.any(a.data == 0.0)


def test_patch_constant_reproduction():
    # beta=0 classifies everything characteristic, so no Dirichlet rows:
    # with mu=1 and f=c the discrete residual of the constant vector vanishes.
    mesh = build_unit_square_mesh(6)
    c = 2.5
    from advreg.problems import Problem

    plain = Problem(
        label="patch",
        beta=const_vec(0, 0),
        mu=ONE,
        f=const(c),
        u_exact=const(c),
        grad_u_exact=const_vec(0, 0),
    )
    system = assemble(mesh, plain, epsilon=1.0)
    assert system.dimension == mesh.n_vertices
    residual = system.matrix @ np.full(mesh.n_vertices, c) - system.rhs
    assert np.max(np.abs(residual)) < 1e-12


def test_evaluate_reproduces_coordinate_function():
    mesh = build_unit_square_mesh(4)
    field = DiscreteField(mesh, mesh.vertices[:, 0].copy())
    assert evaluate(field, (0.25, 0.6)) == pytest.approx(0.25, abs=1e-14)


def test_evaluate_constant_field():
    mesh = build_unit_square_mesh(3)
    field = DiscreteField(mesh, np.ones(mesh.n_vertices))
    pts = np.random.default_rng(2).random((50, 2))
    assert np.max(np.abs(evaluate_many(field, pts) - 1.0)) < 1e-14


def test_evaluate_at_vertices_returns_coefficients():
    mesh = build_unit_square_mesh(5)
    gen = np.random.default_rng(4)
    field = DiscreteField(mesh, gen.standard_normal(mesh.n_vertices))
    values = evaluate_many(field, mesh.vertices)
    assert np.max(np.abs(values - field.coeffs)) < 1e-12


def test_evaluate_outside_domain_raises():
    mesh = build_unit_square_mesh(2)
    field = DiscreteField(mesh, np.zeros(mesh.n_vertices))
    with pytest.raises(ValueError):
        evaluate(field, (1.5, 0.5))


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(-2, 2),
    b=st.floats(-2, 2),
    c=st.floats(-2, 2),
    x=st.floats(0, 1),
    y=st.floats(0, 1),
)
def test_evaluate_exact_for_affine_fields(a, b, c, x, y):
    mesh = build_unit_square_mesh(3)
    coeffs = a + b * mesh.vertices[:, 0] + c * mesh.vertices[:, 1]
    field = DiscreteField(mesh, coeffs)
    assert evaluate(field, (x, y)) == pytest.approx(a + b * x + c * y, abs=1e-12)


def test_field_coefficient_count_checked():
    mesh = build_unit_square_mesh(2)
    with pytest.raises(ValueError):
        DiscreteField(mesh, np.zeros(3))


def test_peclet_formula():
    mesh = build_unit_square_mesh(100)  # h = sqrt(2)/100
    pe = peclet_guard(mesh, registry_get("example3"), epsilon=0.1)
    assert pe == pytest.approx(np.sqrt(2.0) * mesh.h / 0.2, rel=1e-12)


def test_peclet_paper_regime_is_stable():
    mesh = build_unit_square_mesh(708)  # h close to the published 0.002
    pe = peclet_guard(mesh, registry_get("example2"), epsilon=1.6**-14)
    assert 0.6 < pe < 0.8


def test_peclet_vanishes_for_large_epsilon():
    mesh = build_unit_square_mesh(10)
    assert peclet_guard(mesh, registry_get("example3"), epsilon=1e9) < 1e-8
