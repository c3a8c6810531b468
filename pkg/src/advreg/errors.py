"""Error norms between the exact transport solution and a discrete field.

Domain norms integrate the exact solution with a degree-5 triangle rule on
the solve mesh; boundary norms use Gauss rules per edge.  The weighted
outflow norm carries the beta.n weight from its defining trace integral.
"""

from dataclasses import dataclass

import numpy as np

from .fem import DiscreteField, QuadratureRule, tri_geometry, triangle_rule
from .mesh import BoundaryTag, classify_boundary, edge_midpoints_and_weights
from .problems import Problem


@dataclass(frozen=True)
class ErrorRecord:
    """The norms reported for one epsilon of a sweep.

    l2_gamma_plus / l2_gamma0 are None when the boundary has no outflow /
    characteristic edges for the problem's advection field.
    """

    epsilon: float
    l2_domain: float
    l2_gamma_plus: float | None
    h1_semi: float
    l2_gamma0: float | None
    residual: float
    peclet: float


def _domain_quadrature(field: DiscreteField, rule: QuadratureRule):
    mesh = field.mesh
    _, areas = tri_geometry(mesh.vertices, mesh.triangles)
    qpts = np.einsum("qi,tid->tqd", rule.points, mesh.vertices[mesh.triangles])
    return mesh, areas, qpts


def l2_domain_error(field: DiscreteField, problem: Problem, rule: QuadratureRule | None = None) -> float:
    """L2(domain) distance between u_exact and the P1 field."""
    rule = rule if rule is not None else triangle_rule(5)
    mesh, areas, qpts = _domain_quadrature(field, rule)
    ue = problem.u_exact(qpts)
    uh = np.einsum("tj,qj->tq", field.coeffs[mesh.triangles], rule.points)
    total = np.einsum("t,q,tq->", areas, rule.weights, (ue - uh) ** 2)
    return float(np.sqrt(max(total, 0.0)))


def h1_semi_error(field: DiscreteField, problem: Problem, rule: QuadratureRule | None = None) -> float:
    """L2(domain) norm of grad(u_exact) - grad(field); the field gradient is
    constant per triangle."""
    rule = rule if rule is not None else triangle_rule(5)
    mesh = field.mesh
    grads, areas = tri_geometry(mesh.vertices, mesh.triangles)
    qpts = np.einsum("qi,tid->tqd", rule.points, mesh.vertices[mesh.triangles])
    ge = problem.grad_u_exact(qpts)  # (M, q, 2)
    gh = np.einsum("tj,tjd->td", field.coeffs[mesh.triangles], grads)
    diff2 = np.sum((ge - gh[:, None, :]) ** 2, axis=-1)
    total = np.einsum("t,q,tq->", areas, rule.weights, diff2)
    return float(np.sqrt(max(total, 0.0)))


def _edge_error(field, problem, edge_mask, order, weighted):
    mesh = field.mesh
    if not np.any(edge_mask):
        return None
    nodes, weights = edge_midpoints_and_weights(mesh, order)
    nodes, weights = nodes[edge_mask], weights[edge_mask]
    t, _ = np.polynomial.legendre.leggauss(order)
    ends = field.coeffs[mesh.edge_vertices[edge_mask]]  # (E, 2)
    uh = 0.5 * (1.0 - t)[None, :] * ends[:, :1] + 0.5 * (1.0 + t)[None, :] * ends[:, 1:]
    diff2 = (problem.u_exact(nodes) - uh) ** 2
    if weighted:
        bn = np.sum(problem.beta(nodes) * mesh.edge_normals[edge_mask][:, None, :], axis=-1)
        diff2 = diff2 * bn
    return float(np.sqrt(max(np.sum(weights * diff2), 0.0)))


def weighted_outflow_error(
    field: DiscreteField, problem: Problem, tags: np.ndarray | None = None, order: int = 3
) -> float | None:
    """beta.n-weighted L2 error over outflow edges; None when there are none."""
    if tags is None:
        tags = classify_boundary(field.mesh, problem.beta)
    return _edge_error(field, problem, tags == BoundaryTag.OUTFLOW, order, weighted=True)


def characteristic_error(
    field: DiscreteField, problem: Problem, tags: np.ndarray | None = None, order: int = 3
) -> float | None:
    """Unweighted L2 error over characteristic edges; None when there are none."""
    if tags is None:
        tags = classify_boundary(field.mesh, problem.beta)
    return _edge_error(field, problem, tags == BoundaryTag.CHARACTERISTIC, order, weighted=False)


def compute_error_record(
    field: DiscreteField,
    problem: Problem,
    epsilon: float,
    residual: float,
    peclet: float,
    tags: np.ndarray | None = None,
    rule: QuadratureRule | None = None,
    edge_order: int = 3,
) -> ErrorRecord:
    """Bundle the four norms for one solved epsilon."""
    if tags is None:
        tags = classify_boundary(field.mesh, problem.beta)
    return ErrorRecord(
        epsilon=epsilon,
        l2_domain=l2_domain_error(field, problem, rule),
        l2_gamma_plus=weighted_outflow_error(field, problem, tags, edge_order),
        h1_semi=h1_semi_error(field, problem, rule),
        l2_gamma0=characteristic_error(field, problem, tags, edge_order),
        residual=residual,
        peclet=peclet,
    )
