"""P1 Galerkin assembly for the regularized advection problem.

The weak form tested against functions vanishing on the inflow boundary is

    eps*(grad u, grad v) + (beta.grad u + mu*u, v) = (f, v),

so the Neumann condition on the rest of the boundary is natural and no
boundary term is assembled.  Dirichlet vertices are those incident to at
least one inflow edge; the system is restricted to the remaining free ones.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .mesh import BoundaryTag, Mesh, classify_boundary
from .problems import Problem, ScalarField, VectorField


@dataclass(frozen=True)
class QuadratureRule:
    """Symmetric rule on the reference triangle, weights sum to 1."""

    points: np.ndarray  # (q, 3) barycentric
    weights: np.ndarray  # (q,)
    degree: int


def triangle_rule(degree: int = 5) -> QuadratureRule:
    """Quadrature of the requested polynomial exactness (2 or 5)."""
    if degree == 2:
        pts = np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) / 4.0
        return QuadratureRule(pts, np.full(3, 1.0 / 3.0), 2)
    if degree == 5:
        r15 = np.sqrt(15.0)
        a = (6.0 - r15) / 21.0
        b = (6.0 + r15) / 21.0
        pts = np.array(
            [
                [1 / 3, 1 / 3, 1 / 3],
                [1 - 2 * a, a, a],
                [a, 1 - 2 * a, a],
                [a, a, 1 - 2 * a],
                [1 - 2 * b, b, b],
                [b, 1 - 2 * b, b],
                [b, b, 1 - 2 * b],
            ]
        )
        w = np.array(
            [9.0 / 40.0]
            + [(155.0 - r15) / 1200.0] * 3
            + [(155.0 + r15) / 1200.0] * 3
        )
        return QuadratureRule(pts, w, 5)
    raise ValueError(f"unsupported triangle quadrature degree {degree}")


def tri_geometry(vertices: np.ndarray, triangles: np.ndarray):
    """Signed areas and constant P1 gradients for a batch of triangles."""
    p = vertices[triangles]  # (M, 3, 2)
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    x, y = p[..., 0], p[..., 1]
    grads = np.empty_like(p)
    inv2a = 1.0 / (2.0 * areas)
    grads[:, 0, 0] = (y[:, 1] - y[:, 2]) * inv2a
    grads[:, 0, 1] = (x[:, 2] - x[:, 1]) * inv2a
    grads[:, 1, 0] = (y[:, 2] - y[:, 0]) * inv2a
    grads[:, 1, 1] = (x[:, 0] - x[:, 2]) * inv2a
    grads[:, 2, 0] = (y[:, 0] - y[:, 1]) * inv2a
    grads[:, 2, 1] = (x[:, 1] - x[:, 0]) * inv2a
    return grads, areas


@dataclass(frozen=True)
class ElementBlocks:
    """Epsilon-independent per-element matrices, reusable across a sweep."""

    stiffness: np.ndarray  # (M, 3, 3)
    advection: np.ndarray
    mass: np.ndarray
    load: np.ndarray  # (M, 3)


def _blocks(vertices, triangles, beta, mu, f, rule) -> ElementBlocks:
    grads, areas = tri_geometry(vertices, triangles)
    qpts = np.einsum("qi,tid->tqd", rule.points, vertices[triangles])
    beta_q = np.ascontiguousarray(beta(qpts), dtype=np.float64)
    mu_q = np.ascontiguousarray(mu(qpts), dtype=np.float64)
    f_q = np.ascontiguousarray(f(qpts), dtype=np.float64)
    kb, cb, mb, fb = kernels.element_blocks(
        np.ascontiguousarray(grads),
        np.ascontiguousarray(areas),
        np.ascontiguousarray(rule.points),
        np.ascontiguousarray(rule.weights),
        beta_q,
        mu_q,
        f_q,
    )
    return ElementBlocks(kb, cb, mb, fb)


def element_blocks_for(
    mesh: Mesh,
    beta: VectorField,
    mu: ScalarField,
    f: ScalarField,
    rule: QuadratureRule,
) -> ElementBlocks:
    """Evaluate fields at mapped quadrature nodes and run the batch kernel."""
    return _blocks(mesh.vertices, mesh.triangles, beta, mu, f, rule)


def element_matrices(
    tri_vertices: np.ndarray,
    beta: VectorField,
    mu: ScalarField,
    f: ScalarField,
    epsilon: float,
    rule: QuadratureRule,
):
    """eps*K + C + M and the load vector for a single triangle.

    Raises ValueError for a degenerate triangle (area below 1e-14 of the
    squared diameter) or a clockwise one.
    """
    p = np.asarray(tri_vertices, dtype=np.float64).reshape(3, 2)
    edges = p[[1, 2, 0]] - p
    diam2 = float(np.max(np.sum(edges**2, axis=1)))
    area = 0.5 * (
        (p[1, 0] - p[0, 0]) * (p[2, 1] - p[0, 1]) - (p[1, 1] - p[0, 1]) * (p[2, 0] - p[0, 0])
    )
    if abs(area) <= 1e-14 * diam2:
        raise ValueError(f"degenerate triangle, area {area}")
    if area < 0:
        raise ValueError("triangle vertices must be counterclockwise")
    blocks = _blocks(p, np.array([[0, 1, 2]]), beta, mu, f, rule)
    mat = epsilon * blocks.stiffness[0] + blocks.advection[0] + blocks.mass[0]
    return mat, blocks.load[0]


@dataclass(frozen=True)
class SparseSystem:
    """Restricted Galerkin system over the free (non-Dirichlet) vertices."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    free_indices: np.ndarray  # free row -> global vertex index

    @property
    def dimension(self) -> int:
        return self.rhs.shape[0]


def dirichlet_mask(mesh: Mesh, tags: np.ndarray) -> np.ndarray:
    """True at vertices incident to at least one inflow edge."""
    mask = np.zeros(mesh.n_vertices, dtype=bool)
    inflow_edges = mesh.edge_vertices[tags == BoundaryTag.INFLOW]
    mask[inflow_edges.ravel()] = True
    return mask


def assemble_from_blocks(
    mesh: Mesh, blocks: ElementBlocks, epsilon: float, dirichlet: np.ndarray
) -> SparseSystem:
    """Combine cached element blocks at one epsilon and restrict the system."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    free_indices = np.flatnonzero(~dirichlet)
    if free_indices.size == 0:
        raise ValueError("no free vertices: every vertex carries Dirichlet data")
    renum = -np.ones(mesh.n_vertices, dtype=np.int64)
    renum[free_indices] = np.arange(free_indices.size)

    vals = (epsilon * blocks.stiffness + blocks.advection + blocks.mass).ravel()
    rows = np.repeat(mesh.triangles, 3, axis=1).ravel()
    cols = np.tile(mesh.triangles, (1, 3)).ravel()
    keep = ~dirichlet[rows] & ~dirichlet[cols]
    n_free = free_indices.size
    matrix = sp.coo_matrix(
        (vals[keep], (renum[rows[keep]], renum[cols[keep]])), shape=(n_free, n_free)
    ).tocsr()
    matrix.sort_indices()
    matrix.eliminate_zeros()

    rhs_full = np.zeros(mesh.n_vertices)
    np.add.at(rhs_full, mesh.triangles.ravel(), blocks.load.ravel())
    return SparseSystem(matrix=matrix, rhs=rhs_full[free_indices], free_indices=free_indices)


def assemble(
    mesh: Mesh,
    problem: Problem,
    epsilon: float,
    rule: QuadratureRule | None = None,
    tags: np.ndarray | None = None,
) -> SparseSystem:
    """Assemble the restricted system for one problem and one epsilon."""
    rule = rule if rule is not None else triangle_rule(5)
    if tags is None:
        tags = classify_boundary(mesh, problem.beta)
    blocks = element_blocks_for(mesh, problem.beta, problem.mu, problem.f, rule)
    return assemble_from_blocks(mesh, blocks, epsilon, dirichlet_mask(mesh, tags))


@dataclass(frozen=True)
class DiscreteField:
    """P1 function given by one coefficient per mesh vertex."""

    mesh: Mesh
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != (self.mesh.n_vertices,):
            raise ValueError("coefficient count must equal vertex count")


def field_from_solution(mesh: Mesh, system: SparseSystem, solution: np.ndarray) -> DiscreteField:
    """Scatter a free-vertex solution back to all vertices (zeros on Dirichlet)."""
    coeffs = np.zeros(mesh.n_vertices)
    coeffs[system.free_indices] = solution
    return DiscreteField(mesh=mesh, coeffs=coeffs)


def _locate(mesh: Mesh, pts: np.ndarray, tol: float = 1e-12):
    x, y = pts[..., 0], pts[..., 1]
    if np.any((x < -tol) | (x > 1 + tol) | (y < -tol) | (y > 1 + tol)):
        raise ValueError("point outside the unit square")
    n = mesh.n_cells
    xc = np.clip(x, 0.0, 1.0)
    yc = np.clip(y, 0.0, 1.0)
    i = np.minimum((xc * n).astype(np.int64), n - 1)
    j = np.minimum((yc * n).astype(np.int64), n - 1)
    fx = xc * n - i
    fy = yc * n - j
    lower = fx >= fy
    tri = 2 * (j * n + i) + np.where(lower, 0, 1)
    lam = np.empty(pts.shape[:-1] + (3,))
    lam[..., 0] = np.where(lower, 1.0 - fx, 1.0 - fy)
    lam[..., 1] = np.where(lower, fx - fy, fx)
    lam[..., 2] = np.where(lower, fy, fy - fx)
    return tri, lam


def evaluate_many(field: DiscreteField, pts: np.ndarray) -> np.ndarray:
    """Barycentric interpolation of the field at an array of points."""
    tri, lam = _locate(field.mesh, np.asarray(pts, dtype=np.float64))
    return np.sum(field.coeffs[field.mesh.triangles[tri]] * lam, axis=-1)


def evaluate(field: DiscreteField, point) -> float:
    """Field value at one point of the closed unit square."""
    return float(evaluate_many(field, np.asarray(point, dtype=np.float64)))


def peclet_guard(mesh: Mesh, problem: Problem, epsilon: float) -> float:
    """Max element Peclet number |beta|*diam/(2*eps); > 1 merits a warning."""
    p = mesh.vertices[mesh.triangles]
    edges = p[:, [1, 2, 0]] - p
    diam = np.sqrt(np.max(np.sum(edges**2, axis=2), axis=1))
    centroids = p.mean(axis=1)
    speed = np.linalg.norm(problem.beta(centroids), axis=-1)
    return float(np.max(speed * diam / (2.0 * epsilon)))
