"""Structured triangulations of the unit square and boundary classification.

Each grid cell is split along its lower-left to upper-right diagonal, giving
2*n^2 right triangles with counterclockwise vertex order.  Boundary edges are
tagged inflow/outflow/characteristic by the sign of beta.n at edge midpoints.
"""

from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, TextIO

import numpy as np

VectorField = Callable[[np.ndarray], np.ndarray]


class BoundaryTag(IntEnum):
    INFLOW = -1
    CHARACTERISTIC = 0
    OUTFLOW = 1


_TAG_NAMES = {
    BoundaryTag.INFLOW: "inflow",
    BoundaryTag.CHARACTERISTIC: "characteristic",
    BoundaryTag.OUTFLOW: "outflow",
}


@dataclass(frozen=True)
class Mesh:
    """Immutable triangulation of (0,1)^2.

    vertices : (N, 2) coordinates
    triangles : (M, 3) vertex indices, counterclockwise
    edge_vertices : (E, 2) endpoint indices of boundary edges
    edge_normals : (E, 2) outward unit normals
    edge_lengths : (E,) edge lengths
    n_cells : cells per side
    h : max triangle diameter, sqrt(2)/n_cells
    """

    vertices: np.ndarray
    triangles: np.ndarray
    edge_vertices: np.ndarray
    edge_normals: np.ndarray
    edge_lengths: np.ndarray
    n_cells: int
    h: float

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def n_boundary_edges(self) -> int:
        return self.edge_vertices.shape[0]

    def edge_midpoints(self) -> np.ndarray:
        pts = self.vertices[self.edge_vertices]
        return 0.5 * (pts[:, 0] + pts[:, 1])


def build_unit_square_mesh(n_cells: int) -> Mesh:
    """Structured right-triangle mesh with (n_cells+1)^2 vertices.

    Raises ValueError for n_cells < 1.
    """
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1, got {n_cells}")
    n = int(n_cells)
    side = np.linspace(0.0, 1.0, n + 1)
    xx, yy = np.meshgrid(side, side, indexing="xy")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    ll = (jj * (n + 1) + ii).ravel()
    lr = ll + 1
    ul = ll + (n + 1)
    ur = ul + 1
    # lower-left -> upper-right diagonal: lower and upper triangle per cell
    tris = np.empty((2 * n * n, 3), dtype=np.int64)
    tris[0::2] = np.column_stack([ll, lr, ur])
    tris[1::2] = np.column_stack([ll, ur, ul])

    k = np.arange(n)
    bottom = np.column_stack([k, k + 1])
    right = np.column_stack([n + k * (n + 1), n + (k + 1) * (n + 1)])
    top = np.column_stack([(n + 1) * n + n - k, (n + 1) * n + n - k - 1])
    left = np.column_stack([(n - k) * (n + 1), (n - k - 1) * (n + 1)])
    edge_vertices = np.vstack([bottom, right, top, left])
    edge_normals = np.repeat(
        np.array([[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]), n, axis=0
    )
    edge_lengths = np.full(4 * n, 1.0 / n)

    return Mesh(
        vertices=vertices,
        triangles=tris,
        edge_vertices=edge_vertices,
        edge_normals=edge_normals,
        edge_lengths=edge_lengths,
        n_cells=n,
        h=np.sqrt(2.0) / n,
    )


def classify_boundary(mesh: Mesh, beta: VectorField, tol: float = 1e-12) -> np.ndarray:
    """Tag each boundary edge by the sign of beta.n at its midpoint.

    beta.n > tol -> OUTFLOW, beta.n < -tol -> INFLOW, else CHARACTERISTIC.
    Returns an int8 array of BoundaryTag values, one per boundary edge.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    bn = np.sum(np.asarray(beta(mesh.edge_midpoints())) * mesh.edge_normals, axis=1)
    tags = np.zeros(mesh.n_boundary_edges, dtype=np.int8)
    tags[bn > tol] = BoundaryTag.OUTFLOW
    tags[bn < -tol] = BoundaryTag.INFLOW
    return tags


def edge_midpoints_and_weights(mesh: Mesh, order: int = 3):
    """Gauss nodes and weights on every boundary edge.

    order is the number of Gauss points per edge (2 or 3).  Returns
    (nodes, weights) of shapes (E, order, 2) and (E, order); weights on an
    edge sum to its length.
    """
    if order not in (2, 3):
        raise ValueError(f"unsupported edge quadrature order {order}, expected 2 or 3")
    t, w = np.polynomial.legendre.leggauss(order)
    p = mesh.vertices[mesh.edge_vertices]  # (E, 2, 2)
    mid = 0.5 * (p[:, 0] + p[:, 1])
    half = 0.5 * (p[:, 1] - p[:, 0])
    nodes = mid[:, None, :] + t[None, :, None] * half[:, None, :]
    weights = 0.5 * w[None, :] * mesh.edge_lengths[:, None]
    return nodes, weights


def dump_mesh(mesh: Mesh, tags: np.ndarray, stream: TextIO) -> None:
    """Plain-text dump: 'v x y', 't i j k', 'e i j TAG' lines."""
    for x, y in mesh.vertices:
        stream.write(f"v {x:.17g} {y:.17g}\n")
    for i, j, k in mesh.triangles:
        stream.write(f"t {i} {j} {k}\n")
    for (i, j), tag in zip(mesh.edge_vertices, tags):
        stream.write(f"e {i} {j} {_TAG_NAMES[BoundaryTag(tag)]}\n")
