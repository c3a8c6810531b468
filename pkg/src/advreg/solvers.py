"""Sparse direct and preconditioned iterative solvers for assembled systems.

Direct is the default: the systems are strongly nonsymmetric for small eps
and sparse LU is robust at the problem sizes this package targets.  The
iterative path is restarted GMRES with a hand-rolled ILU(0) preconditioner.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .fem import SparseSystem


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    relative_residual: float
    iterations: int
    method: str
    converged: bool = True


def _as_csr(system):
    a = system.matrix if isinstance(system, SparseSystem) else system
    a = sp.csr_matrix(a)
    a.sort_indices()
    return a


def _rhs(system, b):
    if isinstance(system, SparseSystem):
        return system.rhs
    return np.asarray(b, dtype=np.float64)


def _rel_residual(a, x, b):
    scale = float(np.max(np.abs(b)))
    if scale == 0.0:
        scale = 1.0
    return float(np.max(np.abs(a @ x - b))) / scale


def solve_direct(system: SparseSystem | sp.spmatrix, b: np.ndarray | None = None) -> SolveReport:
    """Sparse LU (COLAMD ordering, partial pivoting); residual checked to 1e-10."""
    a = _as_csr(system)
    rhs = _rhs(system, b)
    try:
        lu = spla.splu(a.tocsc())
        x = lu.solve(rhs)
    except RuntimeError as exc:  # SuperLU reports exact singularity this way
        raise SolverError(f"direct solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SolverError("direct solve produced non-finite entries (singular matrix?)")
    res = _rel_residual(a, x, rhs)
    if res > 1e-10:
        raise SolverError(f"direct solve residual {res:.3e} exceeds 1e-10")
    return SolveReport(solution=x, relative_residual=res, iterations=0, method="direct")


class ILU0:
    """Zero-fill incomplete LU of a CSR matrix, used as a GMRES preconditioner."""

    def __init__(self, a: sp.csr_matrix):
        a = _as_csr(a)
        n = a.shape[0]
        rows = np.repeat(np.arange(n), np.diff(a.indptr))
        hits = np.flatnonzero(a.indices == rows)
        if hits.size != n:
            missing = int(np.setdiff1d(np.arange(n), rows[hits])[0])
            raise SolverError(f"ILU(0) needs a stored diagonal; row {missing} has none")
        self.indptr = a.indptr
        self.indices = a.indices
        self.diag_ptr = hits.astype(a.indptr.dtype)
        self.data = a.data.astype(np.float64).copy()
        fail = kernels.ilu0_factor(n, self.indptr, self.indices, self.data, self.diag_ptr)
        if fail >= 0:
            raise SolverError(f"ILU(0) hit a zero pivot at row {fail}")
        self.shape = a.shape

    def solve(self, b: np.ndarray) -> np.ndarray:
        return kernels.ilu0_solve(
            self.indptr, self.indices, self.data, self.diag_ptr,
            np.ascontiguousarray(b, dtype=np.float64),
        )

    def as_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator(self.shape, matvec=self.solve)


def solve_iterative(
    system: SparseSystem | sp.spmatrix,
    b: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int = 2000,
) -> SolveReport:
    """ILU(0)-preconditioned GMRES(50); non-convergence is flagged, not hidden."""
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must lie in (0, 1e-6], got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    a = _as_csr(system)
    rhs = _rhs(system, b)
    precond = ILU0(a)

    count = {"n": 0}

    def _cb(_):
        count["n"] += 1

    restart = min(50, a.shape[0])
    cycles = max(1, -(-max_iter // restart))
    x, info = spla.gmres(
        a,
        rhs,
        rtol=tol,
        atol=0.0,
        restart=restart,
        maxiter=cycles,
        M=precond.as_operator(),
        callback=_cb,
        callback_type="pr_norm",
    )
    norm_b = float(np.linalg.norm(rhs))
    rel2 = float(np.linalg.norm(rhs - a @ x)) / (norm_b if norm_b > 0 else 1.0)
    converged = info == 0 and rel2 <= tol
    return SolveReport(
        solution=x,
        relative_residual=rel2,
        iterations=count["n"],
        method="gmres+ilu0",
        converged=converged,
    )
