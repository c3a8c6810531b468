"""Pure-numpy fallback implementations of the hot kernels."""

import numpy as np


def element_blocks(grads, areas, lam, w, beta_q, mu_q, f_q):
    """Per-triangle P1 blocks: stiffness, advection, mass, load.

    Parameters
    ----------
    grads : (M, 3, 2) constant basis gradients per triangle
    areas : (M,) triangle areas
    lam : (q, 3) basis values at the reference quadrature nodes
    w : (q,) quadrature weights summing to 1
    beta_q, mu_q, f_q : advection/reaction/source values at the mapped
        quadrature nodes, shapes (M, q, 2), (M, q), (M, q)

    Returns
    -------
    kb, cb, mb : (M, 3, 3) arrays with
        kb[t,i,j] = area_t * grad_i . grad_j
        cb[t,i,j] = area_t * sum_q w_q (beta . grad_j) lam_i
        mb[t,i,j] = area_t * sum_q w_q mu lam_i lam_j
    fb : (M, 3) loads, fb[t,i] = area_t * sum_q w_q f lam_i
    """
    kb = np.einsum("tid,tjd->tij", grads, grads) * areas[:, None, None]
    beta_dot_grad = np.einsum("tqd,tjd->tqj", beta_q, grads)
    cb = np.einsum("q,qi,tqj,t->tij", w, lam, beta_dot_grad, areas)
    mb = np.einsum("q,qi,qj,tq,t->tij", w, lam, lam, mu_q, areas)
    fb = np.einsum("q,qi,tq,t->ti", w, lam, f_q, areas)
    return kb, cb, mb, fb


def ilu0_factor(n, indptr, indices, data, diag_ptr):
    """In-place ILU(0) of a CSR matrix with sorted column indices.

    Returns -1 on success, else the row index of the first zero pivot.
    Row updates stay on the sparsity pattern of the original matrix.
    """
    for i in range(n):
        row_start, row_end = indptr[i], indptr[i + 1]
        row_cols = indices[row_start:row_end]
        for kk in range(row_start, diag_ptr[i]):
            k = indices[kk]
            pivot = data[diag_ptr[k]]
            if pivot == 0.0:
                return k
            lik = data[kk] / pivot
            data[kk] = lik
            upper = slice(diag_ptr[k] + 1, indptr[k + 1])
            cols_k = indices[upper]
            # positions of row k's upper entries inside row i's pattern
            pos = np.searchsorted(row_cols, cols_k) + row_start
            ok = (pos < row_end) & (indices[np.minimum(pos, row_end - 1)] == cols_k)
            data[pos[ok]] -= lik * data[upper][ok]
        if data[diag_ptr[i]] == 0.0:
            return i
    return -1


def ilu0_solve(indptr, indices, data, diag_ptr, b):
    """Solve LUx = b given the packed ILU(0) factor (unit lower diagonal)."""
    n = b.shape[0]
    x = b.astype(np.float64).copy()
    for i in range(n):
        lo = slice(indptr[i], diag_ptr[i])
        x[i] -= data[lo] @ x[indices[lo]]
    for i in range(n - 1, -1, -1):
        up = slice(diag_ptr[i] + 1, indptr[i + 1])
        x[i] = (x[i] - data[up] @ x[indices[up]]) / data[diag_ptr[i]]
    return x
