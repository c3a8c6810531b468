"""Numba @njit implementations of the hot kernels.

Same contracts as _kernels_numpy; see that module for parameter docs.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def element_blocks(grads, areas, lam, w, beta_q, mu_q, f_q):
    m = grads.shape[0]
    nq = w.shape[0]
    kb = np.zeros((m, 3, 3))
    cb = np.zeros((m, 3, 3))
    mb = np.zeros((m, 3, 3))
    fb = np.zeros((m, 3))
    for t in range(m):
        a = areas[t]
        for i in range(3):
            for j in range(3):
                kb[t, i, j] = a * (
                    grads[t, i, 0] * grads[t, j, 0] + grads[t, i, 1] * grads[t, j, 1]
                )
        for q in range(nq):
            wq = w[q] * a
            bx = beta_q[t, q, 0]
            by = beta_q[t, q, 1]
            mu = mu_q[t, q]
            fv = f_q[t, q]
            for j in range(3):
                bg = bx * grads[t, j, 0] + by * grads[t, j, 1]
                for i in range(3):
                    cb[t, i, j] += wq * lam[q, i] * bg
                    mb[t, i, j] += wq * mu * lam[q, i] * lam[q, j]
            for i in range(3):
                fb[t, i] += wq * fv * lam[q, i]
    return kb, cb, mb, fb


@njit(cache=True)
def ilu0_factor(n, indptr, indices, data, diag_ptr):
    for i in range(n):
        row_start = indptr[i]
        row_end = indptr[i + 1]
        for kk in range(row_start, diag_ptr[i]):
            k = indices[kk]
            pivot = data[diag_ptr[k]]
            if pivot == 0.0:
                return k
            lik = data[kk] / pivot
            data[kk] = lik
            # merge row k's upper entries into row i's pattern (both sorted)
            pp = kk + 1
            for jj in range(diag_ptr[k] + 1, indptr[k + 1]):
                j = indices[jj]
                while pp < row_end and indices[pp] < j:
                    pp += 1
                if pp == row_end:
                    break
                if indices[pp] == j:
                    data[pp] -= lik * data[jj]
        if data[diag_ptr[i]] == 0.0:
            return i
    return -1


@njit(cache=True)
def ilu0_solve(indptr, indices, data, diag_ptr, b):
    n = b.shape[0]
    x = b.copy()
    for i in range(n):
        acc = x[i]
        for kk in range(indptr[i], diag_ptr[i]):
            acc -= data[kk] * x[indices[kk]]
        x[i] = acc
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for kk in range(diag_ptr[i] + 1, indptr[i + 1]):
            acc -= data[kk] * x[indices[kk]]
        x[i] = acc / data[diag_ptr[i]]
    return x
