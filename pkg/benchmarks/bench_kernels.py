"""Time the numba kernels against the pure-numpy fallback.

Covers the two hot paths: per-element matrix accumulation and ILU(0)
factorization + triangular solve.  Run:

    python benchmarks/bench_kernels.py --n-cells 256 --repeats 5
"""

import argparse
import time

import numpy as np

from advreg.fem import assemble, tri_geometry, triangle_rule
from advreg.kernels import load_kernels
from advreg.mesh import build_unit_square_mesh
from advreg.problems import registry_get


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-cells", type=int, default=256)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    mesh = build_unit_square_mesh(args.n_cells)
    problem = registry_get("example3")
    rule = triangle_rule(5)

    grads, areas = tri_geometry(mesh.vertices, mesh.triangles)
    qpts = np.einsum("qi,tid->tqd", rule.points, mesh.vertices[mesh.triangles])
    beta_q = np.ascontiguousarray(problem.beta(qpts))
    mu_q = np.ascontiguousarray(problem.mu(qpts))
    f_q = np.ascontiguousarray(problem.f(qpts))
    grads = np.ascontiguousarray(grads)
    areas = np.ascontiguousarray(areas)

    system = assemble(mesh, problem, epsilon=0.01, rule=rule)
    a = system.matrix
    n = a.shape[0]
    rows = np.repeat(np.arange(n), np.diff(a.indptr))
    diag_ptr = np.flatnonzero(a.indices == rows).astype(a.indptr.dtype)
    b = np.ascontiguousarray(system.rhs)

    print(f"mesh: {mesh.n_triangles} triangles, system dim {n}, nnz {a.nnz}")
    header = f"{'kernel':28s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))

    results = {}
    for name in ("numba", "numpy"):
        mod = load_kernels(name)
        # warm up (numba JIT compile)
        mod.element_blocks(grads, areas, rule.points, rule.weights, beta_q, mu_q, f_q)
        results[("blocks", name)] = best_of(
            lambda: mod.element_blocks(grads, areas, rule.points, rule.weights, beta_q, mu_q, f_q),
            args.repeats,
        )
        data = a.data.copy()
        mod.ilu0_factor(n, a.indptr, a.indices, data, diag_ptr)
        mod.ilu0_solve(a.indptr, a.indices, data, diag_ptr, b)

        def factor_and_solve(mod=mod):
            d = a.data.copy()
            mod.ilu0_factor(n, a.indptr, a.indices, d, diag_ptr)
            mod.ilu0_solve(a.indptr, a.indices, d, diag_ptr, b)

        results[("ilu0", name)] = best_of(factor_and_solve, args.repeats)

    for kernel, label in (("blocks", "element_blocks"), ("ilu0", "ilu0 factor+solve")):
        tn = results[(kernel, "numba")]
        tp = results[(kernel, "numpy")]
        print(f"{label:28s} {tn * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tn:7.1f}x")


if __name__ == "__main__":
    main()
