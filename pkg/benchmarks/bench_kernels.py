"""Compare the jit and numpy row-kernel backends.

Times the three hot kernels (Laplacian rows, Gamma rows, projected
gradient descent on a symmetric pencil) plus one macro loop that mimics
the quadrature inner loop of `verify` (heat curve + Gamma of every
column).  Run with the package installed:

    python benchmarks/bench_kernels.py
    GRAPHCD_NUMBA=0 python benchmarks/bench_kernels.py   # numpy only

If numba is importable, both backends run in-process and a speedup
column is printed; otherwise only the numpy path is timed.
"""

import argparse
import time

import numpy as np

from graphcd import _kernels
from graphcd.fixtures import random_connected_graph
from graphcd.semigroup import decompose, heat_curve


def median_time(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return float(np.median(samples))


def row(name, numpy_s, jit_s):
    if jit_s is None:
        print(f"{name:<28} numpy {numpy_s * 1e3:8.2f} ms")
    else:
        print(
            f"{name:<28} numpy {numpy_s * 1e3:8.2f} ms   "
            f"jit {jit_s * 1e3:8.2f} ms   speedup {numpy_s / jit_s:5.1f}x"
        )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=400)
    ap.add_argument("--columns", type=int, default=256)
    ap.add_argument("--repeats", type=int, default=9)
    args = ap.parse_args()

    print(f"backend selected by env: {_kernels.backend_name()}")
    has_jit = _kernels.NUMBA_ENABLED
    if has_jit:
        _kernels.warmup()

    g = random_connected_graph(
        1, min_vertices=args.vertices, max_vertices=args.vertices,
        extra_edge_prob=0.01,
    )
    print(f"graph: {g.vertex_count} vertices, {len(g.edges)} edges, "
          f"{args.columns} columns, median of {args.repeats}\n")

    indptr = g._csr_indptr
    indices = g._csr_indices
    weights = g._csr_weights
    inv_m = g._inv_m
    rng = np.random.default_rng(7)
    F = rng.standard_normal((g.vertex_count, args.columns))
    out = np.empty_like(F)

    t_np = median_time(
        lambda: _kernels.laplacian_rows_numpy(indptr, indices, weights, inv_m, F),
        args.repeats,
    )
    t_jit = None
    if has_jit:
        t_jit = median_time(
            lambda: _kernels._laplacian_rows_jit(indptr, indices, weights, inv_m, F, out),
            args.repeats,
        )
    row("laplacian_rows", t_np, t_jit)

    t_np = median_time(
        lambda: _kernels.gamma_rows_numpy(indptr, indices, weights, inv_m, F, F),
        args.repeats,
    )
    t_jit = None
    if has_jit:
        t_jit = median_time(
            lambda: _kernels._gamma_rows_jit(indptr, indices, weights, inv_m, F, F, out),
            args.repeats,
        )
    row("gamma_rows", t_np, t_jit)

    # pencil minimization sized like a 2-ball on a dense-ish graph
    k, starts, iters = 48, 64, 2000
    Y = rng.standard_normal((k, k))
    B = Y @ Y.T + k * np.eye(k)
    A = rng.standard_normal((k, k))
    A = 0.5 * (A + A.T)
    W0 = rng.standard_normal((k, starts))
    W0 /= np.sqrt(np.einsum("ij,ij->j", W0, B @ W0))
    anorm = float(np.linalg.norm(A, 2))
    bnorm = float(np.linalg.norm(B, 2))

    t_np = median_time(
        lambda: _kernels.pgd_min_quotient_numpy(A, B, W0.copy(), iters, 1e-12, anorm, bnorm),
        args.repeats,
    )
    t_jit = None
    if has_jit:
        t_jit = median_time(
            lambda: _kernels._pgd_min_quotient_jit(A, B, W0.copy(), iters, 1e-12, anorm, bnorm),
            args.repeats,
        )
    row(f"pgd {k}x{starts}x{iters}", t_np, t_jit)

    # macro: Gamma of heat columns, the integrand of the verify quadratures
    sd = decompose(g)
    f = rng.standard_normal(g.vertex_count)
    times = np.linspace(0.0, 1.0, 257)
    cols = np.ascontiguousarray(heat_curve(sd, g, times, f))

    def macro_numpy():
        _kernels.gamma_rows_numpy(indptr, indices, weights, inv_m, cols, cols)

    t_np = median_time(macro_numpy, args.repeats)
    t_jit = None
    if has_jit:
        outc = np.empty_like(cols)

        def macro_jit():
            _kernels._gamma_rows_jit(indptr, indices, weights, inv_m, cols, cols, outc)

        t_jit = median_time(macro_jit, args.repeats)
    row("gamma of 257 heat columns", t_np, t_jit)


if __name__ == "__main__":
    main()
