"""Backend agreement: the numba kernels and the numpy fallbacks must compute
the same thing on the same CSR inputs."""

import os
import subprocess
import sys

import numpy as np
import pytest

from graphcd import _kernels
from graphcd.fixtures import random_connected_graph
from conftest import rng_for


def _csr(g):
    return g._csr_indptr, g._csr_indices, g._csr_weights, g._inv_m


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba backend not active")
def test_laplacian_rows_backends_agree():
    rng = rng_for(11)
    for i in range(25):
        g = random_connected_graph(300 + i, max_vertices=12)
        F = rng.standard_normal((g.vertex_count, 4))
        a = _kernels.laplacian_rows(*_csr(g), np.ascontiguousarray(F))
        b = _kernels.laplacian_rows_numpy(*_csr(g), F)
        assert np.allclose(a, b, rtol=0, atol=1e-13 * max(1.0, np.abs(b).max()))


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba backend not active")
def test_gamma_rows_backends_agree():
    rng = rng_for(12)
    for i in range(25):
        g = random_connected_graph(330 + i, max_vertices=12)
        F = rng.standard_normal((g.vertex_count, 3))
        H = rng.standard_normal((g.vertex_count, 3))
        a = _kernels.gamma_rows(*_csr(g), np.ascontiguousarray(F), np.ascontiguousarray(H))
        b = _kernels.gamma_rows_numpy(*_csr(g), F, H)
        assert np.allclose(a, b, rtol=0, atol=1e-13 * max(1.0, np.abs(b).max()))


@pytest.mark.skipif(not _kernels.NUMBA_ENABLED, reason="numba backend not active")
def test_pgd_backends_reach_same_minimum():
    import scipy.linalg

    rng = rng_for(13)
    for trial in range(10):
        d = int(rng.integers(2, 7))
        X = rng.standard_normal((d, d))
        A = X + X.T
        Y = rng.standard_normal((d, d))
        B = Y @ Y.T + d * np.eye(d)
        W0 = rng.standard_normal((d, 8))
        W0 /= np.sqrt(np.einsum("ij,ij->j", W0, B @ W0))  # start on w'Bw = 1
        lam = scipy.linalg.eigh(A, B, eigvals_only=True)[0]
        r_jit = _kernels.pgd_min_quotient(A, B, W0, 4000, 1e-12)
        r_np = _kernels.pgd_min_quotient_numpy(
            np.ascontiguousarray(A), np.ascontiguousarray(B), W0.copy(),
            4000, 1e-12,
            float(np.linalg.norm(A, 2)), float(np.linalg.norm(B, 2)),
        )
        scale = max(1.0, abs(lam))
        assert r_jit >= lam - 1e-9 * scale  # quotient can never undershoot
        assert r_np >= lam - 1e-9 * scale
        assert abs(r_jit - lam) <= 1e-5 * scale
        assert abs(r_np - lam) <= 1e-5 * scale


def test_warmup_runs():
    _kernels.warmup()
    assert _kernels.backend_name() in ("numba", "numpy")


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, GRAPHCD_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c",
         "import graphcd; print(graphcd.backend_name())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_numpy_backend_computes_same_curvature():
    # end-to-end check that the fallback path gives the same numbers
    code = (
        "import graphcd\n"
        "from graphcd.fixtures import complete_graph\n"
        "g = complete_graph(3)\n"
        "print(repr(graphcd.curvature_at(g, 0).kappa))\n"
        "print(repr(graphcd.curvature_oracle(g, 0)))\n"
    )
    env = dict(os.environ, GRAPHCD_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True, env=env, check=True)
    kappa, oracle = (float(s) for s in out.stdout.split())
    assert abs(kappa - 2.5) < 1e-9
    assert abs(oracle - 2.5) < 1e-6
