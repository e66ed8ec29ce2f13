"""Shared fixtures and slow, independent reference implementations.

The reference operators below are deliberately written as plain Python
loops over the edge dictionary.  They share no code with the package
kernels (CSR layout, segment sums, numba) so that agreement between the
two is evidence, not tautology.
"""

import math

import numpy as np
import pytest

import graphcd
from graphcd.fixtures import fixture_graphs, random_connected_graph


@pytest.fixture(scope="session", autouse=True)
def _jit_warmup():
    # compile the numba kernels once so timed tests measure math, not JIT
    graphcd.warmup()


@pytest.fixture(scope="session")
def fixtures():
    return fixture_graphs()


# ---------------------------------------------------------------------------
# reference operators (independent of the package kernels)
# ---------------------------------------------------------------------------

def adjacency(g):
    nbrs = {x: {} for x in range(g.vertex_count)}
    for (u, v), w in g.edges.items():
        if u == v:
            continue
        nbrs[u][v] = w
        nbrs[v][u] = w
    return nbrs


def ref_laplacian(g, f):
    nbrs = adjacency(g)
    out = np.zeros(g.vertex_count)
    for x in range(g.vertex_count):
        out[x] = sum(w * (f[y] - f[x]) for y, w in nbrs[x].items()) / g.m[x]
    return out


def ref_gamma(g, f, h=None):
    if h is None:
        h = f
    nbrs = adjacency(g)
    out = np.zeros(g.vertex_count)
    for x in range(g.vertex_count):
        out[x] = sum(
            w * (f[y] - f[x]) * (h[y] - h[x]) for y, w in nbrs[x].items()
        ) / (2.0 * g.m[x])
    return out


def ref_gamma2(g, f):
    lf = ref_laplacian(g, f)
    return 0.5 * ref_laplacian(g, ref_gamma(g, f)) - ref_gamma(g, f, lf)


def random_graphs(count, seed0=0, **kwargs):
    return [random_connected_graph(seed0 + i, **kwargs) for i in range(count)]


def rng_for(*key):
    return np.random.default_rng(list(key))


def lp_norm(g, f, p):
    f = np.abs(np.asarray(f, dtype=np.float64))
    if math.isinf(p):
        return float(f.max())
    return float(np.sum(f**p * g.m) ** (1.0 / p))


def check_semigroup_invariants(g, sd, rng, times=(0.05, 0.3, 1.0, 4.0)):
    """Structural property suite for the heat semigroup on one graph.

    Covers the semigroup law, generator commutation, l^p contraction for
    p in {1, 2, inf}, self-adjointness in the m inner product, positivity
    preservation, mass conservation, and the sup-norm embedding bound.
    Raises AssertionError on the first failed property.
    """
    from graphcd.operators import laplacian
    from graphcd.semigroup import heat_apply

    nv = g.vertex_count
    f = rng.standard_normal(nv)
    h = rng.standard_normal(nv)
    pos = np.abs(rng.standard_normal(nv))
    for t in times:
        pt_f = heat_apply(sd, g, t, f)

        # semigroup law P_s P_t = P_{s+t}
        s = 0.7 * t
        lhs = heat_apply(sd, g, s, pt_f)
        rhs = heat_apply(sd, g, s + t, f)
        assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(f).max())

        # commutation with the generator
        comm = laplacian(g, pt_f) - heat_apply(sd, g, t, laplacian(g, f))
        assert np.abs(comm).max() <= 1e-10 * max(1.0, np.linalg.norm(f))

        # contraction in every l^p(m)
        for p in (1.0, 2.0, math.inf):
            assert lp_norm(g, pt_f, p) <= lp_norm(g, f, p) * (1 + 1e-12)

        # self-adjointness in the m inner product
        a = np.sum(pt_f * h * g.m)
        b = np.sum(f * heat_apply(sd, g, t, h) * g.m)
        scale = max(1.0, np.linalg.norm(f) * np.linalg.norm(h))
        assert abs(a - b) <= 1e-10 * scale

        # positivity and mass
        assert heat_apply(sd, g, t, pos).min() >= -1e-12
        mass0 = np.sum(f * g.m)
        mass1 = np.sum(pt_f * g.m)
        assert abs(mass0 - mass1) <= 1e-10 * max(1.0, abs(mass0))

        # nondegenerate-measure embedding: sup norm against l^p(m) norms
        for p in (1.0, 2.0):
            bound = g.delta_min ** (-1.0 / p) * lp_norm(g, pt_f, p)
            assert lp_norm(g, pt_f, math.inf) <= bound * (1 + 1e-12)
