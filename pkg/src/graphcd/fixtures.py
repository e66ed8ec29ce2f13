"""Small named graphs and seeded random graphs used by tests and benchmarks."""

from __future__ import annotations

import string

import numpy as np

from .graph import WeightedGraph


def _labels(k):
    if k <= 26:
        return list(string.ascii_lowercase[:k])
    return [f"v{i}" for i in range(k)]


def complete_graph(k, weight=1.0, measure=1.0):
    edges = {(i, j): weight for i in range(k) for j in range(i + 1, k)}
    return WeightedGraph(_labels(k), [measure] * k, edges)


def path_graph(k, weight=1.0, measure=1.0):
    edges = {(i, i + 1): weight for i in range(k - 1)}
    return WeightedGraph(_labels(k), [measure] * k, edges)


def cycle_graph(k, weight=1.0, measure=1.0):
    edges = {(i, i + 1): weight for i in range(k - 1)}
    edges[(0, k - 1)] = weight
    return WeightedGraph(_labels(k), [measure] * k, edges)


def star_graph(leaves, weight=1.0, measure=1.0):
    # hub is vertex 0 ("a")
    edges = {(0, i): weight for i in range(1, leaves + 1)}
    return WeightedGraph(_labels(leaves + 1), [measure] * (leaves + 1), edges)


def random_connected_graph(
    seed,
    min_vertices=2,
    max_vertices=8,
    weight_range=(0.2, 5.0),
    measure_range=(0.2, 5.0),
    extra_edge_prob=0.3,
    self_loop_prob=0.1,
):
    """Random tree plus extra edges; weights/measures uniform in the ranges."""
    rng = np.random.default_rng(seed)
    nv = int(rng.integers(min_vertices, max_vertices + 1))
    lo, hi = weight_range
    edges = {}
    for v in range(1, nv):
        u = int(rng.integers(0, v))
        edges[(u, v)] = float(rng.uniform(lo, hi))
    for u in range(nv):
        for v in range(u + 1, nv):
            if (u, v) not in edges and rng.random() < extra_edge_prob:
                edges[(u, v)] = float(rng.uniform(lo, hi))
    if nv >= 1 and rng.random() < self_loop_prob:
        u = int(rng.integers(0, nv))
        edges[(u, u)] = float(rng.uniform(lo, hi))
    mlo, mhi = measure_range
    measures = rng.uniform(mlo, mhi, size=nv)
    return WeightedGraph(_labels(nv), measures, edges)


def fixture_graphs():
    """The standing acceptance fixture set."""
    return {
        "K2": complete_graph(2),
        "K3": complete_graph(3),
        "P3": path_graph(3),
        "P4": path_graph(4),
        "C5": cycle_graph(5),
        "S4": star_graph(4),
        "random8": random_connected_graph(20250815, min_vertices=6, max_vertices=8),
    }
