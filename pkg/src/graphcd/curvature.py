"""Bakry-Emery curvature-dimension bounds at graph vertices.

The pointwise curvature is the best constant in Gamma2 >= (1/n)(Delta f)^2
+ K Gamma(f) at x:

    kappa(x; n) = inf { [Gamma2(f)(x) - (1/n)(Delta f(x))^2] / Gamma(f)(x) }

over functions with f(x) = 0 supported on the 2-ball (locality makes the
restriction lossless).  curvature_at solves this by Schur-complement
elimination of the 2-sphere coordinates followed by a symmetric pencil
eigensolve; curvature_oracle recomputes the same number along an
independent route (forms assembled by polarization of global operator
evaluations, kernel deflation, a generalized eigensolver, and a
projected-gradient sanity search) so the two can cross-check each other.

Also here: the exponential curvature condition CDE, as an evaluator and a
randomized falsifier.  Certifying CDE is nonconvex and out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .graph import WeightedGraph, ball2
from .operators import gamma, gamma2, gamma_many, gamma2_many, laplacian, laplacian_many, local_forms

_RANK_TOL = 1e-12          # pseudo-inverse cutoff, relative to sigma_max
_PSD_TOL = 1e-10           # allowed negative eigenvalue in the S2 block
_CD_DECISION_TOL = 1e-10
_ORACLE_MAX_BALL = 12
_PGD_STARTS = 50
_PGD_ITERS = 4000
_PGD_SEED = 1723


class CurvatureInternalError(RuntimeError):
    """A structural invariant of the curvature computation failed."""


class IsolatedVertexError(ValueError):
    """Curvature is undefined at a vertex with no neighbors."""


@dataclass(frozen=True)
class CurvatureResult:
    vertex: int
    dimension: float
    kappa: float
    witness: np.ndarray  # function on V, Gamma(witness)(vertex) = 1


@dataclass(frozen=True)
class CdCheck:
    holds: bool
    K: float
    dimension: float
    min_kappa: float
    margins: dict  # vertex label -> kappa(x) - K


def _check_dimension(n):
    n = float(n)
    if math.isnan(n) or n <= 0.0:
        raise ValueError(f"dimension must be a positive real or inf, got {n}")
    return n


def _fix_sign(u):
    # lexicographic convention: first nonzero coordinate positive
    tol = 1e-12 * max(1.0, float(np.abs(u).max()))
    for val in u:
        if abs(val) > tol:
            if val < 0.0:
                return -u
            return u
    return u


def curvature_at(g: WeightedGraph, x: int, n: float = math.inf) -> CurvatureResult:
    """Pointwise curvature kappa(x; n) with an optimizing witness function."""
    n = _check_dimension(n)
    forms = local_forms(g, x)
    ball = forms.ball
    k1 = len(ball.sphere1)
    k2 = len(ball.sphere2)
    if k1 == 0:
        raise IsolatedVertexError(
            f"vertex {g.labels[x]!r} has no neighbors; curvature undefined"
        )

    A = forms.gamma2_form
    b = np.diag(forms.gamma_form).copy()
    d = forms.delta_vector

    A11 = A[:k1, :k1]
    if k2 > 0:
        A12 = A[:k1, k1:]
        A22 = A[k1:, k1:]
        eig22 = np.linalg.eigvalsh(A22)
        if eig22[0] < -_PSD_TOL * max(1.0, float(np.linalg.norm(A22, 2))):
            raise CurvatureInternalError(
                f"sphere2 block of the Gamma2 form is not PSD at {g.labels[x]!r} "
                f"(min eigenvalue {eig22[0]:.3e})"
            )
        A22_pinv = np.linalg.pinv(A22, rcond=_RANK_TOL)
        Ahat = A11 - A12 @ A22_pinv @ A12.T
        Ahat = 0.5 * (Ahat + Ahat.T)
    else:
        A12 = None
        A22_pinv = None
        Ahat = A11

    M = Ahat if math.isinf(n) else Ahat - np.outer(d, d) / n

    # pencil M v = lambda B v via the congruence B = C^T C, C = diag(sqrt(b))
    c = np.sqrt(b)
    W = M / np.outer(c, c)
    lam, vecs = np.linalg.eigh(W)
    kappa = float(lam[0])
    u = _fix_sign(vecs[:, 0])
    v = u / c   # Gamma(witness)(x) = v^T B v = u^T u = 1

    witness = np.zeros(g.vertex_count)
    witness[list(ball.sphere1)] = v
    if k2 > 0:
        witness[list(ball.sphere2)] = -(A22_pinv @ (A12.T @ v))
    return CurvatureResult(vertex=x, dimension=n, kappa=kappa, witness=witness)


def curvature_all(g: WeightedGraph, n: float = math.inf):
    return [curvature_at(g, x, n) for x in range(g.vertex_count)]


def min_curvature(g: WeightedGraph, n: float = math.inf) -> float:
    return min(r.kappa for r in curvature_all(g, n))


def check_cd(g: WeightedGraph, K: float, n: float = math.inf) -> CdCheck:
    """Does the graph satisfy CD(K, n)?  True iff min_x kappa(x;n) >= K - 1e-10."""
    results = curvature_all(g, n)
    margins = {g.labels[r.vertex]: r.kappa - K for r in results}
    min_kappa = min(r.kappa for r in results)
    return CdCheck(
        holds=bool(min_kappa >= K - _CD_DECISION_TOL),
        K=float(K),
        dimension=float(n),
        min_kappa=min_kappa,
        margins=margins,
    )


# ---------------------------------------------------------------------------
# independent oracle
# ---------------------------------------------------------------------------

def _polarized_forms(g, x, coords):
    """Assemble the Gamma2/Gamma forms over ball coordinates by evaluating
    the global operators on basis functions and polarizing.  Shares no code
    with the analytic assembly in operators.local_forms."""
    k = len(coords)
    nv = g.vertex_count
    pair_list = [(i, j) for i in range(k) for j in range(i + 1, k)]
    F = np.zeros((nv, k + len(pair_list)))
    for i, vtx in enumerate(coords):
        F[vtx, i] = 1.0
    for col, (i, j) in enumerate(pair_list, start=k):
        F[coords[i], col] = 1.0
        F[coords[j], col] = 1.0

    q2 = gamma2_many(g, F)[x]
    q1 = gamma_many(g, F)[x]
    dvals = laplacian_many(g, F[:, :k])[x]

    A = np.diag(q2[:k])
    B = np.diag(q1[:k])
    for col, (i, j) in enumerate(pair_list, start=k):
        A[i, j] = A[j, i] = 0.5 * (q2[col] - q2[i] - q2[j])
        B[i, j] = B[j, i] = 0.5 * (q1[col] - q1[i] - q1[j])
    return A, B, dvals


def curvature_oracle(g: WeightedGraph, x: int, n: float = math.inf) -> float:
    """kappa(x; n) by direct minimization over the full 2-ball coordinates.

    The Rayleigh quotient [f'Af - (1/n)(d.f)^2] / (f'Bf) is minimized with
    B extended by zeros on the 2-sphere: the kernel of B is deflated (the
    minimum over kernel directions is taken analytically, the Gamma2 form
    restricted there being PSD), and the rest is a generalized eigensolve.
    A projected-gradient search from 50 seeded starts cross-checks that
    the eigensolve found the global minimum.
    """
    n = _check_dimension(n)
    ball = ball2(g, x)
    k1 = len(ball.sphere1)
    k2 = len(ball.sphere2)
    if 1 + k1 + k2 > _ORACLE_MAX_BALL:
        raise ValueError(
            f"2-ball at {g.labels[x]!r} has {1 + k1 + k2} vertices; "
            f"oracle requires at most {_ORACLE_MAX_BALL}"
        )
    if k1 == 0:
        raise IsolatedVertexError(
            f"vertex {g.labels[x]!r} has no neighbors; curvature undefined"
        )

    coords = list(ball.sphere1) + list(ball.sphere2)
    A, B, d = _polarized_forms(g, x, coords)
    Atil = A if math.isinf(n) else A - np.outer(d, d) / n

    w, V = np.linalg.eigh(B)
    pos = w > _RANK_TOL * max(1.0, float(w.max()))
    Y = V[:, pos]
    Z = V[:, ~pos]
    Bpos = Y.T @ B @ Y
    AYY = Y.T @ Atil @ Y
    if Z.shape[1] > 0:
        AZZ = Z.T @ Atil @ Z
        AZY = Z.T @ Atil @ Y
        E = AYY - AZY.T @ np.linalg.pinv(AZZ, rcond=_RANK_TOL) @ AZY
        E = 0.5 * (E + E.T)
    else:
        E = AYY
    kappa = float(scipy.linalg.eigh(E, Bpos, eigvals_only=True)[0])

    # projected-gradient sanity search on the raw quotient
    rng = np.random.default_rng([_PGD_SEED, x, k1, k2])
    k = k1 + k2
    W0 = rng.standard_normal((k, _PGD_STARTS))
    q = np.einsum("ij,ij->j", W0, B @ W0)
    W0 /= np.sqrt(np.maximum(q, 1e-30))[None, :]
    gtol = 1e-10 * max(1.0, float(np.linalg.norm(Atil, 2)))
    kappa_pgd = _kernels.pgd_min_quotient(Atil, B, W0, _PGD_ITERS, gtol)

    scale = 1.0 + abs(kappa)
    if kappa_pgd < kappa - 1e-7 * scale or kappa_pgd > kappa + 1e-2 * scale:
        raise CurvatureInternalError(
            f"gradient search found {kappa_pgd!r} but eigensolve found {kappa!r} "
            f"at vertex {g.labels[x]!r}"
        )
    return kappa


# ---------------------------------------------------------------------------
# exponential curvature condition CDE
# ---------------------------------------------------------------------------

def cde_residual(g: WeightedGraph, f, x: int, K: float, n: float) -> float:
    """Residual of the CDE inequality at x for an admissible f.

    Returns Gamma2(f)(x) - Gamma(f, Gamma(f)/f)(x) - (1/n)(Delta f(x))^2
    - K*Gamma(f)(x).  Requires f > 0 on the closed 2-ball of x and
    Delta f(x) < 0; nonnegative residual means the inequality holds for
    this particular f.
    """
    n = _check_dimension(n)
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (g.vertex_count,):
        raise ValueError("function size mismatch")
    ball = ball2(g, x)
    members = [x] + list(ball.sphere1) + list(ball.sphere2)
    if np.any(f[members] <= 0.0):
        raise ValueError("CDE requires f > 0 on the 2-ball of x")
    lap_x = laplacian(g, f)[x]
    if not lap_x < 0.0:
        raise ValueError(f"CDE requires Delta f(x) < 0, got {lap_x}")

    gf = gamma(g, f)
    quotient = np.zeros_like(f)
    nz = f != 0.0
    quotient[nz] = gf[nz] / f[nz]   # only the 1-ball values enter below
    value = gamma2(g, f)[x] - gamma(g, f, quotient)[x] - K * gf[x]
    if not math.isinf(n):
        value -= (lap_x * lap_x) / n
    return float(value)


def cde_falsify(g: WeightedGraph, x: int, K: float, n: float, trials: int, seed: int):
    """Random search for a function violating CDE(x, K, n).

    Samples log-normal positive functions on the 2-ball (rest held at 1),
    keeps those with Delta f(x) < 0, and returns the first with residual
    below -1e-10, else None.  Absence of a counterexample proves nothing.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ball = ball2(g, x)
    members = [x] + list(ball.sphere1) + list(ball.sphere2)
    rng = np.random.default_rng([int(seed), x])
    for _ in range(int(trials)):
        f = np.ones(g.vertex_count)
        f[members] = rng.lognormal(mean=0.0, sigma=1.0, size=len(members))
        if laplacian(g, f)[x] >= 0.0:
            continue
        if cde_residual(g, f, x, K, n) < -1e-10:
            return f
    return None
