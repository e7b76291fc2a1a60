"""
Löwner Ellipsoids
=================

Minimum-volume enclosing ellipsoid of a full-rank point set, computed with
Khachiyan's barycentric coordinate ascent plus Todd-Yildirim away steps,
and extraction of the principal-axis vertices of a shrunk copy.

An ellipsoid is stored in center form E(G, c) = {x : (x-c)ᵀG(x-c) <= 1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInput, InvalidParameter, NoConvergence, NotPositiveDefinite
from .affine import DEFAULT_RANK_TOL
from .point_set import as_points

logger = logging.getLogger(__name__)


# =============================================================================
# CONFIGURATION
# =============================================================================

DEFAULT_EPS_MVEE: float = 1e-6
DEFAULT_MAX_ITER: int = 100_000

# Full recomputation of M^-1 and the leverages every this many rank-one updates
REFRESH_EVERY: int = 50


# =============================================================================
# ELLIPSOID
# =============================================================================

@dataclass(frozen=True)
class Ellipsoid:
    G: np.ndarray
    c: np.ndarray
    iterations: int = 0
    gap: float = 0.0

    def __post_init__(self):
        G = np.asarray(self.G, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64).reshape(-1)
        if G.shape != (c.size, c.size):
            raise InvalidParameter(f"G has shape {G.shape}, center has length {c.size}")
        if np.max(np.abs(G - G.T), initial=0.0) > 1e-9 * max(1.0, float(np.max(np.abs(G)))):
            raise NotPositiveDefinite("ellipsoid form G is not symmetric")
        object.__setattr__(self, "G", 0.5 * (G + G.T))
        object.__setattr__(self, "c", c)

    @property
    def r(self) -> int:
        return int(self.c.size)

    def membership(self, x: np.ndarray) -> np.ndarray | float:
        """(x-c)ᵀG(x-c) for one point or for every row of a matrix."""
        x = np.asarray(x, dtype=np.float64)
        diff = x - self.c
        if diff.ndim == 1:
            return float(diff @ self.G @ diff)
        return np.einsum("ij,jk,ik->i", diff, self.G, diff)

    def volume_factor(self) -> float:
        """det(G)^(-1/2), proportional to the volume."""
        sign, logdet = np.linalg.slogdet(self.G)
        if sign <= 0:
            raise NotPositiveDefinite("ellipsoid form G has non-positive determinant")
        return float(np.exp(-0.5 * logdet))

    def as_dict(self) -> dict:
        return {
            "G": self.G.tolist(),
            "c": self.c.tolist(),
            "iterations": self.iterations,
            "gap": self.gap,
        }


# =============================================================================
# MVEE
# =============================================================================

def _leverages(Q: np.ndarray, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    M = (Q.T * u) @ Q
    M_inv = np.linalg.inv(M)
    omega = np.einsum("ij,jk,ik->i", Q, M_inv, Q)
    return M_inv, omega


def mvee(
    P,
    eps_mvee: float = DEFAULT_EPS_MVEE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Ellipsoid:
    """
    Minimum-volume enclosing ellipsoid of the rows of ``P``.

    Works on the lifted points q = (x, 1) and the weights u of the dual
    problem. Each iteration either moves weight toward the point with the
    largest leverage ω = qᵀM(u)⁻¹q or, when the smallest leverage on the
    support is further from r+1, moves weight away from that point (dropping
    it entirely when the step is clipped). Stops once
    max ω <= (1 + eps_mvee)(r + 1).

    The returned form is rescaled so that every row satisfies
    membership <= 1 exactly.

    Args:
        P: n×r points of full affine rank r (project first).
        eps_mvee: Relative duality-gap target in (0, 1).
        max_iter: Iteration cap.

    Returns:
        Ellipsoid with ``iterations`` and final ``gap`` recorded.

    Raises:
        DegenerateInput: If n < r + 1 or the points are rank-deficient.
        NoConvergence: If the gap target is not reached within max_iter.

    Example:
        >>> E = mvee([[1, 1], [1, -1], [-1, 1], [-1, -1]])
        >>> np.allclose(E.G, np.eye(2) / 2)
        True
    """
    if not 0 < eps_mvee < 1:
        raise InvalidParameter(f"eps_mvee must lie in (0, 1), got {eps_mvee}")
    if max_iter < 1:
        raise InvalidParameter(f"max_iter must be at least 1, got {max_iter}")

    X = as_points(P).data
    n, r = X.shape
    if n < r + 1:
        raise DegenerateInput(f"need at least r + 1 = {r + 1} points, got {n}")

    sigma = np.linalg.svd(X - X.mean(axis=0), compute_uv=False)
    if sigma[0] == 0.0 or sigma[-1] <= DEFAULT_RANK_TOL * sigma[0]:
        raise DegenerateInput(f"points are rank-deficient in dimension {r}")

    Q = np.hstack([X, np.ones((n, 1))])
    dim = r + 1
    target = (1.0 + eps_mvee) * dim

    u = np.full(n, 1.0 / n)
    M_inv, omega = _leverages(Q, u)

    iterations = 0
    while True:
        j = int(np.argmax(omega))
        if omega[j] <= target:
            # confirm on fresh leverages before accepting
            M_inv, omega = _leverages(Q, u)
            j = int(np.argmax(omega))
            if omega[j] <= target:
                break

        if iterations >= max_iter:
            raise NoConvergence(
                f"mvee did not reach gap {eps_mvee:g} in {max_iter} iterations "
                f"(gap {omega[j] / dim - 1.0:.3g})"
            )
        iterations += 1

        support = np.flatnonzero(u > 0)
        k = int(support[np.argmin(omega[support])])
        eps_plus = omega[j] / dim - 1.0
        eps_minus = 1.0 - omega[k] / dim

        if eps_minus > eps_plus and u[k] < 1.0:
            clip = u[k] / (1.0 - u[k])
            if omega[k] - 1.0 > 1e-15:
                lam = min((dim - omega[k]) / (dim * (omega[k] - 1.0)), clip)
            else:
                lam = clip
            mu, idx = -lam, k
            drop = lam == clip
        else:
            mu, idx = (omega[j] - dim) / (dim * (omega[j] - 1.0)), j
            drop = False

        # rank-one update of M^-1 and ω for u <- (1 - mu)u + mu e_idx
        Mq = M_inv @ Q[idx]
        y = Q @ Mq
        denom = (1.0 - mu) + mu * omega[idx]
        M_inv = (M_inv - mu * np.outer(Mq, Mq) / denom) / (1.0 - mu)
        omega = (omega - mu * y * y / denom) / (1.0 - mu)

        u *= 1.0 - mu
        u[idx] += mu
        if drop:
            u[idx] = 0.0
        np.clip(u, 0.0, None, out=u)

        if iterations % REFRESH_EVERY == 0:
            u /= u.sum()
            M_inv, omega = _leverages(Q, u)

    gap = float(np.max(omega) / dim - 1.0)
    c = u @ X
    scatter = (X.T * u) @ X - np.outer(c, c)
    G = np.linalg.inv(scatter) / r
    G = 0.5 * (G + G.T)

    diff = X - c
    worst = float(np.max(np.einsum("ij,jk,ik->i", diff, G, diff)))
    G = G / max(1.0, worst)

    logger.debug("mvee: n=%d r=%d iterations=%d gap=%.3g", n, r, iterations, gap)
    return Ellipsoid(G=G, c=c, iterations=iterations, gap=gap)


# =============================================================================
# VERTICES
# =============================================================================

def shrunk_vertices(E: Ellipsoid, factor: float) -> np.ndarray:
    """
    Endpoints of the semi-principal axes of (factor)(E - c) + c.

    Eigenpairs are visited in descending-eigenvalue order, + before -, so
    the result is a deterministic 2r×r array whose rows all have
    membership exactly factor².

    Raises:
        NotPositiveDefinite: If any eigenvalue of G is <= 0.

    Example:
        >>> E = Ellipsoid(G=np.diag([0.25, 1.0]), c=np.array([1.0, 0.0]))
        >>> shrunk_vertices(E, 1.0).tolist()
        [[1.0, 1.0], [1.0, -1.0], [3.0, 0.0], [-1.0, 0.0]]
    """
    if not 0 < factor <= 1:
        raise InvalidParameter(f"factor must lie in (0, 1], got {factor}")

    lam, vecs = np.linalg.eigh(E.G)
    if np.any(lam <= 0):
        raise NotPositiveDefinite(f"G has eigenvalue {float(lam.min()):.3g} <= 0")

    order = np.argsort(-lam, kind="stable")
    vertices = []
    for i in order:
        v = vecs[:, i]
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        half_axis = factor / np.sqrt(lam[i]) * v
        vertices.append(E.c + half_axis)
        vertices.append(E.c - half_axis)
    return np.array(vertices)
