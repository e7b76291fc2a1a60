"""
Carathéodory Decompositions
===========================

Writes a point v of conv(P) as a convex combination of at most d+1 rows
of P (d = ambient dimension of P):

1. ``lp_decompose``: Phase-1 simplex on  A x = b, x >= 0  with
   A = [Pᵀ; 1ᵀ] and b = (v; 1). Any feasible x is a convex combination.
2. ``sparsify``: null-space elimination that removes one support point per
   step until at most d+1 remain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import DimensionMismatch, Infeasible, InvalidParameter, NumericalBreakdown
from ..geometry.point_set import as_points

logger = logging.getLogger(__name__)


# =============================================================================
# CONFIGURATION
# =============================================================================

DEFAULT_FEASIBILITY_TOL: float = 1e-8
DEFAULT_MAX_CONDITION: float = 1e14

PIVOT_TOL: float = 1e-11
CLAMP_TOL: float = 1e-12


# =============================================================================
# RESULT TYPE
# =============================================================================

@dataclass(frozen=True)
class ConvexDecomposition:
    """Row indices into the source points and their convex coefficients."""
    indices: np.ndarray
    coefficients: np.ndarray

    @property
    def support_size(self) -> int:
        return int(self.indices.size)

    def reconstruct(self, P) -> np.ndarray:
        """Σ coefficient_i · P[index_i]."""
        return self.coefficients @ as_points(P).data[self.indices]

    def residual(self, P, v) -> float:
        """Max-abs reconstruction error against the target."""
        return float(np.max(np.abs(self.reconstruct(P) - np.asarray(v, dtype=np.float64))))

    def as_dict(self) -> dict:
        return {
            "indices": self.indices.tolist(),
            "coefficients": self.coefficients.tolist(),
        }


def _constraints(v, P) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    X = as_points(P).data
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if v.size != X.shape[1]:
        raise DimensionMismatch(f"target has length {v.size}, points have d={X.shape[1]}")
    A = np.vstack([X.T, np.ones((1, X.shape[0]))])
    b = np.append(v, 1.0)
    return X, A, b


# =============================================================================
# PHASE-1 SIMPLEX
# =============================================================================

def _phase_one(A: np.ndarray, b: np.ndarray, max_pivots: int) -> tuple[np.ndarray, float]:
    """
    Minimise the sum of artificials for A x = b, x >= 0 (b >= 0 assumed).
    Bland's rule for both the entering column and ratio-test ties.

    Returns the basic solution restricted to the structural columns and
    the final Phase-1 objective.
    """
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = np.arange(n, n + m)

    for _ in range(max_pivots):
        entering = np.flatnonzero(T[m, :n] < -PIVOT_TOL)
        if entering.size == 0:
            break
        e = int(entering[0])

        col = T[:m, e]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            raise NumericalBreakdown("Phase-1 objective unbounded (cannot happen for a feasible tableau)")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        leave = int(ties[np.argmin(basis[ties])])

        T[leave] /= T[leave, e]
        for i in range(m + 1):
            if i != leave and T[i, e] != 0.0:
                T[i] -= T[i, e] * T[leave]
        basis[leave] = e
    else:
        raise NumericalBreakdown(f"Phase-1 simplex exceeded {max_pivots} pivots")

    x = np.zeros(n)
    structural = basis < n
    x[basis[structural]] = T[:m, -1][structural]
    return x, float(-T[m, -1])


def lp_decompose(
    v,
    P,
    feasibility_tol: float = DEFAULT_FEASIBILITY_TOL,
) -> np.ndarray:
    """
    Dense convex-coefficient vector x with Σ x_i p_i = v, Σ x_i = 1, x >= 0.

    Args:
        v: Target point (length d).
        P: n×d points whose hull should contain v.
        feasibility_tol: Allowed ‖Ax - b‖∞, relative to max(1, scale).

    Returns:
        Length-n vector x; may have more than d+1 nonzeros.

    Raises:
        Infeasible: If v is not in conv(P) within tolerance.

    Example:
        >>> x = lp_decompose([1/3, 1/3], [[0, 0], [1, 0], [0, 1]])
        >>> bool(np.allclose(x @ [[0, 0], [1, 0], [0, 1]], [1/3, 1/3]))
        True
    """
    X, A, b = _constraints(v, P)
    scale = max(1.0, float(np.max(np.abs(X))), float(np.max(np.abs(b))))

    # normalise so pivot tolerances are relative
    A_s = A.copy()
    b_s = b.copy()
    A_s[:-1] /= scale
    b_s[:-1] /= scale
    flip = b_s < 0
    A_s[flip] *= -1.0
    b_s[flip] *= -1.0

    m, n = A.shape
    x, objective = _phase_one(A_s, b_s, max_pivots=50 * (n + m) + 1000)
    if objective > feasibility_tol:
        raise Infeasible(f"target is outside the hull (Phase-1 objective {objective:.3g})")

    # polish the basic solution on its own columns
    support = np.flatnonzero(x > 0)
    if support.size:
        polished, *_ = np.linalg.lstsq(A[:, support], b, rcond=None)
        if np.all(polished >= -CLAMP_TOL):
            x = np.zeros(n)
            x[support] = np.clip(polished, 0.0, None)

    residual = float(np.max(np.abs(A @ x - b)))
    if residual > feasibility_tol * scale:
        raise Infeasible(f"target is outside the hull (residual {residual:.3g})")
    return x


# =============================================================================
# SUPPORT REDUCTION
# =============================================================================

def sparsify(
    P,
    x,
    v,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> ConvexDecomposition:
    """
    Reduce a feasible convex combination to at most d+1 support points.

    While the support exceeds d+1, any d+2 support columns of A are
    linearly dependent; moving x along a kernel vector keeps A x fixed, and
    the largest step that keeps x >= 0 zeroes one coefficient.

    Raises:
        NumericalBreakdown: If a kernel vector cannot be computed reliably.
    """
    X, A, b = _constraints(v, P)
    x = np.array(x, dtype=np.float64).reshape(-1)
    if x.size != X.shape[0]:
        raise DimensionMismatch(f"coefficients have length {x.size}, points have n={X.shape[0]}")

    m = A.shape[0]
    x[(x < 0) & (x >= -CLAMP_TOL)] = 0.0
    if np.any(x < 0):
        raise InvalidParameter("coefficients must be non-negative")

    support = np.flatnonzero(x > 0)
    steps = 0
    while support.size > m:
        active = support[: m + 1]
        try:
            kernel = scipy.linalg.null_space(A[:, active], rcond=1.0 / max_condition)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalBreakdown(f"kernel solve failed: {exc}") from exc
        if kernel.shape[1] == 0 or not np.all(np.isfinite(kernel)):
            raise NumericalBreakdown("active columns have no usable kernel vector")

        k = kernel[:, 0]
        if not np.any(k > 0):
            k = -k
        positive = k > CLAMP_TOL * np.max(np.abs(k))
        ratios = x[active][positive] / k[positive]
        hit = int(np.argmin(ratios))

        x[active] -= ratios[hit] * k
        x[active[positive][hit]] = 0.0

        low = x < 0
        if np.any(x[low] < -CLAMP_TOL * max(1.0, x.max())):
            raise NumericalBreakdown("elimination step drove a coefficient negative")
        x[low] = 0.0
        support = np.flatnonzero(x > 0)
        steps += 1

    coefficients = x[support]
    total = coefficients.sum()
    if not total > 0:
        raise NumericalBreakdown("coefficients vanished during elimination")
    coefficients = coefficients / total

    logger.debug("sparsify: %d elimination steps, support %d", steps, support.size)
    return ConvexDecomposition(indices=support.astype(np.intp), coefficients=coefficients)


def cara(
    v,
    P,
    feasibility_tol: float = DEFAULT_FEASIBILITY_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> ConvexDecomposition:
    """
    Carathéodory set of ``v`` in conv(P): at most d+1 rows and convex
    coefficients reconstructing v.

    Example:
        >>> D = cara([0.5], [[0.0], [1.0]])
        >>> D.indices.tolist(), D.coefficients.tolist()
        ([0, 1], [0.5, 0.5])
    """
    x = lp_decompose(v, P, feasibility_tol=feasibility_tol)
    return sparsify(P, x, v, max_condition=max_condition)
