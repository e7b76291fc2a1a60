"""Numerical affine rank, and projection onto / lifting from the affine hull."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import AllPointsIdentical, DimensionMismatch, InvalidParameter
from .point_set import PointSet, as_points

logger = logging.getLogger(__name__)

DEFAULT_RANK_TOL: float = 1e-8


@dataclass(frozen=True)
class AffineBasis:
    """
    Orthonormal basis Y (d×r) of the affine hull through translation z.

    A point p is represented as p' = (p - z)Y and recovered as p'Yᵀ + z.
    """
    Y: np.ndarray
    z: np.ndarray
    r: int
    singular_values: np.ndarray | None = None

    @property
    def d(self) -> int:
        return int(self.Y.shape[0])

    def as_dict(self) -> dict:
        return {"Y": self.Y.tolist(), "z": self.z.tolist(), "r": self.r}


def rank_and_basis(P, rank_tol: float = DEFAULT_RANK_TOL) -> AffineBasis:
    """
    Numerical affine rank and a basis of the subspace the rows lie on.

    z is the mean row; r counts singular values of P - z above
    ``rank_tol * sigma_max``; Y holds the matching right-singular vectors.

    Args:
        P: PointSet or n×d array.
        rank_tol: Relative singular-value cutoff, > 0.

    Returns:
        AffineBasis with 1 <= r <= d.

    Raises:
        AllPointsIdentical: If the centered matrix is numerically zero.

    Example:
        >>> B = rank_and_basis([[0, 0], [1, 0], [2, 0]])
        >>> B.r, B.z.tolist()
        (1, [1.0, 0.0])
    """
    if not rank_tol > 0:
        raise InvalidParameter(f"rank_tol must be positive, got {rank_tol}")
    P = as_points(P)

    z = P.data.mean(axis=0)
    centered = P.data - z
    _, sigma, vt = np.linalg.svd(centered, full_matrices=False)

    sigma_max = float(sigma[0]) if sigma.size else 0.0
    scale = P.scale()
    if sigma_max == 0.0 or sigma_max <= rank_tol * scale:
        raise AllPointsIdentical(
            f"{P.n} rows span a zero-dimensional affine hull (sigma_max={sigma_max:.3g})"
        )

    r = int(np.count_nonzero(sigma > rank_tol * sigma_max))
    Y = vt[:r].T.copy()
    logger.debug("rank_and_basis: n=%d d=%d r=%d", P.n, P.d, r)
    return AffineBasis(Y=Y, z=z, r=r, singular_values=sigma)


def project(P, B: AffineBasis) -> PointSet:
    """
    Coordinates of every row in the basis: (p - z)Y. Row order is kept,
    so index i of the result is index i of ``P``.

    Example:
        >>> B = rank_and_basis([[0, 0], [1, 0], [2, 0]])
        >>> sorted(abs(project([[0, 0], [1, 0], [2, 0]], B).data[:, 0]).tolist())
        [0.0, 1.0, 1.0]
    """
    P = as_points(P)
    if P.d != B.d:
        raise DimensionMismatch(f"points have d={P.d}, basis expects d={B.d}")
    return PointSet((P.data - B.z) @ B.Y, P.weights)


def lift(P_prime, B: AffineBasis) -> PointSet:
    """Inverse of :func:`project`: p = p'Yᵀ + z."""
    P_prime = as_points(P_prime)
    if P_prime.d != B.r:
        raise DimensionMismatch(f"coordinates have r={P_prime.d}, basis has r={B.r}")
    return PointSet(P_prime.data @ B.Y.T + B.z, P_prime.weights)


def affine_rank(P, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Affine rank with the degenerate single-point case mapped to 0."""
    try:
        return rank_and_basis(P, rank_tol).r
    except AllPointsIdentical:
        return 0
