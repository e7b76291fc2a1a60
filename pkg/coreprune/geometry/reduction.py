"""
Dimensionality-reduction preprocessing for neuron point sets.

Only PCA and the Gaussian (Johnson-Lindenstrauss) random projection are
supported; both come from scikit-learn.
"""
from __future__ import annotations

import logging

import numpy as np
from sklearn.decomposition import PCA
from sklearn.random_projection import GaussianRandomProjection

from ..errors import DimensionMismatch, InvalidParameter
from .point_set import PointSet, as_points

logger = logging.getLogger(__name__)

REDUCE_METHODS: tuple[str, ...] = ("pca", "gaussian_projection")


def reduce_dimension(
    P,
    method: str,
    target_dim: int,
    seed: int = 0,
) -> tuple[PointSet, np.ndarray]:
    """
    Map the rows of ``P`` to ``target_dim`` coordinates.

    Args:
        P: PointSet or n×d array. Weights, if any, are carried over.
        method: 'pca' (output is centered; map has orthonormal columns) or
                'gaussian_projection' (map has N(0, 1/target_dim) entries).
        target_dim: 1 <= target_dim <= d (and <= n for PCA).
        seed: Random state for the projection matrix.

    Returns:
        (reduced n×target_dim PointSet, d×target_dim map)

    Example:
        >>> Z, A = reduce_dimension(np.eye(4), "gaussian_projection", 2, seed=1)
        >>> Z.data.shape, A.shape
        ((4, 2), (4, 2))
    """
    P = as_points(P)
    if method not in REDUCE_METHODS:
        raise InvalidParameter(f"unknown reduction method {method!r}; use one of {REDUCE_METHODS}")
    if not 1 <= target_dim <= P.d:
        raise DimensionMismatch(f"target_dim must lie in [1, {P.d}], got {target_dim}")

    if method == "pca":
        if target_dim > P.n:
            raise DimensionMismatch(f"PCA to {target_dim} dims needs at least that many rows, got {P.n}")
        model = PCA(n_components=target_dim, svd_solver="full")
        reduced = model.fit_transform(P.data)
        mapping = model.components_.T
    else:
        model = GaussianRandomProjection(n_components=target_dim, random_state=seed)
        model.fit(P.data)
        mapping = np.asarray(model.components_).T
        reduced = P.data @ mapping

    logger.debug("reduce_dimension: %s %d -> %d", method, P.d, target_dim)
    return PointSet(reduced, P.weights), np.ascontiguousarray(mapping)
