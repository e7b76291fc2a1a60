"""Point-set linear algebra: affine rank, projection, Löwner ellipsoids, reduction."""

from .affine import AffineBasis, affine_rank, lift, project, rank_and_basis
from .ellipsoid import Ellipsoid, mvee, shrunk_vertices
from .point_set import PointSet, as_points
from .reduction import REDUCE_METHODS, reduce_dimension

__all__ = [
    "AffineBasis",
    "Ellipsoid",
    "PointSet",
    "REDUCE_METHODS",
    "affine_rank",
    "as_points",
    "lift",
    "mvee",
    "project",
    "rank_and_basis",
    "reduce_dimension",
    "shrunk_vertices",
]
