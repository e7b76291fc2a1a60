"""
Point Sets
==========

Immutable n×d point matrices with optional per-row weights. Row i is
point p_i (one neuron's incoming weights, bias appended when pruning).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, InvalidParameter


@dataclass(frozen=True)
class PointSet:
    """
    n×d matrix of points plus a length-n weight vector (default all 1).

    Example:
        >>> P = PointSet.of([[0, 0], [1, 0], [2, 0]])
        >>> P.n, P.d
        (3, 2)
    """
    data: np.ndarray
    weights: np.ndarray | None = field(default=None)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim == 1:
            data = data.reshape(-1, 1)
        if data.ndim != 2:
            raise DimensionMismatch(f"points must be a 2-D matrix, got ndim={data.ndim}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidParameter(f"point set must be nonempty, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidParameter("point set contains non-finite entries")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

        if self.weights is not None:
            w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
            if w.shape[0] != data.shape[0]:
                raise DimensionMismatch(
                    f"weights have length {w.shape[0]}, expected {data.shape[0]}"
                )
            if not np.all(np.isfinite(w)):
                raise InvalidParameter("weights contain non-finite entries")
            w.setflags(write=False)
            object.__setattr__(self, "weights", w)

    @classmethod
    def of(cls, data, weights=None) -> "PointSet":
        if isinstance(data, PointSet):
            return data if weights is None else cls(data.data, weights)
        return cls(np.asarray(data, dtype=np.float64), weights)

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    @property
    def d(self) -> int:
        return int(self.data.shape[1])

    @property
    def w(self) -> np.ndarray:
        """Weights, materialised as ones when absent."""
        if self.weights is None:
            return np.ones(self.n)
        return self.weights

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def scale(self) -> float:
        """Largest row 2-norm; 0.0 for an all-zero set."""
        return float(np.max(np.linalg.norm(self.data, axis=1)))

    def scaled_rows(self) -> "PointSet":
        """Unweighted set of rows w(p)·p."""
        return PointSet(self.data * self.w[:, None])

    def __len__(self) -> int:
        return self.n


def as_points(P) -> PointSet:
    """Accept a PointSet or anything numpy can turn into a matrix."""
    return PointSet.of(P)
