"""
Activation Costs
================

Activation functions and the quantities measured with them:

- layer_cost: Σ w(p) φ(pᵀx), the output of one neuron fed by the points
- coreset_rel_error: |1 - coreset cost / full cost| over a batch of queries
- complexity_estimate: certified lower bound on the regression complexity
  measure μ(P) (negative-side over positive-side mass, maximised over x)
- nice hinge family: L-Lipschitz φ within a₁ of ReLU with φ >= a₂ on z >= 0

Usage:
------
    from coreprune.activation import get_activation, layer_cost

    relu = get_activation("relu")
    cost = layer_cost(P, x, relu)
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import AllQueriesDegenerate, DimensionMismatch, InvalidParameter, NoValidQuery
from .geometry.point_set import as_points
from .utils import make_rng

logger = logging.getLogger(__name__)


# =============================================================================
# CONSTANTS
# =============================================================================

# Denominators below this are treated as zero and the query is skipped
DENOMINATOR_FLOOR: float = 1e-12

INV_GOLDEN: float = (math.sqrt(5.0) - 1.0) / 2.0


# =============================================================================
# ACTIVATION FUNCTIONS
# =============================================================================

def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def hinge(z: np.ndarray) -> np.ndarray:
    return np.maximum(1.0 + z, 0.0)


def softplus(z: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, z)


def absolute(z: np.ndarray) -> np.ndarray:
    return np.abs(z)


def identity(z: np.ndarray) -> np.ndarray:
    return np.asarray(z, dtype=np.float64)


@dataclass(frozen=True)
class ActivationKind:
    """
    A named activation, with (L, a₁, a₂) when it is a nice hinge function.
    """
    tag: str
    fn: Callable[[np.ndarray], np.ndarray]
    L: float | None = None
    a1: float | None = None
    a2: float | None = None

    def __call__(self, z) -> np.ndarray:
        return self.fn(np.asarray(z, dtype=np.float64))

    @property
    def is_nice(self) -> bool:
        return self.L is not None

    def lower_bound_constant(self) -> float:
        """min(a₂ / 2a₁, 1/2): positive-side mass fraction φ is guaranteed to keep."""
        if not self.is_nice:
            raise InvalidParameter(f"activation {self.tag!r} is not a nice hinge function")
        return min(self.a2 / (2.0 * self.a1), 0.5)


ACTIVATIONS: dict[str, ActivationKind] = {
    "relu": ActivationKind("relu", relu),
    "hinge": ActivationKind("hinge", hinge, L=1.0, a1=1.0, a2=1.0),
    "logloss": ActivationKind("logloss", softplus, L=1.0, a1=math.log(2.0), a2=math.log(2.0)),
    "softplus": ActivationKind("softplus", softplus, L=1.0, a1=math.log(2.0), a2=math.log(2.0)),
    "abs": ActivationKind("abs", absolute),
    "linear": ActivationKind("linear", identity),
}

# Tags accepted for coreset evaluation (linear is only for output layers)
COST_TAGS: tuple[str, ...] = ("relu", "hinge", "logloss", "softplus", "abs")


def get_activation(tag: str | ActivationKind) -> ActivationKind:
    if isinstance(tag, ActivationKind):
        return tag
    try:
        return ACTIVATIONS[str(tag).lower()]
    except KeyError:
        raise InvalidParameter(
            f"unknown activation {tag!r}; expected one of {sorted(ACTIVATIONS)}"
        ) from None


# =============================================================================
# COSTS AND ERRORS
# =============================================================================

def layer_cost(P, x, phi="relu") -> float:
    """
    Σᵢ wᵢ·φ(pᵢᵀx) with w defaulting to 1.

    Example:
        >>> layer_cost([[1, 0], [-1, 0]], [1, 0], "relu")
        1.0
    """
    P = as_points(P)
    phi = get_activation(phi)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != P.d:
        raise DimensionMismatch(f"query has length {x.size}, points have d={P.d}")
    return float(P.w @ phi(P.data @ x))


def _coreset_costs(P, indices, u, queries, phi) -> tuple[np.ndarray, np.ndarray]:
    full = phi(P.data @ queries.T).T @ P.w
    approx = phi(P.data[indices] @ queries.T).T @ u
    return full, approx


@dataclass
class ErrorStats:
    """Relative coreset error over a query batch."""
    max: float
    mean: float
    evaluated: int
    skipped: int

    def as_dict(self) -> dict:
        return asdict(self)


def coreset_rel_error(P, coreset, queries, phi="relu") -> ErrorStats:
    """
    Per-query |1 - Σ_C u φ(qᵀx) / Σ_P w φ(pᵀx)|, aggregated to max / mean.

    Args:
        P: Full point set (weights used when present).
        coreset: Object with ``indices`` and ``u`` (e.g. WeightedCoreset).
        queries: k×d matrix, one query per row.
        phi: Activation tag or ActivationKind.

    Raises:
        AllQueriesDegenerate: If every denominator is below 1e-12.
    """
    P = as_points(P)
    phi = get_activation(phi)
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    if queries.shape[0] == 0:
        raise InvalidParameter("query batch is empty")
    if queries.shape[1] != P.d:
        raise DimensionMismatch(f"queries have d={queries.shape[1]}, points have d={P.d}")
    indices = np.asarray(coreset.indices, dtype=np.intp)
    u = np.asarray(coreset.u, dtype=np.float64)

    full, approx = _coreset_costs(P, indices, u, queries, phi)
    valid = np.abs(full) >= DENOMINATOR_FLOOR
    skipped = int(np.count_nonzero(~valid))
    if not np.any(valid):
        raise AllQueriesDegenerate(f"all {queries.shape[0]} queries have a zero full cost")
    if skipped:
        logger.info("coreset_rel_error: skipped %d degenerate queries", skipped)

    errors = np.abs(1.0 - approx[valid] / full[valid])
    return ErrorStats(
        max=float(errors.max()),
        mean=float(errors.mean()),
        evaluated=int(errors.size),
        skipped=skipped,
    )


def gaussian_queries(d: int, count: int, seed: int = 0) -> np.ndarray:
    """Standard normal query batch (count×d)."""
    return make_rng(seed).standard_normal((count, d))


# =============================================================================
# COMPLEXITY MEASURE
# =============================================================================

def query_ratio(P, x) -> float | None:
    """
    (Σ_{qᵀx <= 0} |qᵀx|) / (Σ_{qᵀx > 0} qᵀx), or None when the positive
    side is (numerically) empty.
    """
    P = as_points(P)
    z = P.data @ np.asarray(x, dtype=np.float64)
    positive = z[z > 0].sum()
    if positive < DENOMINATOR_FLOOR:
        return None
    return float(-z[z <= 0].sum() / positive)


@dataclass
class ComplexityEstimate:
    """Lower bound on μ(P) and the query that attains it."""
    mu_hat: float
    query: list[float]
    evaluated: int
    skipped: int
    refine_steps: int

    def as_dict(self) -> dict:
        return asdict(self)


def complexity_estimate(P, n_random: int = 200, refine_steps: int = 40, seed: int = 0) -> ComplexityEstimate:
    """
    Certified lower bound μ̂ on the regression complexity measure.

    ``n_random`` standard normal queries are scored with :func:`query_ratio`;
    the best one is then refined by golden-section search on its bias
    (last) coordinate over the interval spanned by the points' sign-change
    breakpoints. μ̂ is a running maximum, so it never decreases with more
    refinement steps.

    Raises:
        InvalidParameter: If some row does not end in 1.
        NoValidQuery: If no sampled query has a nonempty positive side.
    """
    P = as_points(P)
    if n_random < 1:
        raise InvalidParameter(f"n_random must be at least 1, got {n_random}")
    if refine_steps < 0:
        raise InvalidParameter(f"refine_steps must be non-negative, got {refine_steps}")
    if not np.allclose(P.data[:, -1], 1.0, rtol=0.0, atol=1e-12):
        raise InvalidParameter("every row must end in the bias coordinate 1")

    rng = make_rng(seed)
    X = rng.standard_normal((n_random, P.d))

    best, best_x = -math.inf, None
    skipped = 0
    for x in X:
        ratio = query_ratio(P, x)
        if ratio is None:
            skipped += 1
        elif ratio > best:
            best, best_x = ratio, x
    if best_x is None:
        raise NoValidQuery(f"none of {n_random} random queries has a positive side")

    evaluated = n_random - skipped
    state = {"best": best, "x": best_x.copy(), "evaluated": evaluated, "skipped": skipped}

    def score(t: float) -> float:
        x = best_x.copy()
        x[-1] = t
        ratio = query_ratio(P, x)
        if ratio is None:
            state["skipped"] += 1
            return -math.inf
        state["evaluated"] += 1
        if ratio > state["best"]:
            state["best"], state["x"] = ratio, x
        return ratio

    breakpoints = -(P.data[:, :-1] @ best_x[:-1])
    a, b = float(breakpoints.min()), float(breakpoints.max())
    if refine_steps > 0 and b > a:
        c = b - INV_GOLDEN * (b - a)
        d = a + INV_GOLDEN * (b - a)
        fc, fd = score(c), score(d)
        for _ in range(refine_steps - 1):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - INV_GOLDEN * (b - a)
                fc = score(c)
            else:
                a, c, fc = c, d, fd
                d = a + INV_GOLDEN * (b - a)
                fd = score(d)

    logger.debug("complexity_estimate: mu_hat=%.4g after %d steps", state["best"], refine_steps)
    return ComplexityEstimate(
        mu_hat=float(state["best"]),
        query=[float(v) for v in state["x"]],
        evaluated=state["evaluated"],
        skipped=state["skipped"],
        refine_steps=refine_steps,
    )


# =============================================================================
# NICE HINGE FUNCTIONS
# =============================================================================

@dataclass
class NiceHingeResidual:
    """Worst observed values of the three nice-hinge properties on a grid."""
    lipschitz: float
    relu_gap: float
    floor: float

    def satisfies(self, phi: ActivationKind, tol: float = 1e-6) -> bool:
        return (
            self.lipschitz <= phi.L + tol
            and self.relu_gap <= phi.a1 + tol
            and self.floor >= phi.a2 - tol
        )

    def as_dict(self) -> dict:
        return asdict(self)


def nice_hinge_check(phi, grid=None) -> NiceHingeResidual:
    """
    Evaluate finite-difference slope, max |φ - relu| and min φ on z >= 0.

    Args:
        phi: Activation tag or ActivationKind.
        grid: Sorted 1-D sample points (default 100 001 points on [-50, 50]).
    """
    phi = get_activation(phi)
    z = np.linspace(-50.0, 50.0, 100_001) if grid is None else np.asarray(grid, dtype=np.float64)
    values = phi(z)
    slopes = np.abs(np.diff(values) / np.diff(z))
    nonneg = values[z >= 0]
    return NiceHingeResidual(
        lipschitz=float(slopes.max()) if slopes.size else 0.0,
        relu_gap=float(np.max(np.abs(values - relu(z)))),
        floor=float(nonneg.min()) if nonneg.size else math.inf,
    )


def nice_lower_bound(P, x, phi, mu_hat: float) -> float:
    """
    min(a₂/2a₁, 1/2)·Σ|qᵀx| / (μ̂ + 1), which Σ φ(pᵀx) is at least whenever
    μ̂ bounds the complexity ratio of x.
    """
    P = as_points(P)
    phi = get_activation(phi)
    mass = float(np.abs(P.data @ np.asarray(x, dtype=np.float64)).sum())
    return phi.lower_bound_constant() * mass / (mu_hat + 1.0)


def restricted_query_mask(P, X, phi, r: float) -> np.ndarray:
    """
    Boolean mask over the rows of ``X``: True when φ(pᵀx) <= r|pᵀx| for
    every point p.
    """
    P = as_points(P)
    phi = get_activation(phi)
    Z = P.data @ np.atleast_2d(np.asarray(X, dtype=np.float64)).T
    return np.all(phi(Z) <= r * np.abs(Z), axis=0)
