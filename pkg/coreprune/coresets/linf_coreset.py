"""
ℓ∞-Coresets
===========

Deterministic subset S of the rows of P such that for every query
(X, v) the largest ‖(q - v)X‖₁ over S is within a factor 2r^1.5 of the
largest over all of P (r = affine rank of P). |S| <= 2r(r+1).

Pipeline: affine basis -> project -> Löwner ellipsoid -> the 2r vertices
of its (1/r)-shrunk copy -> Carathéodory set of each vertex -> union.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..errors import Infeasible, InvalidParameter, NoConvergence
from ..geometry.affine import DEFAULT_RANK_TOL, project, rank_and_basis
from ..geometry.ellipsoid import DEFAULT_EPS_MVEE, DEFAULT_MAX_ITER, mvee, shrunk_vertices
from ..geometry.point_set import as_points
from ..utils import make_rng
from .caratheodory import DEFAULT_FEASIBILITY_TOL, cara

logger = logging.getLogger(__name__)

# Below this both maxima count as zero and the trial is skipped
ZERO_DENOMINATOR: float = 1e-12


def inf_coreset(
    P,
    rank_tol: float = DEFAULT_RANK_TOL,
    eps_mvee: float = DEFAULT_EPS_MVEE,
    max_iter: int = DEFAULT_MAX_ITER,
    feasibility_tol: float = DEFAULT_FEASIBILITY_TOL,
) -> np.ndarray:
    """
    Sorted, deduplicated row indices of an ℓ∞-coreset of ``P``.

    Args:
        P: PointSet or n×d array (weights are ignored).
        rank_tol: Numerical-rank cutoff.
        eps_mvee: Ellipsoid gap target; retried once at 10x on NoConvergence.
        max_iter: Ellipsoid iteration cap.
        feasibility_tol: Carathéodory LP tolerance.

    Returns:
        1-D int array, a subset of range(n) of size <= 2r(r+1).

    Raises:
        AllPointsIdentical: If the rows have affine rank 0 (n >= 2).

    Example:
        >>> inf_coreset([[0, 0], [1, 0], [0, 1]]).tolist()
        [0, 1, 2]
    """
    P = as_points(P)
    if P.n == 1:
        logger.warning("inf_coreset called on a single point; returning it")
        return np.array([0], dtype=np.intp)

    basis = rank_and_basis(P, rank_tol)
    r = basis.r
    coords = project(P, basis).data

    # relative tolerances downstream
    scale = float(np.max(np.linalg.norm(coords, axis=1)))
    coords = coords / scale

    try:
        E = mvee(coords, eps_mvee=eps_mvee, max_iter=max_iter)
    except NoConvergence:
        logger.warning("mvee did not converge at eps=%g; retrying at %g", eps_mvee, 10 * eps_mvee)
        eps_mvee = min(10 * eps_mvee, 0.5)
        E = mvee(coords, eps_mvee=eps_mvee, max_iter=max_iter)

    selected: set[int] = set()
    for vertex in shrunk_vertices(E, 1.0 / r):
        try:
            decomposition = cara(vertex, coords, feasibility_tol=feasibility_tol)
        except Infeasible:
            contracted = E.c + (1.0 - 10.0 * eps_mvee) * (vertex - E.c)
            logger.info("vertex on the hull boundary; contracting toward the centre")
            decomposition = cara(contracted, coords, feasibility_tol=feasibility_tol)
        selected.update(int(i) for i in decomposition.indices)

    S = np.array(sorted(selected), dtype=np.intp)
    logger.debug("inf_coreset: n=%d r=%d |S|=%d", P.n, r, S.size)
    return S


def ratio_diagnostic(
    P,
    S,
    trials: int = 1000,
    j: int = 1,
    seed: int = 0,
) -> float:
    """
    Largest observed max_{q∈P} ‖(q - v)X‖₁ / max_{q∈S} ‖(q - v)X‖₁ over
    ``trials`` random (X ∈ ℝ^{d×j}, v ∈ ℝ^d) with standard normal entries.

    Trials where both maxima fall below 1e-12 are skipped. Returns 1.0 when
    every trial is skipped and inf as soon as only the coreset maximum
    vanishes. Requires 1 <= j <= d - 1.
    """
    P = as_points(P)
    S = np.asarray(S, dtype=np.intp)
    if trials < 1:
        raise InvalidParameter(f"trials must be at least 1, got {trials}")
    if not 1 <= j <= P.d - 1:
        raise InvalidParameter(f"j must lie in [1, d - 1] = [1, {P.d - 1}], got {j}")
    if S.size == 0:
        raise InvalidParameter("coreset index set is empty")

    rng = make_rng(seed)
    worst = 1.0
    skipped = 0
    for _ in range(trials):
        X = rng.standard_normal((P.d, j))
        v = rng.standard_normal(P.d)
        costs = np.abs((P.data - v) @ X).sum(axis=1)
        full = float(costs.max())
        sub = float(costs[S].max())
        if full < ZERO_DENOMINATOR and sub < ZERO_DENOMINATOR:
            skipped += 1
            continue
        if sub < ZERO_DENOMINATOR:
            logger.warning("ratio_diagnostic: coreset cost vanishes where the full cost is %.3g", full)
            return math.inf
        worst = max(worst, full / sub)

    if skipped:
        logger.info("ratio_diagnostic skipped %d zero-denominator trials", skipped)
    return worst
