"""
Sensitivity Sampling
====================

Onion peeling assigns every row an upper bound on its sensitivity: the
i-th ℓ∞-coreset peeled off the remaining rows Q gets 2·rank(Q)^1.5 / i.
Coresets are then i.i.d. samples with probability s/t and weights
u = t·w / (m·s), which makes Σ u φ(qᵀx) an unbiased estimate of
Σ w φ(pᵀx) for every query x.

Signed weights are handled by peeling the scaled rows w(p)·p of the
non-negative and negative classes separately and splitting the budget
proportionally to the class sizes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import AllPointsIdentical, InvalidParameter, InvalidSampleSize
from ..geometry.affine import DEFAULT_RANK_TOL, rank_and_basis
from ..geometry.ellipsoid import DEFAULT_EPS_MVEE, DEFAULT_MAX_ITER
from ..geometry.point_set import PointSet, as_points
from ..utils import make_rng, spawn_rngs
from .linf_coreset import inf_coreset

logger = logging.getLogger(__name__)


# =============================================================================
# RESULT TYPES
# =============================================================================

@dataclass(frozen=True)
class SensitivityMap:
    """
    Per-row sensitivity bound s, the peel iteration that produced it and
    the rank of the remaining rows at that peel. total = Σ s.
    """
    s: np.ndarray
    peel: np.ndarray
    rank: np.ndarray
    total: float

    @property
    def n(self) -> int:
        return int(self.s.size)

    def probabilities(self) -> np.ndarray:
        return self.s / self.total

    def as_dict(self) -> dict:
        return {
            "s": self.s.tolist(),
            "peel": self.peel.tolist(),
            "rank": self.rank.tolist(),
            "total": self.total,
        }


@dataclass(frozen=True)
class WeightedCoreset:
    """
    Multiset of sampled row indices (with replacement) and their weights.
    """
    indices: np.ndarray
    u: np.ndarray

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def as_dict(self) -> dict:
        return {"indices": self.indices.tolist(), "u": self.u.tolist()}

    @classmethod
    def from_dict(cls, payload: dict) -> "WeightedCoreset":
        try:
            indices = np.asarray(payload["indices"], dtype=np.intp)
            u = np.asarray(payload["u"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(f"malformed coreset document: {exc}") from exc
        if indices.shape != u.shape or indices.ndim != 1:
            raise InvalidParameter("coreset 'indices' and 'u' must be equal-length lists")
        return cls(indices=indices, u=u)


@dataclass
class ClassSplit:
    """Budget split between the non-negative and negative weight classes."""
    n_pos: int
    n_neg: int
    m_pos: int
    m_neg: int

    def as_dict(self) -> dict:
        return asdict(self)


# =============================================================================
# ONION PEELING
# =============================================================================

def onion_sensitivities(
    P,
    rank_tol: float = DEFAULT_RANK_TOL,
    eps_mvee: float = DEFAULT_EPS_MVEE,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SensitivityMap:
    """
    Sensitivity upper bounds by repeated ℓ∞-coreset peeling.

    While |Q| >= 2·rank(Q)², the coreset S_i of Q is removed and its rows
    get s = 2·rank(Q)^1.5 / i. The rows left over get the same formula with
    the rank of the residual and the final i. rank is floored at 1, so a
    residual of identical rows still receives a positive bound.

    Args:
        P: PointSet or n×d array (weights ignored; scale rows first for the
           weighted case).

    Returns:
        SensitivityMap covering every row exactly once.

    Example:
        >>> sens = onion_sensitivities([[0, 0], [1, 0], [0, 1]])
        >>> sens.peel.tolist(), round(float(sens.s[0]), 4)
        ([1, 1, 1], 5.6569)
    """
    P = as_points(P)
    n = P.n
    s = np.zeros(n)
    peel = np.zeros(n, dtype=np.int64)
    rank = np.zeros(n, dtype=np.int64)

    remaining = np.arange(n)
    i = 1
    r = 1
    while remaining.size:
        Q = P.data[remaining]
        try:
            r = rank_and_basis(Q, rank_tol).r
        except AllPointsIdentical:
            r = 1
            break
        if remaining.size < 2 * r * r:
            break

        local = inf_coreset(Q, rank_tol=rank_tol, eps_mvee=eps_mvee, max_iter=max_iter)
        rows = remaining[local]
        s[rows] = 2.0 * r ** 1.5 / i
        peel[rows] = i
        rank[rows] = r
        logger.debug("peel %d: |Q|=%d rank=%d removed %d", i, remaining.size, r, rows.size)

        remaining = np.delete(remaining, local)
        i += 1

    if remaining.size:
        s[remaining] = 2.0 * r ** 1.5 / i
        peel[remaining] = i
        rank[remaining] = r

    total = float(s.sum())
    logger.info("onion_sensitivities: n=%d peels=%d total=%.4g", n, int(peel.max()), total)
    return SensitivityMap(s=s, peel=peel, rank=rank, total=total)


def sensitivity_bound_total(n: int, r: int) -> float:
    """Ceiling 4r(r+1)·r^1.5·(1 + ln n) on the total sensitivity of n rows of rank r."""
    return 4.0 * r * (r + 1) * r ** 1.5 * (1.0 + math.log(n))


# =============================================================================
# SAMPLING
# =============================================================================

def _draw(
    sens: SensitivityMap,
    m: int,
    rng: np.random.Generator,
    w: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    indices = rng.choice(sens.n, size=m, replace=True, p=sens.probabilities())
    weight = 1.0 if w is None else w[indices]
    u = sens.total * weight / (m * sens.s[indices])
    return indices.astype(np.intp), u


def sample_coreset(P, sens: SensitivityMap, m: int, seed: int = 0) -> WeightedCoreset:
    """
    m i.i.d. draws with probability s/t and weights u = t·w / (m·s).

    Example:
        >>> P = np.eye(3)
        >>> C = sample_coreset(P, onion_sensitivities(P), m=3, seed=0)
        >>> C.u.tolist()
        [1.0, 1.0, 1.0]
    """
    P = as_points(P)
    if m < 1:
        raise InvalidSampleSize(f"sample size must be at least 1, got {m}")
    if sens.n != P.n:
        raise InvalidParameter(f"sensitivity map covers {sens.n} rows, point set has {P.n}")
    indices, u = _draw(sens, m, make_rng(seed), P.weights)
    return WeightedCoreset(indices=indices, u=u)


def split_budget(n_pos: int, n_neg: int, m: int) -> ClassSplit:
    """
    Proportional split m₊ = round(|P₊|/|P| · m), kept in [1, m-1] when both
    classes are nonempty. An empty class gets nothing.
    """
    n = n_pos + n_neg
    if n_neg == 0:
        return ClassSplit(n_pos, n_neg, m, 0)
    if n_pos == 0:
        return ClassSplit(n_pos, n_neg, 0, m)
    if m < 2:
        raise InvalidSampleSize(f"both weight classes are nonempty; need m >= 2, got {m}")
    m_pos = int(round(n_pos / n * m))
    m_pos = min(max(m_pos, 1), m - 1)
    return ClassSplit(n_pos, n_neg, m_pos, m - m_pos)


def _class_members(P: PointSet) -> list[np.ndarray]:
    w = P.w
    return [np.flatnonzero(w >= 0), np.flatnonzero(w < 0)]


def split_sensitivities(P, **peel_options) -> tuple[SensitivityMap, list[SensitivityMap], list[np.ndarray]]:
    """
    Peel the scaled rows w(p)·p of each sign class separately.

    Returns:
        (combined map over all rows, per-class maps, per-class row indices).
        Empty classes get ``None`` in the per-class list.
    """
    P = as_points(P)
    scaled = P.scaled_rows().data
    members = _class_members(P)

    s = np.zeros(P.n)
    peel = np.zeros(P.n, dtype=np.int64)
    rank = np.zeros(P.n, dtype=np.int64)
    per_class: list[SensitivityMap | None] = []
    for rows in members:
        if rows.size == 0:
            per_class.append(None)
            continue
        sens = onion_sensitivities(scaled[rows], **peel_options)
        s[rows] = sens.s
        peel[rows] = sens.peel
        rank[rows] = sens.rank
        per_class.append(sens)

    combined = SensitivityMap(s=s, peel=peel, rank=rank, total=float(s.sum()))
    return combined, per_class, members


def gen_coreset(P, m: int, seed: int = 0, sensitivities=None, **peel_options) -> WeightedCoreset:
    """
    Coreset for signed weights.

    Each sign class is peeled on its scaled rows and sampled with its own
    total: u(p) = t_class·w(p) / (m_class·s(p)). Negative-class weights
    are therefore negative. A single nonempty class reproduces
    ``sample_coreset(P, onion_sensitivities(w·P), m, seed)`` exactly.

    Args:
        P: PointSet with (signed) weights.
        m: Total sample size.
        seed: Sampling seed.
        sensitivities: Optional :func:`split_sensitivities` result for P,
                       reused across seeds.

    Raises:
        InvalidSampleSize: If m < 1, or m < 2 with both classes present.
    """
    P = as_points(P)
    if m < 1:
        raise InvalidSampleSize(f"sample size must be at least 1, got {m}")

    if sensitivities is None:
        sensitivities = split_sensitivities(P, **peel_options)
    _, per_class, members = sensitivities
    split = split_budget(members[0].size, members[1].size, m)
    budgets = [split.m_pos, split.m_neg]
    logger.info("gen_coreset: split %s", split.as_dict())

    active = [k for k in range(2) if budgets[k] > 0]
    if len(active) == 1:
        rngs = {active[0]: make_rng(seed)}
    else:
        rngs = dict(zip(active, spawn_rngs(seed, len(active))))

    all_indices, all_u = [], []
    for k in active:
        rows = members[k]
        local, u = _draw(per_class[k], budgets[k], rngs[k], P.w[rows])
        all_indices.append(rows[local])
        all_u.append(u)

    return WeightedCoreset(
        indices=np.concatenate(all_indices).astype(np.intp),
        u=np.concatenate(all_u),
    )


def merge_duplicates(coreset: WeightedCoreset) -> tuple[np.ndarray, np.ndarray]:
    """
    Collapse repeated indices by summing their weights.

    Returns:
        (sorted unique indices, summed weights)
    """
    unique, inverse = np.unique(coreset.indices, return_inverse=True)
    merged = np.zeros(unique.size)
    np.add.at(merged, inverse, coreset.u)
    return unique.astype(np.intp), merged


# =============================================================================
# SAMPLE SIZE
# =============================================================================

def sample_size_bound(
    n: int,
    d: int,
    r: int,
    mu: float,
    eps: float,
    delta: float,
    c: float = 1.0,
) -> int:
    """
    Coreset size sufficient for a (1 ± eps) guarantee with probability
    1 - delta:

        ⌈c·(mu·r^3.5·ln n / eps²)·(d·ln(max(mu·r·ln n, e)) + ln(1/delta))⌉

    floored at 1.

    Example:
        >>> sample_size_bound(1000, 10, 10, 0.0, 0.5, 0.1)
        1
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise InvalidParameter(f"eps and delta must lie in (0, 1), got eps={eps}, delta={delta}")
    if mu < 0 or not math.isfinite(mu):
        raise InvalidParameter(f"mu must be finite and non-negative, got {mu}")
    if not c > 0:
        raise InvalidParameter(f"c must be positive, got {c}")
    if n < 1 or d < 1 or r < 1:
        raise InvalidParameter(f"n, d and r must be at least 1, got n={n}, d={d}, r={r}")

    log_n = math.log(n)
    lead = mu * r ** 3.5 * log_n / eps ** 2
    tail = d * math.log(max(mu * r * log_n, math.e)) + math.log(1.0 / delta)
    return max(1, math.ceil(c * lead * tail))
