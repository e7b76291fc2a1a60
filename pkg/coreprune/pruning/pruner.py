"""
Neuron Pruning
==============

Coreset-based neuron pruning of fully-connected networks.

Each neuron of layer ℓ is the point p_i = [W_i, b_i]. For every neuron j of
the next layer, its incoming weights w_j turn layer ℓ into the signed query
space {w_j(i)·p_i}; a neuron's sensitivity is the maximum over j of its
sign-split onion-peeling bound. Sampling m neurons with probability s/t and
scaling the next layer's matching columns by u = t/(m·s) keeps every next
pre-activation an unbiased estimate of the original.

Usage:
------
    from coreprune.pruning import prune_network

    pruned, report = prune_network(net, [30, 10], seed=0)
    print(report.pr_percent)
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from ..activation import get_activation
from ..coresets.sensitivity import (
    SensitivityMap,
    WeightedCoreset,
    merge_duplicates,
    sample_coreset,
    split_sensitivities,
)
from ..errors import DimensionMismatch, InvalidParameter, InvalidSampleSize, NoConvergence
from ..geometry.point_set import PointSet
from ..geometry.reduction import reduce_dimension
from ..utils import derive_seeds, make_rng
from .network import LayerSpec, NetworkSpec, parameter_count, pruning_ratio

logger = logging.getLogger(__name__)

# Probes whose reference pre-activation norm falls below this are skipped
PROBE_FLOOR: float = 1e-12

# Draw cap, as a multiple of the layer width, when pruning to an exact width
MAX_DRAWS_FACTOR: int = 64


# =============================================================================
# DATA MODEL
# =============================================================================

@dataclass
class LayerReport:
    layer: int
    kept: int
    total: int
    kept_indices: list[int]
    u: list[float]
    pr_percent: float = 0.0
    err_mean: float = 0.0
    err_max: float = 0.0
    draws: int = 0

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass
class PruneReport:
    layers: list[LayerReport] = field(default_factory=list)
    params_before: int = 0
    params_after: int = 0
    pr_percent: float = 0.0
    seed: int = 0

    def as_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "PruneReport":
        data = dict(payload)
        data["layers"] = [LayerReport(**layer) for layer in data.get("layers", [])]
        return cls(**data)


@dataclass(frozen=True)
class PrunedLayer:
    layer: LayerSpec
    next_layer: LayerSpec
    kept: np.ndarray
    u: np.ndarray


# =============================================================================
# SENSITIVITIES
# =============================================================================

def neuron_sensitivities(
    layer: LayerSpec,
    next_layer: LayerSpec,
    reduce_method: str | None = None,
    reduce_dim: int | None = None,
    seed: int = 0,
    **peel_options,
) -> SensitivityMap:
    """
    Per-neuron sensitivity: elementwise max over next-layer neurons j of the
    sign-split onion bounds of {w_j(i)·p_i}.

    Args:
        layer: Layer whose neurons are scored.
        next_layer: Consumer of ``layer``'s outputs.
        reduce_method: Optional 'pca' / 'gaussian_projection' applied to the
                       neuron points first.
        reduce_dim: Target dimension for ``reduce_method``.
        seed: Seed for the random projection.

    Returns:
        SensitivityMap over the neurons of ``layer``.
    """
    if next_layer.n_in != layer.n_out:
        raise DimensionMismatch(
            f"next layer expects {next_layer.n_in} inputs, layer has {layer.n_out} neurons"
        )

    points = layer.neuron_points()
    if reduce_method is not None:
        if reduce_dim is None:
            raise InvalidParameter("reduce_dim is required with reduce_method")
        reduced, _ = reduce_dimension(points, reduce_method, int(reduce_dim), seed=seed)
        points = reduced.data

    n = layer.n_out
    s = np.zeros(n)
    peel = np.zeros(n, dtype=np.int64)
    rank = np.zeros(n, dtype=np.int64)
    seen: dict[bytes, SensitivityMap] = {}
    for j in range(next_layer.n_out):
        w = next_layer.W[j]
        key = w.tobytes()
        if key not in seen:
            seen[key], _, _ = split_sensitivities(PointSet(points, weights=w), **peel_options)
        sens = seen[key]
        better = sens.s > s
        s[better] = sens.s[better]
        peel[better] = sens.peel[better]
        rank[better] = sens.rank[better]

    logger.info("neuron_sensitivities: %d neurons, %d weight functions, t=%.4g", n, next_layer.n_out, s.sum())
    return SensitivityMap(s=s, peel=peel, rank=rank, total=float(s.sum()))


# =============================================================================
# PRUNING
# =============================================================================

def prune_layer(
    layer: LayerSpec,
    next_layer: LayerSpec,
    m: int,
    seed: int = 0,
    sensitivities: SensitivityMap | None = None,
    **sensitivity_options,
) -> PrunedLayer:
    """
    Keep a sampled coreset of ``layer``'s neurons and absorb the weights into
    ``next_layer``.

    Duplicate draws are merged by summing u. A budget equal to the width
    keeps every neuron with u = 1; a larger one is clamped with a warning.

    Args:
        layer, next_layer: Consecutive layers.
        m: Number of i.i.d. draws (>= 1).
        seed: Sampling seed.
        sensitivities: Precomputed :func:`neuron_sensitivities` result.

    Returns:
        PrunedLayer with the rewritten pair, kept indices and merged u.
    """
    if m < 1:
        raise InvalidSampleSize(f"budget must be at least 1, got {m}")
    n = layer.n_out
    if m > n:
        logger.warning("budget %d exceeds layer width %d; keeping every neuron", m, n)
        m = n

    if m == n:
        kept = np.arange(n, dtype=np.intp)
        u = np.ones(n)
    else:
        sensitivities = _layer_sensitivities(layer, next_layer, seed, sensitivities, sensitivity_options)
        kept, u = _sample_neurons(layer, sensitivities, m, seed)

    logger.debug("prune_layer: %d -> %d neurons (m=%d)", n, kept.size, m)
    return _rewire(layer, next_layer, kept, u)


def prune_layer_to_width(
    layer: LayerSpec,
    next_layer: LayerSpec,
    width: int,
    seed: int = 0,
    sensitivities: SensitivityMap | None = None,
    max_draws: int | None = None,
    **sensitivity_options,
) -> tuple[PrunedLayer, int]:
    """
    Prune ``layer`` to exactly ``width`` distinct neurons.

    Finds the smallest number of i.i.d. draws m whose merged coreset under
    ``seed`` keeps ``width`` neurons.

    Returns:
        (PrunedLayer, m)

    Raises:
        NoConvergence: ``width`` distinct neurons not reached within
                       ``max_draws`` (default 64 x layer width).
    """
    if width < 1:
        raise InvalidSampleSize(f"width must be at least 1, got {width}")
    n = layer.n_out
    if width >= n:
        if width > n:
            logger.warning("width %d exceeds layer width %d; keeping every neuron", width, n)
        return prune_layer(layer, next_layer, n, seed=seed), n

    sensitivities = _layer_sensitivities(layer, next_layer, seed, sensitivities, sensitivity_options)
    points = layer.neuron_points()
    cap = max_draws if max_draws is not None else MAX_DRAWS_FACTOR * n

    def distinct(m: int) -> int:
        return int(np.unique(sample_coreset(points, sensitivities, m, seed=seed).indices).size)

    # distinct() is non-decreasing in m: a seeded stream of m draws is a prefix of m + 1 draws
    lo, hi = width - 1, width
    while distinct(hi) < width:
        if hi >= cap:
            raise NoConvergence(f"{width} distinct neurons not reached within {cap} draws")
        lo, hi = hi, min(2 * hi, cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if distinct(mid) >= width:
            hi = mid
        else:
            lo = mid

    kept, u = _sample_neurons(layer, sensitivities, hi, seed)
    logger.debug("prune_layer_to_width: %d -> %d neurons (m=%d)", n, kept.size, hi)
    return _rewire(layer, next_layer, kept, u), hi


def _layer_sensitivities(
    layer: LayerSpec,
    next_layer: LayerSpec,
    seed: int,
    sensitivities: SensitivityMap | None,
    options: dict[str, Any],
) -> SensitivityMap:
    if sensitivities is None:
        return neuron_sensitivities(layer, next_layer, seed=seed, **options)
    if sensitivities.n != layer.n_out:
        raise DimensionMismatch(f"sensitivities cover {sensitivities.n} neurons, layer has {layer.n_out}")
    return sensitivities


def _sample_neurons(
    layer: LayerSpec, sensitivities: SensitivityMap, m: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    coreset: WeightedCoreset = sample_coreset(layer.neuron_points(), sensitivities, m, seed=seed)
    return merge_duplicates(coreset)


def _rewire(layer: LayerSpec, next_layer: LayerSpec, kept: np.ndarray, u: np.ndarray) -> PrunedLayer:
    pruned = LayerSpec(layer.W[kept], layer.b[kept], layer.activation)
    rewired = LayerSpec(next_layer.W[:, kept] * u, next_layer.b, next_layer.activation)
    return PrunedLayer(layer=pruned, next_layer=rewired, kept=kept, u=u)


def layer_output_error(
    layer: LayerSpec,
    next_layer: LayerSpec,
    pruned: PrunedLayer,
    probes: np.ndarray,
) -> tuple[float, float]:
    """
    Relative error of the next layer's weighted sum (pre-activation minus
    bias) on probe inputs: ‖z' - z‖₂ / ‖z‖₂ per probe, as (mean, max).
    """
    phi = get_activation(layer.activation)
    reference = phi(layer.pre_activation(probes)) @ next_layer.W.T
    approx = phi(pruned.layer.pre_activation(probes)) @ pruned.next_layer.W.T

    norms = np.linalg.norm(reference, axis=1)
    valid = norms >= PROBE_FLOOR
    if not np.any(valid):
        return 0.0, 0.0
    errors = np.linalg.norm(approx[valid] - reference[valid], axis=1) / norms[valid]
    return float(errors.mean()), float(errors.max())


def prune_network(
    net: NetworkSpec,
    per_layer_m: Sequence[int],
    seed: int = 0,
    probe_inputs: int = 1000,
    reduce_method: str | None = None,
    reduce_dim: int | None = None,
    sensitivities: Sequence[SensitivityMap | None] | None = None,
    match_widths: bool = False,
) -> tuple[NetworkSpec, PruneReport]:
    """
    Prune every hidden layer in order, starting from the first.

    Args:
        net: Network to prune.
        per_layer_m: One budget per layer except the output layer: draws, or
                     kept widths when ``match_widths`` is set.
        seed: Root seed; per-layer sampling and probe seeds derive from it.
        probe_inputs: Standard normal probes per layer for error stats.
        reduce_method, reduce_dim: Optional neuron-point preprocessing.
        sensitivities: Optional precomputed maps, one per prunable layer,
                       valid for the layer as it is reached (i.e. computed on
                       the already-rewired network).
        match_widths: Prune each layer to exactly its budget in distinct
                      neurons (:func:`prune_layer_to_width`).

    Returns:
        (pruned network, report)
    """
    layers = list(net.layers)
    if len(per_layer_m) != len(layers) - 1:
        raise InvalidParameter(
            f"need {len(layers) - 1} budgets (one per hidden layer), got {len(per_layer_m)}"
        )
    if sensitivities is not None and len(sensitivities) != len(layers) - 1:
        raise InvalidParameter("sensitivities must align with the budgets")

    seeds = derive_seeds(seed, 2 * len(per_layer_m))
    reports: list[LayerReport] = []
    for k, m in enumerate(per_layer_m):
        layer, next_layer = layers[k], layers[k + 1]
        precomputed = None if sensitivities is None else sensitivities[k]
        options = {"reduce_method": reduce_method, "reduce_dim": reduce_dim}
        if match_widths:
            pruned, draws = prune_layer_to_width(
                layer, next_layer, int(m), seed=seeds[2 * k], sensitivities=precomputed, **options
            )
        else:
            pruned = prune_layer(
                layer, next_layer, int(m), seed=seeds[2 * k], sensitivities=precomputed, **options
            )
            draws = min(int(m), layer.n_out)

        probes = make_rng(seeds[2 * k + 1]).standard_normal((probe_inputs, layer.n_in))
        err_mean, err_max = layer_output_error(layer, next_layer, pruned, probes)

        layers[k], layers[k + 1] = pruned.layer, pruned.next_layer
        reports.append(LayerReport(
            layer=k,
            kept=int(pruned.kept.size),
            total=layer.n_out,
            kept_indices=[int(i) for i in pruned.kept],
            u=[float(v) for v in pruned.u],
            err_mean=err_mean,
            err_max=err_max,
            draws=draws,
        ))
        logger.info("layer %d: kept %d/%d from %d draws, err mean %.4g max %.4g",
                    k, pruned.kept.size, layer.n_out, draws, err_mean, err_max)

    pruned_net = NetworkSpec.of(layers)
    for report, original, final in zip(reports, net.layers, pruned_net.layers):
        report.pr_percent = pruning_ratio(original.parameter_count, final.parameter_count)

    before = parameter_count(net)
    after = parameter_count(pruned_net)
    return pruned_net, PruneReport(
        layers=reports,
        params_before=before,
        params_after=after,
        pr_percent=pruning_ratio(before, after),
        seed=seed,
    )
