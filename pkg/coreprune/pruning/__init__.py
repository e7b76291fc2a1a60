"""Fully-connected network model and coreset-based neuron pruning."""

from .network import (
    LayerSpec,
    NetworkSpec,
    budgets_for_ratio,
    forward,
    forward_trace,
    parameter_count,
    pruned_parameter_count,
    pruning_ratio,
)
from .pruner import (
    LayerReport,
    PrunedLayer,
    PruneReport,
    layer_output_error,
    neuron_sensitivities,
    prune_layer,
    prune_layer_to_width,
    prune_network,
)

__all__ = [
    "LayerReport",
    "LayerSpec",
    "NetworkSpec",
    "PruneReport",
    "PrunedLayer",
    "budgets_for_ratio",
    "forward",
    "forward_trace",
    "layer_output_error",
    "neuron_sensitivities",
    "parameter_count",
    "prune_layer",
    "prune_layer_to_width",
    "prune_network",
    "pruned_parameter_count",
    "pruning_ratio",
]
