"""Carathéodory sets, ℓ∞-coresets and sensitivity-sampled coresets."""

from .caratheodory import ConvexDecomposition, cara, lp_decompose, sparsify
from .linf_coreset import inf_coreset, ratio_diagnostic
from .sensitivity import (
    ClassSplit,
    SensitivityMap,
    WeightedCoreset,
    gen_coreset,
    merge_duplicates,
    onion_sensitivities,
    sample_coreset,
    sample_size_bound,
    sensitivity_bound_total,
    split_budget,
    split_sensitivities,
)

__all__ = [
    "ClassSplit",
    "ConvexDecomposition",
    "SensitivityMap",
    "WeightedCoreset",
    "cara",
    "gen_coreset",
    "inf_coreset",
    "lp_decompose",
    "merge_duplicates",
    "onion_sensitivities",
    "ratio_diagnostic",
    "sample_coreset",
    "sample_size_bound",
    "sensitivity_bound_total",
    "sparsify",
    "split_budget",
    "split_sensitivities",
]
