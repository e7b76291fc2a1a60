"""
CorePrune
=========

Data-independent coresets for neural-network layers and the neuron pruning
built on top of them.

Features:
---------
- Affine rank / projection, Löwner (minimum-volume) ellipsoids, PCA and
  Gaussian random projection preprocessing
- Carathéodory decompositions via a self-contained Phase-1 simplex
- Deterministic ℓ∞-coresets and onion-peeling sensitivity bounds
- i.i.d. sensitivity sampling, including signed (weighted) inputs
- Activation-cost error measurement and complexity-measure estimation
- Neuron pruning of fully-connected networks stored as NPY + JSON manifests

Usage:
------
All features are library calls; the same operations run on-demand via CLI:

    python -m coreprune.cli mvee P.npy
    python -m coreprune.cli linf P.npy --trials 1000
    python -m coreprune.cli coreset P.npy -m 100 --seed 7
    python -m coreprune.cli prune net.json --budgets 30,10

Architecture:
-------------
- geometry/    : point sets, affine basis, MVEE, dimensionality reduction
- coresets/    : Carathéodory, ℓ∞-coreset, sensitivity sampling
- activation.py: activation costs, coreset error, complexity measure
- pruning/     : network model, neuron sensitivities, pruning
- artifacts/   : NPY arrays, network manifests, reports
- cli.py       : Command-line interface
- config.py    : Module configuration loader
"""

__version__ = "0.3.0"

from pathlib import Path

MODULE_ROOT = Path(__file__).parent
PROJECT_ROOT = MODULE_ROOT.parent
