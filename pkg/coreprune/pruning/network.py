"""
Network Model
=============

Fully-connected networks as ordered, dimension-chained layers. Layer k
maps x ↦ φ(W x + b); the output layer uses the 'linear' activation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..activation import get_activation
from ..errors import DimensionMismatch, InvalidParameter


# =============================================================================
# DATA MODEL
# =============================================================================

@dataclass(frozen=True)
class LayerSpec:
    W: np.ndarray
    b: np.ndarray
    activation: str = "relu"

    def __post_init__(self):
        W = np.array(self.W, dtype=np.float64)
        b = np.array(self.b, dtype=np.float64).reshape(-1)
        if W.ndim != 2 or W.shape[0] < 1 or W.shape[1] < 1:
            raise DimensionMismatch(f"weight matrix must be n_out×n_in with both >= 1, got {W.shape}")
        if b.size != W.shape[0]:
            raise DimensionMismatch(f"bias has length {b.size}, weights have n_out={W.shape[0]}")
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise InvalidParameter("layer contains non-finite parameters")
        get_activation(self.activation)
        W.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "b", b)

    @property
    def n_out(self) -> int:
        return int(self.W.shape[0])

    @property
    def n_in(self) -> int:
        return int(self.W.shape[1])

    @property
    def parameter_count(self) -> int:
        return self.n_out * (self.n_in + 1)

    def neuron_points(self) -> np.ndarray:
        """Rows [W_i, b_i]: one point per neuron, bias as the last coordinate."""
        return np.hstack([self.W, self.b[:, None]])

    def pre_activation(self, X: np.ndarray) -> np.ndarray:
        return X @ self.W.T + self.b

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return get_activation(self.activation)(self.pre_activation(X))


@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise InvalidParameter("network needs at least one layer")
        for k in range(len(layers) - 1):
            if layers[k].n_out != layers[k + 1].n_in:
                raise DimensionMismatch(
                    f"layer {k} has {layers[k].n_out} outputs but layer {k + 1} "
                    f"expects {layers[k + 1].n_in} inputs"
                )
        object.__setattr__(self, "layers", layers)

    @classmethod
    def of(cls, layers: Sequence[LayerSpec]) -> "NetworkSpec":
        return cls(tuple(layers))

    @property
    def widths(self) -> list[int]:
        """[n_in, n_1, ..., n_out]"""
        return [self.layers[0].n_in] + [layer.n_out for layer in self.layers]

    def __len__(self) -> int:
        return len(self.layers)


# =============================================================================
# FORWARD PASS
# =============================================================================

def forward(net: NetworkSpec, X) -> np.ndarray:
    """Network output for a batch (rows of X)."""
    H = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if H.shape[1] != net.layers[0].n_in:
        raise DimensionMismatch(f"inputs have {H.shape[1]} features, network expects {net.layers[0].n_in}")
    for layer in net.layers:
        H = layer(H)
    return H


def forward_trace(net: NetworkSpec, X) -> list[np.ndarray]:
    """Pre-activations of every layer, in order."""
    H = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if H.shape[1] != net.layers[0].n_in:
        raise DimensionMismatch(f"inputs have {H.shape[1]} features, network expects {net.layers[0].n_in}")
    trace = []
    for layer in net.layers:
        Z = layer.pre_activation(H)
        trace.append(Z)
        H = get_activation(layer.activation)(Z)
    return trace


# =============================================================================
# PARAMETER ARITHMETIC
# =============================================================================

def parameter_count(net: NetworkSpec) -> int:
    """Weights plus biases. 784-300-100-10 has 266 610."""
    return sum(layer.parameter_count for layer in net.layers)


def pruned_parameter_count(net: NetworkSpec, hidden_widths: Sequence[int]) -> int:
    """Parameter count after shrinking each hidden layer to the given width."""
    widths = net.widths
    if len(hidden_widths) != len(widths) - 2:
        raise InvalidParameter(f"expected {len(widths) - 2} hidden widths, got {len(hidden_widths)}")
    chain = [widths[0], *[int(w) for w in hidden_widths], widths[-1]]
    return sum(chain[k + 1] * (chain[k] + 1) for k in range(len(chain) - 1))


def pruning_ratio(before: int, after: int) -> float:
    """Percentage of parameters removed."""
    if before <= 0:
        raise InvalidParameter(f"parameter count must be positive, got {before}")
    return (1.0 - after / before) * 100.0


def budgets_for_ratio(net: NetworkSpec, target_pr: float) -> list[int]:
    """
    Hidden widths from one shared keep-fraction whose parameter count
    gives the pruning ratio closest to ``target_pr``. The ratio is realised
    exactly by ``prune_network(..., match_widths=True)``.

    Example:
        >>> net = NetworkSpec.of([LayerSpec(np.zeros((300, 784)), np.zeros(300)),
        ...                       LayerSpec(np.zeros((100, 300)), np.zeros(100)),
        ...                       LayerSpec(np.zeros((10, 100)), np.zeros(10), "linear")])
        >>> budgets_for_ratio(net, 90.0)  # doctest: +SKIP
        [31, 10]
    """
    if not 0 <= target_pr < 100:
        raise InvalidParameter(f"target pruning ratio must lie in [0, 100), got {target_pr}")
    hidden = net.widths[1:-1]
    before = parameter_count(net)

    def widths_at(fraction: float) -> list[int]:
        return [min(n, max(1, int(round(fraction * n)))) for n in hidden]

    def ratio_at(fraction: float) -> float:
        return pruning_ratio(before, pruned_parameter_count(net, widths_at(fraction)))

    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ratio_at(mid) > target_pr:
            lo = mid
        else:
            hi = mid

    candidates = {tuple(widths_at(f)) for f in (lo, hi)}
    best = min(candidates, key=lambda w: (abs(pruning_ratio(before, pruned_parameter_count(net, w)) - target_pr), w))
    return list(best)
