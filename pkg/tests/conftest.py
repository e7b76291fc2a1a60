"""Shared fixtures: seeded generators, hull oracle, NPY and network builders."""
from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import linprog

from coreprune.artifacts import save_network, write_array
from coreprune.pruning import LayerSpec, NetworkSpec


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def quiet_env(monkeypatch):
    monkeypatch.delenv("COREPRUNE_LOG", raising=False)


def _in_hull(v, P) -> bool:
    """LP feasibility of v = Σ x_i p_i, Σ x_i = 1, x >= 0."""
    P = np.asarray(P, dtype=np.float64)
    n = P.shape[0]
    A_eq = np.vstack([P.T, np.ones((1, n))])
    b_eq = np.append(np.asarray(v, dtype=np.float64), 1.0)
    result = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return result.status == 0


@pytest.fixture
def in_hull():
    return _in_hull


def _affine_points(rng, n: int, d: int, r: int) -> np.ndarray:
    """n points spanning a random r-dimensional affine subspace of R^d."""
    basis, _ = np.linalg.qr(rng.standard_normal((d, r)))
    return rng.standard_normal((n, r)) @ basis.T + rng.standard_normal(d)


@pytest.fixture
def affine_points():
    return _affine_points


def _random_network(widths, seed: int = 0) -> NetworkSpec:
    gen = np.random.default_rng(seed)
    layers = []
    for k in range(len(widths) - 1):
        n_in, n_out = widths[k], widths[k + 1]
        W = gen.standard_normal((n_out, n_in)) / np.sqrt(n_in)
        b = 0.1 * gen.standard_normal(n_out)
        activation = "linear" if k == len(widths) - 2 else "relu"
        layers.append(LayerSpec(W, b, activation))
    return NetworkSpec.of(layers)


@pytest.fixture
def random_network():
    return _random_network


@pytest.fixture
def npy_file(tmp_path):
    """Write an array to tmp_path/<name> and return the path."""
    def _write(name: str, array) -> str:
        return str(write_array(tmp_path / name, array))
    return _write


@pytest.fixture
def small_manifest(tmp_path):
    """A 20-12-8-3 network saved as tmp_path/net.json."""
    net = _random_network([20, 12, 8, 3], seed=3)
    path = tmp_path / "net.json"
    save_network(net, path, name="small", seed=3, created="2026-01-01T00:00:00+00:00")
    return path, net
