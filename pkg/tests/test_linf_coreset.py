"""ℓ∞-coresets and the ratio diagnostic."""
from __future__ import annotations

import math

import numpy as np
import pytest

from coreprune.coresets import cara, inf_coreset, linf_coreset, ratio_diagnostic
from coreprune.errors import AllPointsIdentical, InvalidParameter
from coreprune.geometry import mvee, project, rank_and_basis, shrunk_vertices


def test_triangle_keeps_its_vertices():
    S = inf_coreset([[0, 0], [1, 0], [0, 1]])
    assert set(S.tolist()) <= {0, 1, 2}
    assert S.size >= 1


def test_coreset_size_and_determinism(rng, affine_points):
    P = affine_points(rng, 200, 10, 5)
    S = inf_coreset(P)
    assert S.size <= 2 * 5 * 6
    assert np.all(np.diff(S) > 0)
    assert S.min() >= 0 and S.max() < 200
    np.testing.assert_array_equal(S, inf_coreset(P))


def test_vertices_are_reconstructed_by_their_sets(rng, affine_points):
    P = affine_points(rng, 120, 6, 3)
    basis = rank_and_basis(P)
    coords = project(P, basis).data
    coords = coords / np.max(np.linalg.norm(coords, axis=1))
    E = mvee(coords)
    for vertex in shrunk_vertices(E, 1.0 / basis.r):
        D = cara(vertex, coords)
        assert D.residual(coords, vertex) <= 1e-7


def test_coreset_is_scale_invariant(rng, affine_points):
    P = affine_points(rng, 150, 8, 4)
    np.testing.assert_array_equal(inf_coreset(4.0 * P), inf_coreset(P))


def test_single_point():
    assert inf_coreset([[3.0, 4.0]]).tolist() == [0]


def test_identical_points_fail():
    with pytest.raises(AllPointsIdentical):
        inf_coreset([[1.0, 1.0]] * 5)


# =============================================================================
# RATIO DIAGNOSTIC
# =============================================================================

def test_ratio_of_full_set_is_one(rng):
    P = rng.standard_normal((40, 3))
    assert ratio_diagnostic(P, np.arange(40), trials=200) == 1.0


def test_ratio_within_bound(rng, affine_points):
    P = affine_points(rng, 200, 10, 5)
    S = inf_coreset(P)
    observed = ratio_diagnostic(P, S, trials=1000, j=1, seed=0)
    assert 1.0 <= observed <= 2 * 5 ** 1.5


def test_ratio_diagnostic_is_seeded(rng):
    P = rng.standard_normal((30, 3))
    S = inf_coreset(P)
    assert ratio_diagnostic(P, S, trials=50, seed=5) == ratio_diagnostic(P, S, trials=50, seed=5)


def test_ratio_diagnostic_parameters(rng):
    P = rng.standard_normal((10, 2))
    with pytest.raises(InvalidParameter):
        ratio_diagnostic(P, [0, 1], trials=0)
    with pytest.raises(InvalidParameter):
        ratio_diagnostic(P, [0, 1], j=0)
    with pytest.raises(InvalidParameter):
        ratio_diagnostic(P, [])
    with pytest.raises(InvalidParameter):
        ratio_diagnostic(P, [0, 1], j=2)
    with pytest.raises(InvalidParameter):
        ratio_diagnostic(P[:, :1], [0, 1], j=1)


class _FixedDraws:
    """Generator stand-in: X of ones and v pinned to a chosen row."""

    def __init__(self, v):
        self.v = np.asarray(v, dtype=float)

    def standard_normal(self, shape):
        if isinstance(shape, tuple):
            return np.ones(shape)
        return self.v.copy()


def test_vanishing_coreset_cost_gives_infinite_ratio(monkeypatch):
    P = np.array([[0.0, 0.0, 0.0], [1.0, 2.0, 3.0], [-1.0, 0.5, 2.0]])
    monkeypatch.setattr(linf_coreset, "make_rng", lambda seed: _FixedDraws(P[0]))
    assert ratio_diagnostic(P, [0], trials=3) == math.inf


@pytest.mark.slow
def test_ratio_bound_on_random_instances(affine_points):
    gen = np.random.default_rng(7)
    for trial in range(20):
        P = affine_points(gen, 200, 10, 5)
        S = inf_coreset(P)
        assert S.size <= 60
        assert ratio_diagnostic(P, S, trials=1000, j=1, seed=trial) <= 2 * 5 ** 1.5


@pytest.mark.slow
def test_ratio_bound_with_wide_queries(rng, affine_points):
    P = affine_points(rng, 150, 8, 3)
    S = inf_coreset(P)
    assert ratio_diagnostic(P, S, trials=500, j=3, seed=1) <= 2 * 3 ** 1.5


@pytest.mark.slow
def test_full_rank_instance_with_three_columns(rng):
    P = rng.standard_normal((500, 20))
    S = inf_coreset(P)
    assert S.size <= 2 * 20 * 21
    observed = ratio_diagnostic(P, S, trials=1000, j=3, seed=0)
    assert 1.0 <= observed <= 2 * 20 ** 1.5
