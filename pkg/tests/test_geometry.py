"""Affine hull, Löwner ellipsoid, shrunk vertices and dimension reduction."""
from __future__ import annotations

import numpy as np
import pytest

from coreprune.errors import (
    AllPointsIdentical,
    DegenerateInput,
    DimensionMismatch,
    InvalidParameter,
    NoConvergence,
    NotPositiveDefinite,
)
from coreprune.geometry import (
    AffineBasis,
    Ellipsoid,
    PointSet,
    affine_rank,
    lift,
    mvee,
    project,
    rank_and_basis,
    reduce_dimension,
    shrunk_vertices,
)

# Vertices are pulled this far toward the centre before the LP hull test,
# absorbing the eps_mvee slack of the approximate ellipsoid.
HULL_CONTRACTION = 1.0 - 1e-5


# =============================================================================
# POINT SETS
# =============================================================================

def test_point_set_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        PointSet(np.zeros((2, 2, 2)))
    with pytest.raises(InvalidParameter):
        PointSet([[0.0, np.nan]])
    with pytest.raises(DimensionMismatch):
        PointSet(np.zeros((3, 2)), weights=np.ones(2))


def test_point_set_scaled_rows():
    P = PointSet([[1.0, 2.0], [3.0, 4.0]], weights=[2.0, -1.0])
    assert P.is_weighted
    np.testing.assert_array_equal(P.scaled_rows().data, [[2.0, 4.0], [-3.0, -4.0]])
    assert not P.scaled_rows().is_weighted
    assert P.scale() == pytest.approx(5.0)


# =============================================================================
# AFFINE HULL
# =============================================================================

def test_rank_of_collinear_points():
    B = rank_and_basis([[0, 0], [1, 0], [2, 0]])
    assert B.r == 1
    np.testing.assert_allclose(B.z, [1.0, 0.0])
    np.testing.assert_allclose(np.abs(B.Y[:, 0]), [1.0, 0.0], atol=1e-12)


def test_rank_of_triangle_has_orthonormal_basis():
    B = rank_and_basis([[0, 0], [1, 0], [0, 1]])
    assert B.r == 2
    np.testing.assert_allclose(B.Y.T @ B.Y, np.eye(2), atol=1e-12)


def test_rank_ignores_tiny_noise(rng, affine_points):
    P = affine_points(rng, 50, 20, 5) + 1e-12 * rng.standard_normal((50, 20))
    B = rank_and_basis(P)
    assert B.r == 5
    np.testing.assert_allclose(B.Y.T @ B.Y, np.eye(5), atol=1e-10)


def test_identical_rows_have_no_rank():
    with pytest.raises(AllPointsIdentical):
        rank_and_basis([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]])
    with pytest.raises(AllPointsIdentical):
        rank_and_basis([[1.0, 2.0]])
    assert affine_rank([[1.0, 2.0], [1.0, 2.0]]) == 0


def test_basis_reconstructs_points(rng, affine_points):
    P = affine_points(rng, 40, 12, 4)
    B = rank_and_basis(P)
    residual = np.max(np.abs((P - B.z) @ B.Y @ B.Y.T + B.z - P))
    assert residual <= 1e-8 * np.max(np.linalg.norm(P, axis=1))


def test_project_collinear_coordinates():
    P = [[0, 0], [1, 0], [2, 0]]
    coords = project(P, rank_and_basis(P)).data[:, 0]
    np.testing.assert_allclose(np.sort(coords), [-1.0, 0.0, 1.0], atol=1e-12)


def test_project_with_identity_basis_is_identity(rng):
    P = rng.standard_normal((6, 3))
    B = AffineBasis(Y=np.eye(3), z=np.zeros(3), r=3, singular_values=np.ones(3))
    np.testing.assert_array_equal(project(P, B).data, P)


def test_lift_inverts_project(rng, affine_points):
    P = affine_points(rng, 30, 8, 3)
    B = rank_and_basis(P)
    back = lift(project(P, B), B).data
    assert np.max(np.abs(back - P)) <= 1e-9 * np.max(np.abs(P))


def test_project_rejects_wrong_dimension():
    B = rank_and_basis([[0, 0], [1, 0], [0, 1]])
    with pytest.raises(DimensionMismatch):
        project([[0.0, 0.0, 0.0]], B)


# =============================================================================
# LÖWNER ELLIPSOID
# =============================================================================

def test_mvee_of_square():
    E = mvee([[1, 1], [1, -1], [-1, 1], [-1, -1]])
    np.testing.assert_allclose(E.G, np.eye(2) / 2, atol=1e-6)
    np.testing.assert_allclose(E.c, [0.0, 0.0], atol=1e-9)


def test_mvee_of_interval():
    E = mvee([[0.0], [1.0]])
    np.testing.assert_allclose(E.c, [0.5], atol=1e-9)
    np.testing.assert_allclose(E.G, [[4.0]], rtol=1e-6)


def test_mvee_contains_every_point(rng, in_hull):
    P = rng.standard_normal((50, 3))
    E = mvee(P)
    assert np.all(E.membership(P) <= 1.0 + 1e-6)
    for vertex in shrunk_vertices(E, 1.0 / 3):
        assert in_hull(E.c + HULL_CONTRACTION * (vertex - E.c), P)


def test_mvee_rejects_degenerate_input():
    with pytest.raises(DegenerateInput):
        mvee([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(DegenerateInput):
        mvee([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


def test_mvee_iteration_cap(rng):
    with pytest.raises(NoConvergence):
        mvee(rng.standard_normal((50, 3)), max_iter=1)


def test_mvee_rejects_bad_parameters():
    square = [[1, 1], [1, -1], [-1, 1], [-1, -1]]
    with pytest.raises(InvalidParameter):
        mvee(square, eps_mvee=0.0)
    with pytest.raises(InvalidParameter):
        mvee(square, max_iter=0)


@pytest.mark.slow
def test_mvee_sandwich_on_random_instances(in_hull):
    gen = np.random.default_rng(2024)
    for _ in range(100):
        r = int(gen.integers(1, 9))
        n = int(gen.integers(r + 2, 201))
        P = gen.standard_normal((n, r))
        E = mvee(P)
        assert np.all(E.membership(P) <= 1.0 + 1e-6)
        for vertex in shrunk_vertices(E, 1.0 / r):
            assert in_hull(E.c + HULL_CONTRACTION * (vertex - E.c), P)


# =============================================================================
# SHRUNK VERTICES
# =============================================================================

def test_vertices_of_unit_circle():
    E = Ellipsoid(G=np.eye(2), c=np.zeros(2))
    V = shrunk_vertices(E, 1.0)
    np.testing.assert_allclose(V, [[1, 0], [-1, 0], [0, 1], [0, -1]], atol=1e-12)


def test_vertices_of_stretched_ellipse():
    E = Ellipsoid(G=np.diag([0.25, 1.0]), c=np.array([1.0, 0.0]))
    V = shrunk_vertices(E, 1.0)
    np.testing.assert_allclose(V, [[1, 1], [1, -1], [3, 0], [-1, 0]], atol=1e-12)


def test_shrunk_vertices_membership(rng):
    E = mvee(rng.standard_normal((40, 4)))
    V = shrunk_vertices(E, 0.25)
    assert V.shape == (8, 4)
    np.testing.assert_allclose(E.membership(V), 0.0625, rtol=1e-9)


def test_shrunk_vertices_of_square_ellipse():
    E = mvee([[1, 1], [1, -1], [-1, 1], [-1, -1]])
    norms = np.linalg.norm(shrunk_vertices(E, 0.5) - E.c, axis=1)
    np.testing.assert_allclose(norms, np.sqrt(2) / 2, rtol=1e-5)


def test_shrunk_vertices_need_positive_definite_form():
    with pytest.raises(NotPositiveDefinite):
        shrunk_vertices(Ellipsoid(G=np.diag([1.0, -1.0]), c=np.zeros(2)), 0.5)
    with pytest.raises(InvalidParameter):
        shrunk_vertices(Ellipsoid(G=np.eye(2), c=np.zeros(2)), 1.5)


def test_ellipsoid_requires_symmetric_form():
    with pytest.raises(NotPositiveDefinite):
        Ellipsoid(G=np.array([[1.0, 0.5], [0.0, 1.0]]), c=np.zeros(2))


# =============================================================================
# DIMENSION REDUCTION
# =============================================================================

def test_pca_at_full_dimension_keeps_distances(rng):
    P = rng.standard_normal((30, 5))
    Z, _ = reduce_dimension(P, "pca", 5)
    before = np.linalg.norm(P[:, None] - P[None], axis=-1)
    after = np.linalg.norm(Z.data[:, None] - Z.data[None], axis=-1)
    np.testing.assert_allclose(after, before, atol=1e-9)


def test_pca_recovers_low_rank_points(rng, affine_points):
    P = affine_points(rng, 60, 20, 5)
    Z, mapping = reduce_dimension(P, "pca", 5)
    assert mapping.shape == (20, 5)
    back = Z.data @ mapping.T + P.mean(axis=0)
    assert np.max(np.abs(back - P)) <= 1e-9 * np.max(np.abs(P))


def test_gaussian_projection_is_seeded(rng):
    P = rng.standard_normal((10, 8))
    Z1, A1 = reduce_dimension(P, "gaussian_projection", 3, seed=4)
    Z2, A2 = reduce_dimension(P, "gaussian_projection", 3, seed=4)
    np.testing.assert_array_equal(A1, A2)
    np.testing.assert_allclose(Z1.data, P @ A1)


def test_reduce_dimension_rejects_bad_targets(rng):
    P = rng.standard_normal((10, 4))
    with pytest.raises(DimensionMismatch):
        reduce_dimension(P, "pca", 0)
    with pytest.raises(DimensionMismatch):
        reduce_dimension(P, "gaussian_projection", 5)
    with pytest.raises(InvalidParameter):
        reduce_dimension(P, "svd", 2)
