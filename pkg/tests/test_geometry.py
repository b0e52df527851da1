import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from chamber_sampler.geometry import (
    canonicalize,
    distinct_hyperplanes,
    hyperplane_basis,
    lift,
    project_to_span,
    rank_and_span_basis,
)

from exact import exact_rank


class TestLift:
    def test_origin(self):
        np.testing.assert_allclose(lift([[0.0, 0.0]]), [[0.0, 0.0, -1.0]])

    def test_axis_point(self):
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(lift([[1.0, 0.0]]), [[r, 0.0, -r]], atol=1e-15)

    def test_random_points(self, rng):
        L = lift(rng.standard_normal((5, 2)))
        assert L.shape == (5, 3)
        np.testing.assert_allclose(np.linalg.norm(L, axis=1), 1.0, atol=1e-12)
        assert np.all(L[:, -1] < 0)

    @pytest.mark.parametrize("bad", [[], [[np.nan, 0.0]], [[np.inf, 1.0]]])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            lift(bad)


class TestHyperplaneBasis:
    def test_vertical_normal(self):
        B = hyperplane_basis([0.0, 0.0, 1.0])
        assert B.shape == (2, 3)
        np.testing.assert_allclose(np.abs(B[:, 2]), 0.0, atol=1e-15)
        np.testing.assert_allclose(np.abs(B @ B.T), np.eye(2), atol=1e-15)

    def test_planar(self):
        B = hyperplane_basis([1.0, 0.0])
        np.testing.assert_allclose(np.abs(B), [[0.0, 1.0]], atol=1e-15)

    def test_random_r5(self, rng):
        v = rng.standard_normal(5)
        v /= np.linalg.norm(v)
        B = hyperplane_basis(v)
        assert B.shape == (4, 5)
        np.testing.assert_allclose(B @ B.T, np.eye(4), atol=1e-10)
        np.testing.assert_allclose(B @ v, 0.0, atol=1e-10)

    def test_deterministic(self, rng):
        v = rng.standard_normal(4)
        v /= np.linalg.norm(v)
        np.testing.assert_array_equal(hyperplane_basis(v), hyperplane_basis(v.copy()))

    def test_errors(self):
        with pytest.raises(ValueError):
            hyperplane_basis([1.0])
        with pytest.raises(ValueError):
            hyperplane_basis([0.0, 0.0])

    @settings(max_examples=200, deadline=None)
    @given(arrays(float, st.integers(2, 8), elements=st.floats(-10, 10)))
    def test_property_orthonormal_complement(self, v):
        n = np.linalg.norm(v)
        if n < 1e-3:
            return
        v = v / n
        B = hyperplane_basis(v)
        np.testing.assert_allclose(B @ v, 0.0, atol=1e-9)
        np.testing.assert_allclose(B @ B.T, np.eye(len(v) - 1), atol=1e-9)


class TestRankAndSpan:
    def test_identity(self):
        r, B = rank_and_span_basis([[1.0, 0.0], [0.0, 1.0]])
        assert r == 2 and B.shape == (2, 2)

    def test_collinear(self):
        r, B = rank_and_span_basis([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]])
        assert r == 1
        np.testing.assert_allclose(np.abs(B[0]), [1 / np.sqrt(2), 1 / np.sqrt(2), 0.0], atol=1e-12)

    def test_generic(self, rng):
        r, _ = rank_and_span_basis(rng.standard_normal((6, 4)))
        assert r == 4

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
    def test_agrees_with_exact_rank(self, rows):
        if not any(any(r) for r in rows):
            return
        r, B = rank_and_span_basis(np.array(rows, dtype=float))
        assert r == exact_rank(rows)
        # the basis spans the rows
        A = np.array(rows, dtype=float)
        np.testing.assert_allclose(A @ B.T @ B, A, atol=1e-9)


class TestProjectToSpan:
    def test_drops_z(self):
        V = np.array([[1.0, 2.0, 0.0], [3.0, -1.0, 0.0]])
        np.testing.assert_allclose(project_to_span(V, np.eye(3)[:2]), V[:, :2])

    def test_single_vector(self):
        v = np.array([[3.0, 4.0]])
        np.testing.assert_allclose(project_to_span(v, v / 5.0), [[5.0]])

    def test_gram_preserved(self, rng):
        V = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 4))
        _, B = rank_and_span_basis(V)
        P = project_to_span(V, B)
        assert P.shape == (5, 2)
        np.testing.assert_allclose(P @ P.T, V @ V.T, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            project_to_span([[1.0, 0.0]], np.eye(3))


def test_canonical_dedup_merges_antipodes():
    N = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0], [0.6, 0.8]])
    np.testing.assert_array_equal(distinct_hyperplanes(N), [0, 2, 3])
    assert canonicalize(N)[2, 1] == 1.0
