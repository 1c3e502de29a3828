import itertools

import numpy as np
import pytest

from latentiv.clustering import _lloyd, assigned_center_coordinate, kmeans
from latentiv.core import RngStream, TooFewDistinctPoints


def brute_force_optimum(points: np.ndarray, k: int) -> float:
    """Global minimum inertia over every assignment with k nonempty clusters."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    best = np.inf
    for assignment in itertools.product(range(k), repeat=n):
        labels = np.asarray(assignment)
        if len(np.unique(labels)) < k:
            continue
        inertia = 0.0
        for c in range(k):
            members = pts[labels == c]
            inertia += ((members - members.mean(axis=0)) ** 2).sum()
        best = min(best, inertia)
    return best


def assert_valid_clustering(c, points):
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    centers = c.centers[:, None] if c.centers.ndim == 1 else c.centers
    # nonempty centers are the means of their members
    for idx in range(len(centers)):
        members = pts[c.assignment == idx]
        if len(members):
            np.testing.assert_allclose(centers[idx], members.mean(axis=0), atol=1e-9)
    # each point sits with its nearest center, ties to the lowest index
    d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    np.testing.assert_array_equal(c.assignment, d2.argmin(axis=1))
    assert c.inertia >= 0.0


class TestKmeansExamples:
    def test_identical_points_k1(self):
        c = kmeans([0.0, 0.0, 0.0], 1, RngStream(0))
        assert c.centers.shape == (1,)
        assert c.centers[0] == 0.0
        assert c.inertia == 0.0

    def test_separated_pairs(self):
        c = kmeans([0.0, 0.0, 10.0, 10.0], 2, RngStream(1))
        assert sorted(c.centers.tolist()) == [0.0, 10.0]
        assert c.inertia == 0.0
        assert_valid_clustering(c, [0.0, 0.0, 10.0, 10.0])

    def test_matches_exhaustive_optimum_eight_points(self):
        rng = np.random.Generator(np.random.Philox(key=42))
        points = rng.normal(0.0, 1.0, 8)
        expected = brute_force_optimum(points, 3)
        c = kmeans(points, 3, RngStream(7))
        assert c.inertia == pytest.approx(expected, abs=1e-9)
        assert_valid_clustering(c, points)

    def test_too_few_distinct_points(self):
        with pytest.raises(TooFewDistinctPoints):
            kmeans([1.0, 1.0, 2.0], 3, RngStream(0))

    def test_k_equals_distinct_count_gives_zero_inertia(self):
        points = [3.0, 3.0, -1.0, 5.0, 5.0, 9.0]
        c = kmeans(points, 4, RngStream(3))
        assert c.inertia == pytest.approx(0.0, abs=1e-18)

    def test_2d_points(self):
        pts = np.array([[0.0, 0.0], [0.1, 0.0], [5.0, 5.0], [5.1, 5.0]])
        c = kmeans(pts, 2, RngStream(2))
        assert c.dim == 2
        assert_valid_clustering(c, pts)
        assert c.inertia == pytest.approx(0.01, abs=1e-12)


class TestKmeansProperties:
    def test_inertia_non_increasing_within_restart(self):
        rng = np.random.Generator(np.random.Philox(key=11))
        pts = rng.normal(0.0, 1.0, (300, 2))
        for restart_seed in range(5):
            _, _, _, history = _lloyd(pts, 6, RngStream(restart_seed), max_iter=100)
            diffs = np.diff(history)
            assert np.all(diffs <= 1e-9)

    def test_permutation_invariance_on_separated_data(self):
        rng = np.random.Generator(np.random.Philox(key=5))
        pts = np.concatenate(
            [rng.normal(0.0, 0.2, 30), rng.normal(10.0, 0.2, 30), rng.normal(-10.0, 0.2, 30)]
        )
        c1 = kmeans(pts, 3, RngStream(1))
        permuted = pts[rng.permutation(len(pts))]
        c2 = kmeans(permuted, 3, RngStream(99))
        assert c1.inertia == pytest.approx(c2.inertia, rel=1e-12)
        np.testing.assert_allclose(np.sort(c1.centers), np.sort(c2.centers), atol=1e-12)

    def test_restarts_pick_lowest_inertia(self):
        rng = np.random.Generator(np.random.Philox(key=17))
        pts = rng.normal(0.0, 1.0, 40)
        best = kmeans(pts, 3, RngStream(4), n_restarts=10)
        singles = [
            _lloyd(pts[:, None], 3, RngStream(4).derive(j), 100)[2] for j in range(10)
        ]
        assert best.inertia == pytest.approx(min(singles), abs=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            kmeans([1.0, 2.0], 0, RngStream(0))
        with pytest.raises(ValueError):
            kmeans(np.ones((3, 3)), 1, RngStream(0))
        with pytest.raises(ValueError):
            kmeans([1.0, np.nan], 1, RngStream(0))


class TestAssignedCenterCoordinate:
    def test_one_dimensional(self):
        c = kmeans([0.0, 0.0, 10.0, 10.0], 2, RngStream(1))
        np.testing.assert_array_equal(assigned_center_coordinate(c, 0), [0.0, 0.0, 10.0, 10.0])

    def test_single_2d_cluster_second_coordinate(self):
        pts = np.array([[1.0, 6.0], [3.0, 7.0], [5.0, 8.0]])
        c = kmeans(pts, 1, RngStream(0))
        np.testing.assert_allclose(c.centers, [[3.0, 7.0]], atol=1e-12)
        np.testing.assert_allclose(assigned_center_coordinate(c, 1), [7.0, 7.0, 7.0], atol=1e-12)

    def test_mixed_2d_hand_table(self):
        # two tight groups; centroids computed by hand
        pts = np.array(
            [[0.0, 0.0], [2.0, 0.0], [1.0, 3.0], [10.0, 10.0], [12.0, 10.0], [11.0, 13.0]]
        )
        c = kmeans(pts, 2, RngStream(6))
        # hand centroids: (1, 1) and (11, 11)
        np.testing.assert_allclose(np.sort(c.centers[:, 0]), [1.0, 11.0], atol=1e-12)
        first = assigned_center_coordinate(c, 0)
        second = assigned_center_coordinate(c, 1)
        np.testing.assert_allclose(first[:3], [1.0, 1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(first[3:], [11.0, 11.0, 11.0], atol=1e-12)
        np.testing.assert_allclose(second[:3], [1.0, 1.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(second[3:], [11.0, 11.0, 11.0], atol=1e-12)

    def test_coordinate_out_of_range(self):
        c = kmeans([0.0, 1.0], 2, RngStream(0))
        with pytest.raises(ValueError):
            assigned_center_coordinate(c, 1)
