"""Lloyd-style k-means over 1-D and 2-D points.

This is the substrate for instrument construction. Determinism rules that
the rest of the pipeline relies on:

- seeding draws come only from the supplied ``RngStream`` (restart ``j``
  uses ``rng.derive(j)``),
- nearest-center ties break toward the lowest center index,
- all distance arithmetic is coordinate-order symmetric, so clustering the
  swapped 2-D point set yields the mirrored clustering bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RngStream, TooFewDistinctPoints

__all__ = ["Clustering", "kmeans", "assigned_center_coordinate"]


@dataclass(frozen=True, eq=False)
class Clustering:
    """Centers, per-sample assignment, and total within-cluster inertia."""

    centers: np.ndarray  # (k,) for 1-D points, (k, 2) for 2-D points
    assignment: np.ndarray  # (n,) ints in [0, k)
    inertia: float

    @property
    def dim(self) -> int:
        return 1 if self.centers.ndim == 1 else self.centers.shape[1]

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def _point_distances(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Squared distances of all points to one center.

    Coordinates are squared and added individually: plain commutative float
    additions, so exchanging the two coordinates of every point produces
    bitwise-identical distances (no dot-product/FMA reassociation).
    """
    d2 = (points[:, 0] - center[0]) ** 2
    for j in range(1, points.shape[1]):
        d2 = d2 + (points[:, j] - center[j]) ** 2
    return d2


def _distance_matrix(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) squared distances, coordinate-order symmetric like above."""
    d2 = (points[:, 0][:, None] - centers[None, :, 0]) ** 2
    for j in range(1, points.shape[1]):
        d2 = d2 + (points[:, j][:, None] - centers[None, :, j]) ** 2
    return d2


def _seed_centers(points: np.ndarray, k: int, stream: RngStream) -> np.ndarray:
    """Distance-weighted seeding: first center uniform, each next drawn with
    probability proportional to squared distance from the chosen set."""
    n = points.shape[0]
    chosen = [stream.integers(0, n)]
    d2 = _point_distances(points, points[chosen[0]])
    while len(chosen) < k:
        cumulative = np.cumsum(d2)
        # total > 0 is guaranteed while fewer centers than distinct points
        r = stream.random() * cumulative[-1]
        j = int(np.searchsorted(cumulative, r, side="right"))
        chosen.append(j)
        d2 = np.minimum(d2, _point_distances(points, points[j]))
    return points[chosen].copy()


def _lloyd(
    points: np.ndarray, k: int, stream: RngStream, max_iter: int
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """One seeded Lloyd run. Returns (centers, assignment, inertia, history)."""
    n, d = points.shape
    centers = _seed_centers(points, k, stream)
    rows = np.arange(n)
    prev: np.ndarray | None = None
    assignment = np.zeros(n, dtype=np.intp)
    history: list[float] = []

    for _ in range(max_iter):
        dist2 = _distance_matrix(points, centers)
        assignment = dist2.argmin(axis=1)  # argmin takes the lowest index on ties
        min_d2 = dist2[rows, assignment]

        counts = np.bincount(assignment, minlength=k)
        for c in np.flatnonzero(counts == 0):
            # repair: promote the point farthest from its center to a singleton
            farthest = int(np.argmax(min_d2))
            assignment[farthest] = c
            min_d2[farthest] = 0.0
            centers[c] = points[farthest]

        history.append(float(min_d2.sum()))
        if prev is not None and np.array_equal(assignment, prev):
            break
        counts = np.bincount(assignment, minlength=k).astype(np.float64)
        centers = np.column_stack(
            [np.bincount(assignment, weights=points[:, j], minlength=k) for j in range(d)]
        )
        centers /= counts[:, None]
        prev = assignment

    residual2 = (points[:, 0] - centers[assignment, 0]) ** 2
    for j in range(1, d):
        residual2 = residual2 + (points[:, j] - centers[assignment, j]) ** 2
    inertia = float(residual2.sum())
    return centers, assignment, inertia, history


def kmeans(
    points,
    k: int,
    rng: RngStream,
    max_iter: int = 100,
    n_restarts: int = 10,
) -> Clustering:
    """Best-of-``n_restarts`` k-means clustering of 1-D or 2-D points.

    Requires ``1 <= k <=`` the number of distinct points; raises
    ``TooFewDistinctPoints`` otherwise (the caller is expected to shrink k).
    """
    pts = np.asarray(points, dtype=np.float64)
    one_dimensional = pts.ndim == 1
    if one_dimensional:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] not in (1, 2):
        raise ValueError(f"points must be 1-D or 2-D, got shape {np.shape(points)}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contain NaN or infinite coordinates")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if max_iter < 1 or n_restarts < 1:
        raise ValueError("max_iter and n_restarts must be >= 1")
    n_distinct = np.unique(pts, axis=0).shape[0]
    if k > n_distinct:
        raise TooFewDistinctPoints(f"k={k} exceeds the {n_distinct} distinct point(s)")

    best: tuple[np.ndarray, np.ndarray, float] | None = None
    for restart in range(n_restarts):
        centers, assignment, inertia, _ = _lloyd(pts, k, rng.derive(restart), max_iter)
        if best is None or inertia < best[2]:
            best = (centers, assignment, inertia)
    centers, assignment, inertia = best

    if one_dimensional:
        centers = centers[:, 0]
    centers = centers.copy()
    centers.setflags(write=False)
    assignment = assignment.copy()
    assignment.setflags(write=False)
    return Clustering(centers=centers, assignment=assignment, inertia=inertia)


def assigned_center_coordinate(c: Clustering, coord_index: int) -> np.ndarray:
    """Per-sample vector of the chosen coordinate of each sample's center."""
    if not (0 <= coord_index < c.dim):
        raise ValueError(f"coord_index {coord_index} out of range for {c.dim}-D clustering")
    if c.centers.ndim == 1:
        return c.centers[c.assignment].copy()
    return c.centers[c.assignment, coord_index].copy()
