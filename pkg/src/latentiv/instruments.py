"""Construction and selection of latent instrument candidates.

Four candidate vectors are built by clustering: the instrument of x from x
alone, the instrument of y from y alone, and both coordinates of one shared
2-D clustering of (x, y). Selection compares how far each marginal
instrument moved when the other variable was allowed to influence the
clustering, and keeps the pairing with the smaller displacement on the
"clean" side.

Randomness layout: both 1-D clusterings consume streams derived with the
same index, and the joint clustering uses a second index. Together with the
coordinate-symmetric k-means arithmetic, this makes swapping x and y swap
(i_xx, i_xxy, dist_x) with (i_yy, i_yyx, dist_y) exactly.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass

import numpy as np

from .clustering import assigned_center_coordinate, kmeans
from .core import Config, DataPair, DegenerateData, DistanceKind, RngStream, standardize

__all__ = ["InstrumentSet", "build_candidates", "select_instruments", "build_and_select"]

logger = logging.getLogger(__name__)

_MARGINAL_STREAM = 0
_JOINT_STREAM = 1


@dataclass(frozen=True, eq=False)
class InstrumentSet:
    """Candidate instrument vectors plus, once selected, the chosen pair.

    ``dist_x`` measures how much the instrument of x changes between the
    x-only and the joint clustering; ``dist_y`` mirrors it for y. The
    selected pair is (i_xx, i_yyx) when ``dist_x <= dist_y`` and
    (i_xxy, i_yy) otherwise.
    """

    i_xx: np.ndarray
    i_xxy: np.ndarray
    i_yy: np.ndarray
    i_yyx: np.ndarray
    selected_ix: np.ndarray | None = None
    selected_iy: np.ndarray | None = None
    dist_x: float | None = None
    dist_y: float | None = None


def _effective_k(requested: int, n_distinct: int, label: str) -> int:
    if n_distinct < requested:
        logger.info("shrinking k from %d to %d distinct values for %s", requested, n_distinct, label)
        return n_distinct
    return requested


def build_candidates(d: DataPair, cfg: Config, rng: RngStream) -> InstrumentSet:
    """Build the four instrument candidates by 1-D and joint 2-D clustering.

    Raises ``DegenerateData`` when either vector is constant. k shrinks to
    the distinct-value count of each point set when necessary.
    """
    if np.all(d.x == d.x[0]) or np.all(d.y == d.y[0]):
        raise DegenerateData("x or y is constant; instruments cannot be built")

    sx = standardize(d.x) if cfg.standardize else d.x
    sy = standardize(d.y) if cfg.standardize else d.y
    joint = np.column_stack([sx, sy])

    k_x = _effective_k(cfg.k_clusters, len(np.unique(sx)), "x")
    k_y = _effective_k(cfg.k_clusters, len(np.unique(sy)), "y")
    k_joint = _effective_k(cfg.k_clusters, np.unique(joint, axis=0).shape[0], "(x, y)")

    # Both marginal clusterings intentionally draw from equal-seeded streams:
    # this is what makes the x<->y swap exact (see module docstring).
    cluster_x = kmeans(sx, k_x, rng.derive(_MARGINAL_STREAM))
    cluster_y = kmeans(sy, k_y, rng.derive(_MARGINAL_STREAM))
    cluster_joint = kmeans(joint, k_joint, rng.derive(_JOINT_STREAM))

    return InstrumentSet(
        i_xx=assigned_center_coordinate(cluster_x, 0),
        i_xxy=assigned_center_coordinate(cluster_joint, 0),
        i_yy=assigned_center_coordinate(cluster_y, 0),
        i_yyx=assigned_center_coordinate(cluster_joint, 1),
    )


def select_instruments(s: InstrumentSet, cfg: Config) -> InstrumentSet:
    """Fill the selection fields by comparing candidate displacements.

    Ties (dist_x == dist_y) resolve to the x-from-x branch.
    """
    if cfg.distance_kind is not DistanceKind.EUCLIDEAN:
        raise ValueError(f"unsupported distance kind: {cfg.distance_kind}")
    dist_x = float(np.sqrt(((s.i_xx - s.i_xxy) ** 2).sum()))
    dist_y = float(np.sqrt(((s.i_yy - s.i_yyx) ** 2).sum()))
    if dist_x <= dist_y:
        selected_ix, selected_iy = s.i_xx, s.i_yyx
    else:
        selected_ix, selected_iy = s.i_xxy, s.i_yy
    return dataclasses.replace(
        s, selected_ix=selected_ix, selected_iy=selected_iy, dist_x=dist_x, dist_y=dist_y
    )


def build_and_select(d: DataPair, cfg: Config, rng: RngStream) -> InstrumentSet:
    """Convenience wrapper: build candidates, then select the pair to use."""
    return select_instruments(build_candidates(d, cfg, rng), cfg)
