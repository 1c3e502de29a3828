"""Direction decisions from instrument-based conditional independence tests.

``infer_direction`` walks the symmetric decision tree: accept x -> y when y
looks independent of x's instrument given x; otherwise accept y -> x when
the mirrored test accepts; otherwise call the pair confounded.
``forced_choice`` always picks a direction from the sign of the p-value
difference, which is what benchmark scoring against binary ground truth
uses. ``ensemble_infer`` repeats the decision over a seeded random fold
partition and takes the majority.

Both tests are always evaluated so the diagnostic p-value difference and
the forced-choice path share one computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .citest import ci_test_cor, ci_test_mi, discretize_for_mi
from .core import (
    Config,
    DataPair,
    DecisionMode,
    Direction,
    RngStream,
    TestKind,
    TooFewSamples,
    Verdict,
)
from .instruments import build_and_select

__all__ = [
    "EnsembleVerdict",
    "infer_direction",
    "p_difference",
    "forced_choice",
    "ensemble_infer",
]

_MIN_SAMPLES_PER_FOLD = 4


@dataclass(frozen=True)
class EnsembleVerdict:
    """Per-fold verdicts and their aggregate."""

    fold_verdicts: tuple[Verdict, ...]
    majority: Direction
    vote_counts: dict[Direction, int]
    mean_p_difference: float


def _run_test(a: np.ndarray, b: np.ndarray, z: np.ndarray, cfg: Config) -> float:
    if cfg.test_kind is TestKind.PARTIAL_CORRELATION:
        return ci_test_cor(a, b, z, cfg).p_value
    cap = cfg.mi_level_cap
    return ci_test_mi(
        discretize_for_mi(a, cap), discretize_for_mi(b, cap), discretize_for_mi(z, cap), cfg
    ).p_value


def _both_p_values(d: DataPair, cfg: Config, rng: RngStream) -> tuple[float, float]:
    """(p of y indep ix given x, p of x indep iy given y), always both."""
    iv = build_and_select(d, cfg, rng)
    p_y_ix = _run_test(d.y, iv.selected_ix, d.x, cfg)
    p_x_iy = _run_test(d.x, iv.selected_iy, d.y, cfg)
    return p_y_ix, p_x_iy


def infer_direction(d: DataPair, cfg: Config, rng: RngStream) -> Verdict:
    """Strict decision tree over the two instrument tests."""
    p_y_ix, p_x_iy = _both_p_values(d, cfg, rng)
    if p_y_ix > cfg.alpha:
        direction = Direction.X_TO_Y
    elif p_x_iy > cfg.alpha:
        direction = Direction.Y_TO_X
    else:
        direction = Direction.CONFOUNDED
    return Verdict(direction, p_y_indep_ix_given_x=p_y_ix, p_x_indep_iy_given_y=p_x_iy)


def p_difference(d: DataPair, cfg: Config, rng: RngStream) -> float:
    """p(x indep iy | y) - p(y indep ix | x); negative indicates x -> y."""
    p_y_ix, p_x_iy = _both_p_values(d, cfg, rng)
    return p_x_iy - p_y_ix


def forced_choice(d: DataPair, cfg: Config, rng: RngStream) -> Verdict:
    """Binary decision by the sign of the p-value difference."""
    p_y_ix, p_x_iy = _both_p_values(d, cfg, rng)
    direction = Direction.X_TO_Y if (p_x_iy - p_y_ix) < 0 else Direction.Y_TO_X
    return Verdict(direction, p_y_indep_ix_given_x=p_y_ix, p_x_indep_iy_given_y=p_x_iy)


def _aggregate(fold_verdicts: list[Verdict]) -> EnsembleVerdict:
    vote_counts = {direction: 0 for direction in Direction}
    for v in fold_verdicts:
        vote_counts[v.direction] += 1
    mean_p_difference = float(np.mean([v.p_difference for v in fold_verdicts]))

    top = max(vote_counts.values())
    leaders = [direction for direction in Direction if vote_counts[direction] == top]
    if len(leaders) == 1:
        majority = leaders[0]
    elif mean_p_difference < 0:
        # negative difference is the x -> y evidence direction
        majority = Direction.X_TO_Y
    elif mean_p_difference > 0:
        majority = Direction.Y_TO_X
    else:
        majority = Direction.X_TO_Y
    return EnsembleVerdict(
        fold_verdicts=tuple(fold_verdicts),
        majority=majority,
        vote_counts=vote_counts,
        mean_p_difference=mean_p_difference,
    )


def ensemble_infer(d: DataPair, cfg: Config, rng: RngStream) -> EnsembleVerdict:
    """Majority decision over a seeded random partition into n_folds folds.

    With one fold this degenerates to a single decision on the full pair.
    Folds are a random partition, not contiguous blocks, so sorted corpora
    do not leak ordering into the ensemble.
    """
    if d.n < cfg.n_folds * _MIN_SAMPLES_PER_FOLD:
        raise TooFewSamples(
            f"need at least {cfg.n_folds * _MIN_SAMPLES_PER_FOLD} samples "
            f"for {cfg.n_folds} folds, got {d.n}"
        )
    if cfg.n_folds == 1:
        folds = [np.arange(d.n)]
    else:
        permuted = rng.permutation(d.n)
        folds = [np.sort(part) for part in np.array_split(permuted, cfg.n_folds)]

    decide = infer_direction if cfg.decision_mode is DecisionMode.STRICT_TREE else forced_choice
    fold_verdicts = [
        decide(d.subset(fold), cfg, rng.derive(i)) for i, fold in enumerate(folds)
    ]
    return _aggregate(fold_verdicts)
