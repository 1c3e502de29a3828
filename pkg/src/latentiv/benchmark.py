"""Cause-effect-pairs corpus loading, scoring, and reporting.

The expected corpus layout is the Tuebingen cause-effect pairs one:
``pairNNNN.txt`` files with two whitespace-separated numeric columns and a
``pairmeta.txt`` with one row per pair: id, cause column start/end, effect
column start/end, weight. Multivariate pairs are excluded by id (the
default exclusion list matches the nine multivariate pairs of version 1.0)
and every remaining pair is scored; a pair that fails to load or to run
counts as incorrect, never as excluded, so errors cannot inflate accuracy.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .core import (
    Config,
    DataPair,
    DecisionMode,
    Direction,
    LatentIvError,
    MultivariatePair,
    ParseError,
    RngStream,
    config_to_dict,
)
from .inference import ensemble_infer

__all__ = [
    "PAPER_EXCLUDED_IDS",
    "EXCLUSION_REASON",
    "PairMeta",
    "PairResult",
    "BenchmarkReport",
    "load_pair",
    "load_metadata",
    "run_benchmark",
    "report_to_dict",
    "write_report_json",
    "write_report_csv",
]

logger = logging.getLogger(__name__)

# Multivariate pairs of corpus v1.0, excluded from scoring.
PAPER_EXCLUDED_IDS = frozenset({52, 53, 54, 55, 70, 71, 81, 82, 83})
EXCLUSION_REASON = "multivariate"

_CSV_COLUMNS = ("id", "verdict", "p_difference", "correct", "weight")


@dataclass(frozen=True)
class PairMeta:
    pair_id: int
    cause_columns: tuple[int, int]
    effect_columns: tuple[int, int]
    weight: float
    ground_truth: Direction


@dataclass(frozen=True)
class PairResult:
    pair_id: int
    direction: Direction | None
    p_difference: float | None
    correct: bool
    weight: float
    error: str | None = None


@dataclass(frozen=True)
class BenchmarkReport:
    per_pair: tuple[PairResult, ...]
    excluded: tuple[tuple[int, str], ...]
    weighted_accuracy: float | None
    unweighted_accuracy: float | None
    mode: DecisionMode
    ensemble: bool
    config: Config


def load_pair(path: Path | str) -> DataPair:
    """Parse one two-column pair file.

    Blank lines are skipped. Raises ``ParseError`` with the offending line
    number, or ``MultivariatePair`` when a row has more than two columns.
    """
    xs: list[float] = []
    ys: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) > 2:
                raise MultivariatePair(
                    f"{path}: {len(tokens)} columns at line {line_no}; expected 2"
                )
            if len(tokens) < 2:
                raise ParseError(f"{path}: expected 2 numeric fields, got {len(tokens)}", line_no)
            try:
                xs.append(float(tokens[0]))
                ys.append(float(tokens[1]))
            except ValueError as exc:
                raise ParseError(f"{path}: {exc}", line_no) from exc
    if len(xs) < 2:
        raise ParseError(f"{path}: fewer than 2 data rows")
    return DataPair(xs, ys)


def load_metadata(path: Path | str) -> list[PairMeta]:
    """Parse a pairmeta file: id, cause start/end, effect start/end, weight.

    Ground truth is x-causes-y exactly when the cause block starts at the
    first column.
    """
    rows: list[PairMeta] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) != 6:
                raise ParseError(f"{path}: expected 6 fields, got {len(tokens)}", line_no)
            try:
                pair_id = int(tokens[0])
                cause = (int(tokens[1]), int(tokens[2]))
                effect = (int(tokens[3]), int(tokens[4]))
                weight = float(tokens[5])
            except ValueError as exc:
                raise ParseError(f"{path}: {exc}", line_no) from exc
            if weight <= 0:
                raise ParseError(f"{path}: weight must be positive, got {weight}", line_no)
            ground_truth = Direction.X_TO_Y if cause[0] == 1 else Direction.Y_TO_X
            rows.append(
                PairMeta(
                    pair_id=pair_id,
                    cause_columns=cause,
                    effect_columns=effect,
                    weight=weight,
                    ground_truth=ground_truth,
                )
            )
    return rows


def _pair_file(corpus_dir: Path, pair_id: int) -> Path:
    return corpus_dir / f"pair{pair_id:04d}.txt"


def run_benchmark(
    corpus_dir: Path | str,
    cfg: Config,
    rng: RngStream,
    excluded_ids: Iterable[int] = PAPER_EXCLUDED_IDS,
) -> BenchmarkReport:
    """Score every non-excluded pair of a corpus directory.

    Each pair runs on its own stream derived from the pair id, so results
    are independent of evaluation order and reproducible under the seed.
    """
    corpus = Path(corpus_dir)
    metadata = load_metadata(corpus / "pairmeta.txt")
    excluded_set = frozenset(excluded_ids)

    results: list[PairResult] = []
    excluded: list[tuple[int, str]] = []
    for meta in sorted(metadata, key=lambda m: m.pair_id):
        if meta.pair_id in excluded_set:
            excluded.append((meta.pair_id, EXCLUSION_REASON))
            continue
        try:
            pair = load_pair(_pair_file(corpus, meta.pair_id))
            ensemble = ensemble_infer(pair, cfg, rng.derive(meta.pair_id))
            results.append(
                PairResult(
                    pair_id=meta.pair_id,
                    direction=ensemble.majority,
                    p_difference=ensemble.mean_p_difference,
                    correct=ensemble.majority == meta.ground_truth,
                    weight=meta.weight,
                )
            )
        except (LatentIvError, OSError) as exc:
            logger.warning("pair %d failed: %s", meta.pair_id, exc)
            results.append(
                PairResult(
                    pair_id=meta.pair_id,
                    direction=None,
                    p_difference=None,
                    correct=False,
                    weight=meta.weight,
                    error=str(exc),
                )
            )

    if results:
        total_weight = sum(r.weight for r in results)
        weighted = sum(r.weight for r in results if r.correct) / total_weight
        unweighted = sum(1 for r in results if r.correct) / len(results)
    else:
        weighted = None
        unweighted = None
    return BenchmarkReport(
        per_pair=tuple(results),
        excluded=tuple(excluded),
        weighted_accuracy=weighted,
        unweighted_accuracy=unweighted,
        mode=cfg.decision_mode,
        ensemble=cfg.n_folds > 1,
        config=cfg,
    )


def report_to_dict(report: BenchmarkReport) -> dict:
    """JSON-friendly dict of a report, stable across runs for a fixed seed."""
    return {
        "weighted_accuracy": report.weighted_accuracy,
        "unweighted_accuracy": report.unweighted_accuracy,
        "mode": report.mode.value,
        "ensemble": report.ensemble,
        "config": config_to_dict(report.config),
        "excluded": [{"id": pair_id, "reason": reason} for pair_id, reason in report.excluded],
        "per_pair": [
            {
                "id": r.pair_id,
                "verdict": r.direction.value if r.direction is not None else "failed",
                "p_difference": r.p_difference,
                "correct": r.correct,
                "weight": r.weight,
                "error": r.error,
            }
            for r in report.per_pair
        ],
    }


def write_report_json(report: BenchmarkReport, path: Path | str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(report_to_dict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_report_csv(report: BenchmarkReport, path: Path | str) -> None:
    """Per-pair rows with the fixed column order id, verdict, p_difference,
    correct, weight."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_COLUMNS)
        for r in report.per_pair:
            writer.writerow(
                [
                    r.pair_id,
                    r.direction.value if r.direction is not None else "failed",
                    "" if r.p_difference is None else repr(r.p_difference),
                    str(r.correct).lower(),
                    repr(r.weight),
                ]
            )
