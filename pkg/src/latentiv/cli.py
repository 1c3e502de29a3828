"""Command-line front end.

Subcommands: ``infer`` (one pair file -> JSON verdict), ``simulate``
(write a synthetic sample to disk), ``benchmark`` (score a corpus
directory), and ``pcurve`` (p-values of the latent-variable tests as a
function of sample size, CSV). Exit codes: 0 success, 1 data error,
2 usage/configuration error. Every run is a pure function of its inputs,
flags, and seed, and the resolved configuration is part of the output.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .benchmark import load_pair, run_benchmark, write_report_csv, write_report_json
from .citest import ci_test_cor, ci_test_mi
from .core import (
    Config,
    ConfigError,
    DecisionMode,
    LatentIvError,
    RngStream,
    TestKind,
    config_to_dict,
)
from .inference import ensemble_infer, forced_choice, infer_direction
from .synthetic import ScmParams, Scenario, Setting, generate, write_sample

_EXIT_OK = 0
_EXIT_DATA = 1
_EXIT_USAGE = 2


def _ascending_grid(text: str) -> list[int]:
    try:
        grid = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid n-grid: {exc}") from exc
    if not grid or any(n < 1 for n in grid) or sorted(grid) != grid:
        raise argparse.ArgumentTypeError("n-grid must be ascending positive integers")
    return grid


def _common_flags(parser: argparse.ArgumentParser, default_folds: int, default_mode: str) -> None:
    parser.add_argument("--k-clusters", type=int, default=15, help="clusters per instrument")
    parser.add_argument("--alpha", type=float, default=0.05, help="significance threshold")
    parser.add_argument("--folds", type=int, default=default_folds, help="ensemble folds (1 = single shot)")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--mode", choices=["strict", "forced"], default=default_mode)
    parser.add_argument("--test", choices=["cor", "mi"], default=None,
                        help="independence test (default: cor; pcurve picks by setting)")
    parser.add_argument("--no-standardize", action="store_true",
                        help="skip z-scoring before clustering")
    parser.add_argument("--out", default=None, help="output path (file or directory per subcommand)")


def _build_config(args: argparse.Namespace, default_test: str = "cor") -> Config:
    return Config(
        k_clusters=args.k_clusters,
        alpha=args.alpha,
        n_folds=args.folds,
        seed=args.seed,
        test_kind=TestKind(args.test if args.test is not None else default_test),
        standardize=not args.no_standardize,
        decision_mode=DecisionMode(args.mode),
    )


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_infer(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    pair = load_pair(args.input)
    rng = RngStream(cfg.seed)
    if cfg.n_folds == 1:
        decide = infer_direction if cfg.decision_mode is DecisionMode.STRICT_TREE else forced_choice
        verdict = decide(pair, cfg, rng)
        payload = {
            "direction": verdict.direction.value,
            "p_y_indep_ix_given_x": verdict.p_y_indep_ix_given_x,
            "p_x_indep_iy_given_y": verdict.p_x_indep_iy_given_y,
            "p_difference": verdict.p_difference,
            "folds": 1,
            "config": config_to_dict(cfg),
        }
    else:
        ensemble = ensemble_infer(pair, cfg, rng)
        folds = ensemble.fold_verdicts
        payload = {
            "direction": ensemble.majority.value,
            "p_y_indep_ix_given_x": sum(v.p_y_indep_ix_given_x for v in folds) / len(folds),
            "p_x_indep_iy_given_y": sum(v.p_x_indep_iy_given_y for v in folds) / len(folds),
            "p_difference": ensemble.mean_p_difference,
            "folds": cfg.n_folds,
            "vote_counts": {d.value: c for d, c in ensemble.vote_counts.items()},
            "config": config_to_dict(cfg),
        }
    _print_json(payload)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return _EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _build_config(args)  # validates shared flags even though only seed is used
    sample = generate(
        Scenario(args.scenario), Setting(args.setting), args.n, ScmParams(), RngStream(cfg.seed)
    )
    out_dir = args.out if args.out else "."
    paths = write_sample(sample, out_dir)
    _print_json({"files": [str(p) for p in paths], "scenario": args.scenario,
                 "setting": args.setting, "n": args.n, "seed": cfg.seed})
    return _EXIT_OK


def _cmd_benchmark(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    report = run_benchmark(args.corpus_dir, cfg, RngStream(cfg.seed))
    out_dir = Path(args.out if args.out else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report_json(report, out_dir / "report.json")
    write_report_csv(report, out_dir / "report.csv")
    _print_json(
        {
            "weighted_accuracy": report.weighted_accuracy,
            "unweighted_accuracy": report.unweighted_accuracy,
            "pairs_scored": len(report.per_pair),
            "pairs_excluded": len(report.excluded),
            "report_json": str(out_dir / "report.json"),
            "report_csv": str(out_dir / "report.csv"),
        }
    )
    return _EXIT_OK


def _pcurve_rows(args: argparse.Namespace, cfg: Config) -> list[tuple]:
    scenario = Scenario(args.scenario)
    setting = Setting(args.setting)
    if args.test is not None:
        kind = TestKind(args.test)
    else:
        kind = (
            TestKind.CONDITIONAL_MUTUAL_INFORMATION
            if setting is Setting.DISCRETE_BINARY
            else TestKind.PARTIAL_CORRELATION
        )
    base = RngStream(cfg.seed)
    rows = []
    for grid_index, n in enumerate(args.n_grid):
        for replicate in range(args.replicates):
            stream = base.derive(grid_index * args.replicates + replicate)
            sample = generate(scenario, setting, n, ScmParams(), stream)
            tests = [
                ("y_indep_ix_given_x", sample.y, sample.i_x, sample.x),
                ("x_indep_iy_given_y", sample.x, sample.i_y, sample.y),
            ]
            if sample.u is not None:
                tests.append(("x_indep_y_given_u", sample.x, sample.y, sample.u))
            for label, a, b, z in tests:
                if kind is TestKind.PARTIAL_CORRELATION:
                    p = ci_test_cor(a, b, z, cfg).p_value
                else:
                    p = ci_test_mi(a, b, z, cfg).p_value
                rows.append((args.scenario, args.setting, n, replicate, label, p))
    return rows


def _cmd_pcurve(args: argparse.Namespace) -> int:
    cfg = _build_config(args, default_test=args.test if args.test else "cor")
    rows = _pcurve_rows(args, cfg)
    if args.out:
        out = open(args.out, "w", encoding="ascii", newline="")
    else:
        out = sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["scenario", "setting", "n", "replicate", "test", "p_value"])
        for row in rows:
            writer.writerow([row[0], row[1], row[2], row[3], row[4], repr(row[5])])
    finally:
        if args.out:
            out.close()
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latentiv",
        description="Infer the causal direction between two observed vectors "
        "via cluster-based latent instrumental variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_infer = sub.add_parser("infer", help="infer direction for one two-column data file")
    p_infer.add_argument("input", help="two-column whitespace-separated data file")
    _common_flags(p_infer, default_folds=1, default_mode="strict")
    p_infer.set_defaults(func=_cmd_infer)

    p_sim = sub.add_parser("simulate", help="write a synthetic sample to disk")
    p_sim.add_argument("scenario", choices=[s.value for s in Scenario])
    p_sim.add_argument("setting", choices=[s.value for s in Setting])
    p_sim.add_argument("n", type=int, help="number of samples")
    _common_flags(p_sim, default_folds=1, default_mode="strict")
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser("benchmark", help="score a cause-effect-pairs corpus directory")
    p_bench.add_argument("corpus_dir", help="directory with pairNNNN.txt files and pairmeta.txt")
    _common_flags(p_bench, default_folds=10, default_mode="forced")
    p_bench.set_defaults(func=_cmd_benchmark)

    p_curve = sub.add_parser("pcurve", help="p-values of the latent tests vs sample size (CSV)")
    p_curve.add_argument("scenario", choices=[s.value for s in Scenario])
    p_curve.add_argument("setting", choices=[s.value for s in Setting])
    p_curve.add_argument("--n-grid", type=_ascending_grid, default=[10, 100, 1000, 10000],
                         help="comma-separated ascending sample sizes")
    p_curve.add_argument("--replicates", type=int, default=20)
    _common_flags(p_curve, default_folds=1, default_mode="strict")
    p_curve.set_defaults(func=_cmd_pcurve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except (LatentIvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
