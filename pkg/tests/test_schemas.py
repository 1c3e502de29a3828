import json
from pathlib import Path

import jsonschema
import pytest

import latentiv
from tests.conftest import make_clustered_chain, write_corpus
from tests.test_cli import run_cli

SCHEMA_DIR = Path(latentiv.__file__).parent / "schemas"


def load_schema(name: str) -> dict:
    schema = json.loads((SCHEMA_DIR / name).read_text())
    return _inline_refs(schema)


def _inline_refs(node):
    """Replace local file $refs with the referenced document (keeps the
    validation independent of resolver behavior across jsonschema versions)."""
    if isinstance(node, dict):
        if set(node) == {"$ref"} and node["$ref"].endswith(".schema.json"):
            return load_schema(node["$ref"])
        return {k: _inline_refs(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_inline_refs(v) for v in node]
    return node


@pytest.fixture(scope="module")
def corpus_and_outputs(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("schema_run")
    x1, y1 = make_clustered_chain(seed=501)
    corpus = write_corpus(tmp / "corpus", [(x1, y1, True, 1.0)])
    pair_file = corpus / "pair0001.txt"

    infer = run_cli("infer", str(pair_file), "--k-clusters", "5", "--seed", "2")
    infer_ensemble = run_cli(
        "infer", str(pair_file), "--k-clusters", "5", "--folds", "5", "--seed", "2"
    )
    bench_out = tmp / "bench"
    bench = run_cli(
        "benchmark", str(corpus), "--k-clusters", "5", "--folds", "1", "--out", str(bench_out)
    )
    sim_out = tmp / "sim"
    sim = run_cli("simulate", "confounded", "continuous", "30", "--out", str(sim_out))
    assert infer.returncode == bench.returncode == sim.returncode == 0
    return {
        "verdict": json.loads(infer.stdout),
        "verdict_ensemble": json.loads(infer_ensemble.stdout),
        "benchmark_summary": json.loads(bench.stdout),
        "benchmark_report": json.loads((bench_out / "report.json").read_text()),
        "simulate_manifest": json.loads(sim.stdout),
    }


def test_verdict_schema(corpus_and_outputs):
    schema = load_schema("verdict.schema.json")
    jsonschema.validate(corpus_and_outputs["verdict"], schema)
    jsonschema.validate(corpus_and_outputs["verdict_ensemble"], schema)


def test_benchmark_report_schema(corpus_and_outputs):
    jsonschema.validate(
        corpus_and_outputs["benchmark_report"], load_schema("benchmark_report.schema.json")
    )


def test_benchmark_summary_schema(corpus_and_outputs):
    jsonschema.validate(
        corpus_and_outputs["benchmark_summary"], load_schema("benchmark_summary.schema.json")
    )


def test_simulate_manifest_schema(corpus_and_outputs):
    jsonschema.validate(
        corpus_and_outputs["simulate_manifest"], load_schema("simulate_manifest.schema.json")
    )


def test_schemas_are_valid_draft7():
    for path in sorted(SCHEMA_DIR.glob("*.schema.json")):
        schema = json.loads(path.read_text())
        jsonschema.Draft7Validator.check_schema(schema)
