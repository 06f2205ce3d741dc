import json
import subprocess
import sys

import jsonschema
import pytest

from container_lab.cli import main
from container_lab.documents import load
from container_lab.report import report_schema

SCHEMA = report_schema()


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture
def edge_doc(tmp_path):
    return write(tmp_path, "edge.json", '{"n": 2, "edges": [[0, 1]]}')


def report_of(path):
    data = json.loads(open(path).read())
    jsonschema.validate(data, SCHEMA)
    return data


def test_schema_is_valid_json_schema():
    jsonschema.Draft202012Validator.check_schema(SCHEMA)


def test_generate_triangles(tmp_path, capsys):
    out = tmp_path / "t4.json"
    code, _, _ = run(capsys, "generate", "triangles", "--n", "4", "--out", str(out))
    assert code == 0
    doc = load(out)
    assert (doc.n, len(doc.edges)) == (6, 4)


def test_generate_aps_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "aps", "--n", "5", "--k", "3")
    assert code == 0 and len(json.loads(out)["edges"]) == 4


def test_generate_random_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "generate", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "7",
                   "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_missing_flag(capsys):
    code, _, err = run(capsys, "generate", "random", "--n", "10")
    assert code == 2 and "--r" in err


def test_containers_cover_all(tmp_path, capsys):
    doc = tmp_path / "t4.json"
    run(capsys, "generate", "triangles", "--n", "4", "--out", str(doc))
    rep = tmp_path / "r.json"
    code, out, _ = run(capsys, "containers", str(doc), "--p", "1/72", "--all", "--out", str(rep))
    assert code == 0
    data = report_of(rep)
    assert [(c["fingerprint"], c["container"]) for c in data["results"]["containers"]] == [([], list(range(6)))]
    assert len(data["results"]["assignment"]) == 41


def test_containers_hardcore_star(tmp_path, capsys):
    doc = tmp_path / "star.json"
    run(capsys, "generate", "star", "--n", "3", "--out", str(doc))
    code, out, _ = run(capsys, "containers", str(doc), "--mode", "hardcore", "--p", "1/2", "--delta", "1/2",
                       "--all", "--json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert [(c["fingerprint"], c["container"]) for c in data["results"]["containers"]] == [([], [1, 2, 3]), ([0], [0])]


def test_containers_single_input_with_trace(tmp_path, capsys):
    doc = tmp_path / "k.json"
    run(capsys, "generate", "complete", "--n", "100", "--out", str(doc))
    code, out, _ = run(capsys, "containers", str(doc), "--p", "1/32", "--input-set", "", "--json")
    assert code == 0
    entry = json.loads(out)["results"]["containers"][0]
    assert entry["rounds"] == 35 and len(entry["container"]) == 65 and len(entry["trace"]) == 35


def test_containers_parameter_errors(tmp_path, capsys, edge_doc):
    doc = tmp_path / "r.json"
    run(capsys, "generate", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "7", "--out", str(doc))
    code, _, err = run(capsys, "containers", str(doc), "--p", "1/4", "--all")
    assert code == 2 and "1/72" in err
    code, _, err = run(capsys, "containers", edge_doc, "--p", "0.01", "--all")
    assert code == 2 and "num/den" in err
    code, _, err = run(capsys, "containers", edge_doc, "--p", "1/32", "--input-set", "0,1")
    assert code == 2 and "not independent" in err
    code, _, _ = run(capsys, "containers", edge_doc, "--mode", "hardcore", "--p", "1/2", "--all")
    assert code == 2


def test_verify_prop23_corpus(tmp_path, capsys):
    rep = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--suite", "prop23", "--corpus", "random", "--count", "100",
                       "--seed", "1", "--out", str(rep))
    assert code == 0
    data = report_of(rep)
    assert data["passed"] and data["input_digest"] is None
    assert {c["check"]: c["checked"] for c in data["checks"]}["key-inequality"] == 100


def test_verify_cover_on_k100(tmp_path, capsys):
    doc = tmp_path / "k.json"
    run(capsys, "generate", "complete", "--n", "100", "--out", str(doc))
    rep = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--suite", "cover-lemmas", str(doc), "--p", "1/32", "--out", str(rep))
    assert code == 0
    data = report_of(rep)
    empty = data["results"]["empty_input"]
    assert empty["rounds"] == 35 and len(empty["trace"]) == 35 and empty["container_size"] == 65
    assert "35 rounds" in out


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_verify_document_needs_p(capsys, edge_doc):
    code, _, err = run(capsys, "verify", "--suite", "janson", edge_doc)
    assert code == 2 and "--p" in err


@pytest.mark.parametrize("suite,extra", [("janson", ["--p", "1/2"]), ("lymb", []), ("prop23", ["--p", "1/3"]),
                                         ("prop21", ["--p", "1/10"]), ("crosscheck", ["--p", "1/32"]),
                                         ("hardcore-lemmas", ["--p", "1/2", "--delta", "1/2"]),
                                         ("interpolating-lemmas", ["--p", "1/2", "--delta", "1/2"]),
                                         ("packaged", ["--p", "1/32", "--trials", "20"])])
def test_verify_document_suites(tmp_path, capsys, edge_doc, suite, extra):
    rep = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--suite", suite, edge_doc, *extra, "--out", str(rep))
    assert code == 0
    assert report_of(rep)["passed"]


def test_verify_rejects_non_antichain(tmp_path, capsys):
    chain = write(tmp_path, "c.json", '{"n": 3, "edges": [[0], [0, 1]]}')
    code, _, _ = run(capsys, "verify", "--suite", "lymb", chain)
    assert code == 2  # rejected as input, not a failed check


def test_verify_failed_check_exits_1(tmp_path, capsys, monkeypatch):
    from container_lab.containers import HardcoreBuilder
    from container_lab.hypergraph import full_set

    monkeypatch.setattr(HardcoreBuilder, "finish", lambda self, state: (full_set(self.n), None))
    doc = tmp_path / "k.json"
    run(capsys, "generate", "complete", "--n", "8", "--out", str(doc))
    rep = tmp_path / "v.json"
    code, out, _ = run(capsys, "verify", "--suite", "hardcore-lemmas", str(doc), "--p", "1/2", "--delta", "1/2",
                       "--out", str(rep))
    assert code == 1 and "FAIL" in out
    data = report_of(rep)
    failed = [c for c in data["checks"] if not c["passed"]]
    assert failed and all("witness" in c for c in failed)


def test_bounds(capsys, edge_doc, tmp_path):
    code, out, _ = run(capsys, "bounds", edge_doc, "--which", "janson", "--p", "1/2", "--json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    assert code == 0
    assert data["results"]["mu"]["exact"] == "1/4" and data["results"]["delta_star"]["exact"] == "1/4"
    empty = write(tmp_path, "e.json", '{"n": 3, "edges": []}')
    code, out, _ = run(capsys, "bounds", empty, "--which", "harris", "--p", "1/3", "--json")
    assert code == 0 and json.loads(out)["results"]["product"]["exact"] == "1/1"
    chain = write(tmp_path, "c.json", '{"n": 3, "edges": [[0], [0, 1]]}')
    assert run(capsys, "bounds", chain, "--which", "lymb")[0] == 2
    code, out, _ = run(capsys, "bounds", edge_doc, "--which", "cover", "--p", "1/10", "--json")
    assert code == 0 and json.loads(out)["results"]["cover"] == [[0], [1]]
    code, out, _ = run(capsys, "bounds", edge_doc, "--which", "key", "--p", "1/2", "--json")
    assert code == 0 and json.loads(out)["results"]["exponent"]["exact"] == "2/3"


def test_prob(capsys, edge_doc, tmp_path):
    assert run(capsys, "prob", edge_doc, "--p", "1/2")[1].strip() == "3/4"
    assert run(capsys, "prob", edge_doc, "--p", "1/2", "--conditional", "0")[1].strip() == "1/3"
    assert run(capsys, "prob", edge_doc, "--p", "1/2", "--expected")[1].strip() == "2/3"
    empty = write(tmp_path, "e.json", '{"n": 3, "edges": []}')
    code, out, _ = run(capsys, "prob", empty, "--p", "1/2", "--mc", "100000", "7", "--json")
    assert code == 0 and json.loads(out)["results"]["mc"]["estimate"] == 1.0
    assert run(capsys, "prob", edge_doc, "--p", "0.5")[0] == 2


def test_guard_env(tmp_path, capsys, monkeypatch):
    doc = write(tmp_path, "w.json", json.dumps({"n": 30, "edges": [[0, 1]]}))
    assert run(capsys, "prob", doc, "--p", "1/2")[0] == 2
    monkeypatch.setenv("CONTAINER_LAB_GUARD_N", "40")
    assert run(capsys, "prob", doc, "--p", "1/2")[1].strip() == "3/4"


def test_bad_document(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", '{"n": 2, "edges": [[]]}')
    assert run(capsys, "prob", bad, "--p", "1/2")[0] == 2
    assert run(capsys, "prob", str(tmp_path / "missing.json"), "--p", "1/2")[0] == 2


def test_module_entry_point(edge_doc):
    proc = subprocess.run([sys.executable, "-m", "container_lab", "prob", edge_doc, "--p", "1/2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "3/4"
    proc = subprocess.run([sys.executable, "-m", "container_lab", "verify", "--suite", "bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
