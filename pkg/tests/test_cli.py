from __future__ import annotations

import io
import json
import random
import subprocess
import sys

import pytest

from gybe.cli import run
from gybe.fusion import builtin_path
from gybe.linalg import ExactMatrix, save_matrix

JK6 = str(builtin_path("jk6"))
ISING = str(builtin_path("ising"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = call(*argv)
    return code, (json.loads(out) if out else None), err


@pytest.fixture
def jk6_matrix(tmp_path):
    path = tmp_path / "jk6_R.json"
    code, rep, _ = report("build-r", JK6, "--object", "2", "--set", "1,3", "--out", str(path))
    assert code == 0 and rep["path"] == "simple"
    return str(path)


def test_demos_pass():
    for name in ("jk6", "ising"):
        code, rep, _ = report("demo", name)
        assert code == 0
        assert all(rep["checks"].values()), rep["checks"]
    _, rep, _ = report("demo", "ising")
    assert rep["B3_image_order"] == 6


def test_gen_so_then_validate(tmp_path):
    out = tmp_path / "so7.json"
    code, rep, _ = report("gen-so", "--r", "3", "--out", str(out))
    assert code == 0 and rep["labels"][-2:] == ["Xeps", "Xeps'"]
    code, rep, _ = report("validate", str(out))
    assert code == 0 and rep["valid"] and rep["label_count"] == 7
    code, rep, _ = report("find-gybe", str(out))
    assert code == 0 and rep["count"] == 3
    assert [c["object"] for c in rep["certificates"]] == [["X1"], ["X2"], ["X3"]]


def test_gen_so_jk_relabel():
    code, rep, _ = report("gen-so", "--r", "1", "--relabel", "jk")
    assert code == 0 and rep["labels"] == ["0", "1", "2", "3", "4"]
    code, _, err = call("gen-so", "--r", "2", "--relabel", "jk")
    assert code == 2 and "r = 1" in err


def test_find_gybe_ising():
    code, rep, _ = report("find-gybe", ISING, "--max-summands", "2")
    assert code == 0
    assert rep["certificates"][0]["object"] == ["1", "psi"]


def test_verify_printed(jk6_matrix):
    code, rep, _ = report("verify", jk6_matrix, "--d", "2", "--m", "3", "--far-comm", "--braid-rep", "4")
    assert code == 0
    assert [c["check"] for c in rep["checks"]] == ["gybe", "far_commutativity", "braid_relations_B4"]
    assert [c["dimensions"] for c in rep["checks"]] == [16, 32, 32]


def test_verify_random_matrix_gives_witness(tmp_path):
    rng = random.Random(3)
    while True:
        m = ExactMatrix([[rng.randint(-2, 2) for _ in range(8)] for _ in range(8)], 24)
        if not m.is_singular():
            break
    path = tmp_path / "rand.json"
    save_matrix(m, path)
    code, rep, _ = report("verify", str(path), "--d", "2", "--m", "3")
    assert code == 1
    witness = rep["checks"][0]["witness"]
    assert len(witness) == 3 and all(isinstance(v, int) for v in witness)


def test_build_r_refusal():
    code, rep, _ = report("build-r", JK6, "--object", "1", "--set", "1,3")
    assert code == 1 and rep["certificate"] is None
    assert rep["refusal"]["label"] == "1"


def test_eigs(jk6_matrix):
    code, rep, _ = report("eigs", jk6_matrix, "--category", JK6, "--object", "2")
    assert code == 0
    assert rep["count"] == 3 == rep["eigenvalue_bound_l"]
    assert rep["annihilates"] and rep["within_bound"]
    code, rep, _ = report("eigs", jk6_matrix)
    assert code == 0 and rep["source"] == "numeric" and rep["count"] == 3


def test_group_order(jk6_matrix):
    code, rep, _ = report("group-order", jk6_matrix, "--d", "2", "--n", "3", "--projective")
    assert code == 0 and isinstance(rep["result"], int) and rep["closure_verified"]
    code, rep, _ = report("group-order", jk6_matrix, "--d", "2", "--n", "3", "--cap", "10")
    assert code == 0 and rep["result"] == "exceeded_cap"


def test_data_errors_exit_2(tmp_path):
    code, out, err = call("validate", str(tmp_path / "missing.json"))
    assert code == 2 and out == "" and len(err.strip().splitlines()) == 1
    bad = tmp_path / "bad.json"
    doc = json.loads(builtin_path("jk6").read_text())
    doc["fusion"] = doc["fusion"][:-1]
    bad.write_text(json.dumps(doc))
    code, _, err = call("validate", str(bad))
    assert code == 2 and "incomplete fusion table" in err
    code, _, err = call("build-r", JK6, "--object", "9", "--set", "1,3")
    assert code == 2
    code, _, _ = call("verify")
    assert code == 2


def test_output_is_deterministic(jk6_matrix):
    a = call("demo", "jk6")[1]
    b = call("demo", "jk6")[1]
    assert a == b
    a = call("--pretty", "find-gybe", JK6)[1]
    b = call("find-gybe", JK6, "--pretty")[1]
    assert a == b and a.startswith("{\n")


def test_help_mentions_schema():
    proc = subprocess.run(
        [sys.executable, "-m", "gybe", "verify", "--help"], capture_output=True, text=True, check=True
    )
    assert "JSON report" in proc.stdout and "witness" in proc.stdout
