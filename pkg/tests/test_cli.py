import io
import json
import subprocess
import sys

import pytest

from qmqv.cli import run

from .conftest import QUIVER_DIR

ALL_FIXTURES = sorted(p.name for p in QUIVER_DIR.glob("*.json"))


def call(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


def fixture(name):
    return QUIVER_DIR / f"{name}.json"


def test_relations_quantum_plane():
    code, text = call("relations", fixture("kronecker_1_2"), "--kind", "Oq")
    data = json.loads(text)
    assert code == 0 and data["schema"] == 1 and len(data["relations"]) == 1
    assert data["relations"][0]["family"] == "aa:e"


def test_relations_jordan_1():
    code, text = call("relations", fixture("jordan_1"), "--kind", "Dq")
    assert code == 0 and len(json.loads(text)["relations"]) == 1


def test_relations_kronecker_22_counts():
    _, text = call("relations", fixture("kronecker_2_2"))
    assert json.loads(text)["families"] == [["aa:e", 6], ["dd:e", 6], ["ad:e", 16]]


def test_relations_text():
    code, text = call("relations", fixture("kronecker_1_1"), "--format", "text")
    assert code == 0
    assert "[ad:e] (q^-1) ∂(e)^1_1 a(e)^1_1 - (q) a(e)^1_1 ∂(e)^1_1 - 1 = 0" in text


def test_verify_all_calogero_moser():
    code, text = call("verify", fixture("calogero_moser_1_1"), "--suite", "all")
    data = json.loads(text)
    assert code == 0 and data["status"] == "pass"
    assert len(data["checks"]) >= 6
    assert all(c["status"] == "pass" for c in data["checks"])


def test_verify_qybe_per_dimension():
    _, text = call("verify", fixture("calogero_moser_1_2"), "--suite", "qybe")
    assert [c["parameters"]["N"] for c in json.loads(text)["checks"]] == [1, 2]


def test_verify_fourier_refusal_exit_2():
    code, text = call("verify", fixture("jordan_2"), "--suite", "fourier")
    data = json.loads(text)
    assert code == 2
    assert data["checks"][0]["details"]["reason"] == "unsupported: requires d=1"


def test_flatness_exit_codes():
    assert call("flatness", fixture("a2_1_1"))[0] == 0
    code, text = call("flatness", fixture("jordan_2"))
    assert code == 1 and json.loads(text)["checks"][0]["witness"]


def test_hilbert_quantum_plane():
    code, text = call("hilbert", fixture("kronecker_1_2"), "--kind", "Oq", "--max-degree", "4")
    rows = json.loads(text)["table"]
    assert code == 0 and [r["graded"] for r in rows] == [1, 2, 3, 4, 5]


def test_hilbert_kronecker_11_and_zero():
    _, text = call("hilbert", fixture("kronecker_1_1"), "--max-degree", "3")
    assert [r["filtered"] for r in json.loads(text)["table"]] == [1, 3, 6, 10]
    _, text = call("hilbert", fixture("kronecker_1_1"), "--max-degree", "0", "--format", "text")
    assert text.splitlines()[-1] == "0  1  1  1"


def test_moment_and_degenerate():
    code, text = call("moment", fixture("calogero_moser_1_1"))
    data = json.loads(text)
    assert code == 0 and [m["vertex"] for m in data["moments"]] == ["u", "v"]
    code, text = call("degenerate", fixture("kronecker_1_1"), "--format", "text")
    assert code == 0 and "h^2: (-L_v) + (2)*d[e]^1_1.a[e]^1_1" in text
    code, _ = call("degenerate", fixture("jordan_1"))
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["bogus", "x.json"],
    ["relations"],
    ["relations", "/nonexistent.json"],
    ["verify", str(QUIVER_DIR / "a2_1_1.json"), "--suite", "nope"],
    ["hilbert", str(QUIVER_DIR / "a2_1_1.json"), "--max-degree", "-1"],
])
def test_usage_errors(argv):
    assert call(*argv)[0] == 3


def test_malformed_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [{"id": "u", "dim": 0}]}')
    assert call("relations", bad)[0] == 3


def test_json_side_output(tmp_path):
    target = tmp_path / "out.json"
    code, text = call("flatness", fixture("a2_1_1"), "--format", "text", "--json", target)
    assert code == 0 and json.loads(target.read_text())["status"] == "pass"


def test_guard_gives_inconclusive(monkeypatch):
    monkeypatch.setenv("QMQV_MAX_WORDS", "10")
    code, text = call("hilbert", fixture("kronecker_2_2"), "--max-degree", "3")
    assert code == 2 and json.loads(text)["status"] == "inconclusive_at_bound"


COMMANDS = [
    ("relations",), ("verify", "--suite", "all"), ("flatness",), ("hilbert",), ("moment",), ("degenerate",),
]


@pytest.mark.parametrize("name", ALL_FIXTURES)
@pytest.mark.parametrize("cmd", COMMANDS, ids=lambda c: c[0])
def test_deterministic_byte_identical(name, cmd):
    argv = [cmd[0], fixture(name[:-5]), *cmd[1:], "--deterministic"]
    first = call(*argv)
    second = call(*argv)
    assert first == second
    assert "elapsed_ms" not in first[1]


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "qmqv.cli", "flatness", str(fixture("jordan_2")),
                          "--format", "text"], capture_output=True, text=True)
    assert res.returncode == 1 and "flat: False" in res.stdout
