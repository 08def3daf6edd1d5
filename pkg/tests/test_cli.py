import json
import subprocess
import sys

import pytest

from qforge.cli import main

A1 = """\
[graph]
vertices = ["1"]

[task]
depth = 3
weights = [{1 = 1}, {1 = 1}]
blocks = [{1 = 1}, {1 = 1}]
"""


@pytest.fixture
def cfg(tmp_path, monkeypatch):
    monkeypatch.setenv("QFORGE_CACHE_DIR", str(tmp_path / "cache"))
    p = tmp_path / "job.toml"
    p.write_text(A1)
    return p


def run(*args):
    return main([str(a) for a in args])


def test_dims(cfg, tmp_path):
    assert run("dims", "--config", cfg, "--out", tmp_path / "o") == 0
    lines = (tmp_path / "o" / "dims.tsv").read_text().splitlines()
    assert lines[0].split("\t") == ["degree", "height", "U-", "V(1)", "V(1)"]
    assert lines[1:] == ["0\t0\t1\t1\t1", "1\t1\t1\t1\t1", "2\t2\t1\t0\t0", "3\t3\t1\t0\t0"]


def test_crystal(cfg, tmp_path):
    assert run("crystal", "--config", cfg, "--out", tmp_path / "o", "--depth", "2") == 0
    dot = (tmp_path / "o" / "crystal.dot").read_text()
    doc = json.loads((tmp_path / "o" / "crystal.json").read_text())
    assert dot.startswith("digraph crystal")
    assert doc["crystal"] == "B(1,inf) (x) B(1,inf)" and doc["depth"] == 2


def test_tensor(cfg, tmp_path):
    assert run("tensor", "--config", cfg, "--out", tmp_path / "o") == 0
    lines = (tmp_path / "o" / "tensor.tsv").read_text().splitlines()
    assert lines[0] == "descriptor\tnu\tlhs_dim\trhs_dim\tstatus"
    assert "K[1|1]\t2\t2\t2\tequal" in lines


def test_cb(cfg, tmp_path):
    assert run("cb", "--config", cfg, "--out", tmp_path / "o", "--depth", "1") == 0
    doc = json.loads((tmp_path / "o" / "cb.json").read_text())
    depth1 = doc["spaces"][1]
    assert depth1["dim"] == 2
    leads = sorted(e["leading"] for e in depth1["elements"])
    assert leads == ["F1 xi (x) xi", "xi (x) F1 xi"]
    assert all(all(e["signed"].values()) for e in depth1["elements"])


def test_verify_and_fault(cfg, tmp_path, capsys):
    assert run("verify", "--config", cfg, "--out", tmp_path / "o") == 0
    assert "verma_commutator\tpass" in capsys.readouterr().out
    assert run("verify", "--config", cfg, "--out", tmp_path / "f", "--inject-fault", "e-action") == 1
    text = (tmp_path / "f" / "verify.tsv").read_text()
    assert "verma_commutator\tfail" in text
    # the hook is switched off again afterwards
    assert run("verify", "--config", cfg, "--out", tmp_path / "g") == 0


def test_usage_errors(cfg, tmp_path):
    assert run("dims", "--config", tmp_path / "missing.toml") == 2
    bad = tmp_path / "bad.toml"
    bad.write_text(A1.replace("weights", "wieghts"))
    assert run("dims", "--config", bad) == 2
    kind = tmp_path / "kind.toml"
    kind.write_text(A1.replace("depth = 3", 'kind = "cb"\ndepth = 3'))
    assert run("dims", "--config", kind, "--out", tmp_path / "o") == 2
    assert run("dims", "--config", cfg, "--depth", "-1") == 2
    nondom = tmp_path / "nd.toml"
    nondom.write_text(A1.replace("weights = [{1 = 1}", "weights = [{1 = -1}"))
    assert run("dims", "--config", nondom, "--out", tmp_path / "o") == 2
    with pytest.raises(SystemExit) as info:
        run("bogus", "--config", cfg)
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run("verify", "--config", cfg, "--inject-fault", "nope")
    assert info.value.code == 2


def test_console_script(cfg, tmp_path):
    out = subprocess.run([sys.executable, "-m", "qforge.cli", "dims", "--config", str(cfg),
                          "--out", str(tmp_path / "o"), "--no-cache"], capture_output=True, text=True)
    assert out.returncode == 0
    assert not (tmp_path / "cache").exists()


def test_run_crystal_a2(tmp_path):
    from qforge.cli import run
    from qforge.config import parse_config
    job = parse_config('[graph]\nvertices = ["1", "2"]\nedges = [["1", "2"]]\n[task]\n'
                       'kind = "crystal"\ndepth = 4\nweights = [{1 = 1}]\nfactors = ["fin"]\n')
    status, written = run(job, tmp_path)
    assert status == 0
    dot = (tmp_path / "crystal.dot").read_text()
    assert dot.count("[label=\"wt=") == 3
    assert dot.count("->") == 2
