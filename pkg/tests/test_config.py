import pytest

from qforge.config import ConfigError, parse_config, require_dominant

GOOD = """\
[graph]
vertices = ["1", "2"]
edges = [["1", "2"]]

[task]
kind = "tensor"
depth = 3
weights = [{1 = 1}, {2 = 2}]
blocks = [{1 = 1}, {2 = 1}]

[output]
dir = "out"
"""


def test_parse_good():
    job = parse_config(GOOD)
    assert job.datum.cartan == ((2, -1), (-1, 2))
    assert job.task == "tensor" and job.depth == 3
    assert job.weights == [(1, 0), (0, 2)]
    assert job.blocks == [(1, 0), (0, 1)]
    assert job.out_dir == "out"


def _err(text):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value


def test_unknown_key_located():
    e = _err(GOOD.replace("weights =", "wieghts ="))
    assert (e.line, e.col) == (8, 1)
    assert "wieghts" in str(e) and str(e).startswith("line 8, column 1:")


def test_unknown_section():
    e = _err(GOOD + "\n[extra]\nx = 1\n")
    assert "unknown section" in str(e) and (e.line, e.col) == (14, 2)


def test_syntax_error_located():
    e = _err('[graph]\nvertices = ["1"\n')
    assert e.line is not None and "parse error" in str(e)


def test_loop_edge():
    e = _err('[graph]\nvertices = ["1"]\nedges = [["1", "1"]]\n')
    assert "loop" in str(e) and e.line == 3


def test_unknown_vertex_in_weight():
    e = _err(GOOD.replace("{2 = 2}", "{3 = 2}"))
    assert "unknown vertex" in str(e)


def test_bad_depth():
    assert "depth" in str(_err(GOOD.replace("depth = 3", "depth = -1")))


def test_negative_block():
    assert "nonnegative" in str(_err(GOOD.replace("blocks = [{1 = 1}", "blocks = [{1 = -1}")))


def test_factor_needs_dominant():
    text = GOOD.replace('kind = "tensor"', 'factors = ["fin", "inf"]').replace("{2 = 2}", "{2 = -1}")
    text = text.replace("{1 = 1}, {2 = -1}", "{1 = -1}, {2 = 1}")
    assert "dominant" in str(_err(text))


def test_require_dominant():
    job = parse_config(GOOD.replace("{2 = 2}", "{2 = -2}"))
    with pytest.raises(ConfigError):
        require_dominant(job)


def test_missing_graph():
    assert "vertices" in str(_err("[task]\ndepth = 1\n"))


def test_minimal_a1():
    job = parse_config('[graph]\nvertices = ["1"]\n[task]\nkind = "dims"\ndepth = 4\n')
    assert job.task == "dims" and job.depth == 4 and job.datum.cartan == ((2,),)


def test_finite_factor_negative_weight():
    e = _err('[graph]\nvertices = ["1"]\n[task]\nweights = [{1 = -1}]\nfactors = ["fin"]\n')
    assert "dominant" in str(e) and e.line == 4
