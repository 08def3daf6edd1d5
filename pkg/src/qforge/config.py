"""
Job configuration files.

The format is TOML restricted to three sections:

    [graph]
    vertices = ["1", "2"]
    edges = [["1", "2"]]

    [task]
    kind = "verify"                 # optional, must match the subcommand
    depth = 4
    weights = [{1 = 1, 2 = 0}]      # integer maps vertex = value
    blocks = [{1 = 1}, {2 = 1}]     # the sequence d^1, ..., d^N
    factors = ["fin", "inf"]        # crystal task: B(lambda) or B(lambda, inf)

    [output]
    dir = "out"

Vertices missing from a map default to 0.  Unknown keys are errors.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import tomli

from .rootdata import DatumError, build_datum, is_dominant

TASKS = ("dims", "crystal", "tensor", "cb", "verify")

SCHEMA = {
    "graph": {"vertices", "edges"},
    "task": {"kind", "depth", "weights", "blocks", "factors", "seed"},
    "output": {"dir"},
}


class ConfigError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class JobConfig:
    datum: object
    task: str | None = None
    depth: int = 4
    weights: list = field(default_factory=list)
    blocks: list = field(default_factory=list)
    factors: list = field(default_factory=list)
    seed: int = 0
    out_dir: str | None = None


def _locate(text, section, key):
    """(line, column) of a key inside a section, 1-based; None if not found."""
    current = None
    pat = re.compile(r"\s*(\"?)" + re.escape(key) + r"\1\s*=")
    for n, line in enumerate(text.splitlines(), 1):
        head = re.match(r"\s*\[\s*([^\]\s]+)\s*\]", line)
        if head:
            current = head.group(1)
            if key == current and section is None:
                return n, line.index(key) + 1
            continue
        if current == section:
            m = pat.match(line)
            if m:
                return n, line.index(key) + 1
    return None, None


def _field_error(text, section, key, message):
    line, col = _locate(text, section, key)
    return ConfigError(f"[{section}] {key}: {message}", line, col)


def _int_map(datum, value, text, section, key):
    if not isinstance(value, dict):
        raise _field_error(text, section, key, "expected a map vertex = value")
    out = [0] * datum.rank
    for v, c in value.items():
        if v not in datum.vertices:
            raise _field_error(text, section, key, f"unknown vertex {v!r}")
        if not isinstance(c, int) or isinstance(c, bool):
            raise _field_error(text, section, key, f"value for {v!r} must be an integer")
        out[datum.index(v)] = c
    return tuple(out)


def parse_config(text):
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        msg = getattr(exc, "msg", str(exc))
        raise ConfigError(f"parse error: {msg}", line, col) from None
    for section, body in doc.items():
        if section not in SCHEMA:
            line, col = _locate(text, None, section)
            raise ConfigError(f"unknown section [{section}]", line, col)
        if not isinstance(body, dict):
            line, col = _locate(text, None, section)
            raise ConfigError(f"{section} must be a section", line, col)
        for key in body:
            if key not in SCHEMA[section]:
                line, col = _locate(text, section, key)
                raise ConfigError(f"unknown key {key!r} in [{section}]", line, col)

    graph = doc.get("graph")
    if graph is None or "vertices" not in graph:
        raise ConfigError("[graph] vertices is required")
    verts = graph["vertices"]
    if not isinstance(verts, list) or not verts:
        raise _field_error(text, "graph", "vertices", "expected a nonempty list")
    edges = graph.get("edges", [])
    if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
        raise _field_error(text, "graph", "edges", "expected a list of vertex pairs")
    try:
        datum = build_datum(verts, edges)
    except DatumError as exc:
        raise _field_error(text, "graph", "edges", str(exc)) from None

    task = doc.get("task", {})
    job = JobConfig(datum=datum)
    if "kind" in task:
        if task["kind"] not in TASKS:
            raise _field_error(text, "task", "kind", f"must be one of {', '.join(TASKS)}")
        job.task = task["kind"]
    if "depth" in task:
        d = task["depth"]
        if not isinstance(d, int) or isinstance(d, bool) or d < 0:
            raise _field_error(text, "task", "depth", "must be an integer >= 0")
        job.depth = d
    if "seed" in task:
        if not isinstance(task["seed"], int):
            raise _field_error(text, "task", "seed", "must be an integer")
        job.seed = task["seed"]
    for key in ("weights", "blocks"):
        if key in task:
            if not isinstance(task[key], list):
                raise _field_error(text, "task", key, "expected a list of maps")
            setattr(job, key, [_int_map(datum, m, text, "task", key) for m in task[key]])
    for b in job.blocks:
        if any(c < 0 for c in b):
            raise _field_error(text, "task", "blocks", "framing degrees must be nonnegative")
    if "factors" in task:
        fs = task["factors"]
        if not isinstance(fs, list) or any(f not in ("fin", "inf") for f in fs):
            raise _field_error(text, "task", "factors", 'entries must be "fin" or "inf"')
        if len(fs) != len(job.weights):
            raise _field_error(text, "task", "factors", "needs one entry per weight")
        job.factors = list(fs)
        for f, w, n in zip(fs, job.weights, range(len(fs))):
            if f == "fin" and not is_dominant(w):
                raise _field_error(text, "task", "weights",
                                   f"weight {n + 1} must be dominant for a B(lambda) factor")
    out = doc.get("output", {})
    if "dir" in out:
        if not isinstance(out["dir"], str):
            raise _field_error(text, "output", "dir", "must be a string")
        job.out_dir = out["dir"]
    return job


def require_dominant(job, text_hint="weights"):
    for n, w in enumerate(job.weights):
        if not is_dominant(w):
            raise ConfigError(f"[task] {text_hint}: weight {n + 1} {w} must be dominant")


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text)
