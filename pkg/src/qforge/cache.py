"""On-disk, content-addressed cache: <root>/<datum digest>/<kind>/<key>.json."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

ENV_VAR = "QFORGE_CACHE_DIR"

log = logging.getLogger("qforge.cache")


def default_root():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "qforge"


def _safe_name(key):
    """File name for a parameter key; long or odd keys are hashed."""
    if len(key) <= 80 and all(c.isalnum() or c in ",-_." for c in key):
        return key
    return hashlib.sha256(key.encode()).hexdigest()[:32]


class Cache:
    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_root()
        self.warnings = []

    def store(self, datum):
        return DatumStore(self, datum.digest())

    def warn(self, message):
        self.warnings.append(message)
        log.warning(message)


class DatumStore:
    """The slice of a cache belonging to one datum."""

    def __init__(self, cache, digest):
        self.cache = cache
        self.digest = digest
        self.dir = cache.root / digest

    def path(self, kind, key):
        return self.dir / kind / (_safe_name(key) + ".json")

    def get(self, kind, key):
        p = self.path(kind, key)
        try:
            text = p.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            self.cache.warn(f"unreadable cache entry {p}: {exc}; rebuilding")
            return None
        try:
            doc = json.loads(text)
            if doc.get("key") != key or "data" not in doc:
                raise ValueError("key mismatch")
            return doc["data"]
        except (ValueError, AttributeError) as exc:
            self.cache.warn(f"corrupt cache entry {p} ({exc}); rebuilding")
            return None

    def put(self, kind, key, data):
        p = self.path(kind, key)
        text = json.dumps({"key": key, "data": data}, sort_keys=True, separators=(",", ":"))
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, p)
        except OSError as exc:
            self.cache.warn(f"could not write cache entry {p}: {exc}")

    def warn(self, kind, what):
        self.cache.warn(f"invalid cached {kind} for {what} in {self.dir}; rebuilding")


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)
