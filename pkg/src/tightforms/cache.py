"""Append-only JSONL result cache.

Each line is one record keyed by the operation name, the exact Gram entries
(when the result belongs to a form) and the call parameters.  Records written
by another package version are ignored.  Writers take an exclusive advisory
lock on the file, so concurrent processes never interleave lines.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Optional

from . import __version__

CACHE_SCHEMA = 1
CACHE_ENV = "TIGHTFORMS_CACHE_DIR"
CACHE_FILE = "results.jsonl"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tightforms"


def record_key(op: str, form: Optional[list[int]], params: dict) -> str:
    blob = json.dumps({"op": op, "form": form, "params": params}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@contextmanager
def _locked(path: Path, mode: str):
    with open(path, mode) as fh:
        fcntl.flock(fh, fcntl.LOCK_EX if "a" in mode or "w" in mode else fcntl.LOCK_SH)
        try:
            yield fh
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


class ResultCache:
    """Lookup and append of cached payloads under ``directory``."""

    def __init__(self, directory=None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.path = self.directory / CACHE_FILE
        self._index: Optional[dict[str, Any]] = None

    def _load(self) -> dict[str, Any]:
        if self._index is None:
            self._index = {}
            if self.path.exists():
                with _locked(self.path, "r") as fh:
                    for line in fh:
                        try:
                            rec = json.loads(line)
                        except json.JSONDecodeError:
                            # a torn final line from a killed writer
                            continue
                        if rec.get("schema") == CACHE_SCHEMA and rec.get("version") == __version__:
                            self._index[rec["key"]] = rec["result"]
        return self._index

    def get(self, op: str, form: Optional[list[int]], params: dict):
        return self._load().get(record_key(op, form, params))

    def put(self, op: str, form: Optional[list[int]], params: dict, result) -> None:
        key = record_key(op, form, params)
        rec = {"schema": CACHE_SCHEMA, "version": __version__, "key": key, "op": op,
               "form": form, "params": params, "result": result}
        self.directory.mkdir(parents=True, exist_ok=True)
        with _locked(self.path, "a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        self._load()[key] = result

    def __len__(self):
        return len(self._load())
