"""On-disk cache of representation matrices.

One JSON file per (genus, p, generator).  The key includes the skein
convention marker, and every file carries the sha256 of its payload so a
corrupted or hand-edited file is ignored.  Writes go to a temporary file
in the same directory and are moved into place with ``os.replace``, which
keeps concurrent writers safe.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .skein import CONVENTION
from .tqft_rep import RepMatrix

CACHE_ENV = "TQFT_QUOTIENTS_CACHE"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "tqft_quotients"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def payload_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def cache_key(g: int, p: int, label: str) -> str:
    conv = hashlib.sha256(CONVENTION.encode()).hexdigest()[:12]
    return f"g{g}_p{p}_{label}_{conv}"


def matrix_document(M: RepMatrix) -> dict:
    """Self-describing JSON document for one matrix (cache and CLI output share it)."""
    payload = M.to_json()
    return {"schema_version": 1, "convention": CONVENTION, "sha256": payload_hash(payload), "matrix": payload}


class MatrixCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path(self, g: int, p: int, label: str) -> Path:
        return self.directory / f"{cache_key(g, p, label)}.json"

    def load(self, g: int, p: int, label: str) -> RepMatrix | None:
        path = self.path(g, p, label)
        try:
            blob = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if blob.get("convention") != CONVENTION or payload_hash(blob.get("matrix")) != blob.get("sha256"):
            return None
        return RepMatrix.from_json(blob["matrix"])

    def store(self, M: RepMatrix) -> str:
        blob = matrix_document(M)
        digest = blob["sha256"]
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(canonical_json(blob))
            os.replace(tmp, self.path(M.genus, M.p, M.label))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return digest

    def get_or_compute(self, g: int, p: int, label: str, compute) -> tuple[RepMatrix, bool]:
        """(matrix, hit) where hit tells whether the cache supplied it."""
        hit = self.load(g, p, label)
        if hit is not None:
            return hit, True
        M = compute()
        self.store(M)
        return M, False
