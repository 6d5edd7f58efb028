"""On-disk cache of homology results keyed by the hash of a complex's text form."""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .homology import homology_all
from .io import dump_complex


def complex_key(X) -> str:
    return hashlib.sha256(dump_complex(X).encode()).hexdigest()


def homology_record(X) -> list[dict]:
    return [{"degree": h.degree, "rank": h.rank, "torsion": list(h.torsion)} for h in homology_all(X)]


class HomologyCache:
    """Directory of ``<sha256>.json`` files."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str):
        p = self._path(key)
        if not p.exists():
            return None
        with open(p) as fh:
            return json.load(fh)

    def put(self, key: str, value) -> None:
        p = self._path(key)
        tmp = p.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump(value, fh, sort_keys=True)
        os.replace(tmp, p)

    def homology(self, X) -> list[dict]:
        key = complex_key(X)
        hit = self.get(key)
        if hit is not None:
            return hit
        value = homology_record(X)
        self.put(key, value)
        return value


def cached_homology(X, cache: HomologyCache | None) -> list[dict]:
    return cache.homology(X) if cache is not None else homology_record(X)


def format_group(rec: dict) -> str:
    parts = []
    if rec["rank"]:
        parts.append("Z" if rec["rank"] == 1 else f"Z^{rec['rank']}")
    parts += [f"Z_{t}" for t in rec["torsion"]]
    return " + ".join(parts) if parts else "0"
