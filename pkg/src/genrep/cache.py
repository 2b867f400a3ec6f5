"""Content-addressed on-disk cache for catalogs and character tables.

Entries live under ``<root>/<kind>/<ring id>/<key digest>.json``.  Every
entry is validated when loaded; anything that fails is deleted with a warning
and the caller recomputes.
"""

from __future__ import annotations

import hashlib
import importlib
import json
import os
import warnings
from pathlib import Path

from .catalog import Catalog, ModuleIsoClass, class_id_for, get_catalog
from .errors import GenrepError
from .groups import CharacterTable
from .modules import FiniteModule, verify_module
from .rings import FiniteRing, canonical_json


class CacheWarning(UserWarning):
    pass


def default_root() -> Path:
    return Path(os.environ.get("GENREP_CACHE", "./.genrep-cache"))


class Cache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_root()
        self.hits = 0
        self.misses = 0
        self.evictions = 0

    def _path(self, kind: str, ring: FiniteRing, params: dict) -> Path:
        key = canonical_json({"kind": kind, "ring": ring.canonical_id, "params": params})
        digest = hashlib.sha256(key.encode()).hexdigest()[:24]
        return self.root / kind / ring.canonical_id / f"{digest}.json"

    def _read(self, path: Path):
        if not path.exists():
            self.misses += 1
            return None
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            body = canonical_json(doc["payload"])
            if hashlib.sha256(body.encode()).hexdigest() != doc["digest"]:
                raise ValueError("digest mismatch")
            return doc["payload"]
        except (ValueError, KeyError, TypeError) as exc:
            self._evict(path, exc)
            return None

    def _evict(self, path: Path, reason) -> None:
        warnings.warn(f"evicting corrupt cache entry {path}: {reason}", CacheWarning, stacklevel=3)
        self.evictions += 1
        self.misses += 1
        try:
            path.unlink()
        except FileNotFoundError:
            pass

    def _write(self, path: Path, payload) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        body = canonical_json(payload)
        doc = {"digest": hashlib.sha256(body.encode()).hexdigest(), "payload": payload}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(canonical_json(doc), encoding="utf-8")
        tmp.replace(path)

    # -- catalogs -----------------------------------------------------------
    def load_catalog(self, ring: FiniteRing, depth: int) -> Catalog | None:
        """Install a cached catalog of at least ``depth`` into the in-process registry."""
        catmod = importlib.import_module("genrep.catalog")
        existing = catmod._CATALOGS.get(ring.canonical_id)
        path = self._path("catalog", ring, {"depth": depth})
        if existing is not None and existing.depth >= depth:
            return existing
        payload = self._read(path)
        if payload is None:
            return None
        try:
            cat = Catalog(ring)
            for entry in payload["classes"]:
                M = FiniteModule(ring, entry["add"], entry["act"], entry["generators"],
                                 {"kind": "catalog", "length": entry["length"]})
                if verify_module(M, limit=1) or class_id_for(M, entry["length"]) != entry["class_id"]:
                    raise ValueError(f"class {entry['class_id']} does not validate")
                cls = ModuleIsoClass(M, entry["class_id"], entry["length"], M.canonical_invariants)
                cat.classes.append(cls)
                cat.by_id[cls.class_id] = cls
            cat.depth = payload["depth"]
        except (GenrepError, ValueError, KeyError, TypeError) as exc:
            self._evict(path, exc)
            return None
        self.hits += 1
        catmod._CATALOGS[ring.canonical_id] = cat
        return cat

    def store_catalog(self, ring: FiniteRing, depth: int) -> None:
        if self._path("catalog", ring, {"depth": depth}).exists():
            return
        cat = get_catalog(ring, depth)
        classes = [{"class_id": c.class_id, "length": c.length, **{
            k: v for k, v in c.representative.payload().items() if k != "ring"}}
            for c in cat.upto(depth)]
        self._write(self._path("catalog", ring, {"depth": depth}), {"depth": depth, "classes": classes})

    # -- character tables ---------------------------------------------------
    def load_table(self, ring: FiniteRing, cls: ModuleIsoClass, q: int) -> CharacterTable | None:
        G = cls.aut_group
        if q in G._tables:
            return G._tables[q]
        path = self._path("chartable", ring, {"class_id": cls.class_id, "q": q})
        payload = self._read(path)
        if payload is None:
            return None
        try:
            if payload["class_sizes"] != list(G.class_sizes) or payload["q"] != q:
                raise ValueError("class data does not match the group")
            T = CharacterTable(G, q, [list(map(int, r)) for r in payload["rows"]],
                               [int(d) for d in payload["degrees"]])
            T.check()
        except (GenrepError, ValueError, KeyError, TypeError) as exc:
            self._evict(path, exc)
            return None
        self.hits += 1
        G._tables[q] = T
        return T

    def store_table(self, ring: FiniteRing, cls: ModuleIsoClass, T: CharacterTable) -> None:
        path = self._path("chartable", ring, {"class_id": cls.class_id, "q": T.q})
        self._write(path, T.to_json())

    def warm(self, ctx) -> None:
        """Load or compute and store every table of a context."""
        for cls in ctx.classes():
            if self.load_table(ctx.ring, cls, ctx.q) is None or not self._path(
                    "chartable", ctx.ring, {"class_id": cls.class_id, "q": ctx.q}).exists():
                self.store_table(ctx.ring, cls, ctx.table(cls))
