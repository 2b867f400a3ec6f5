"""Ring and module descriptions in JSON.

Ring::

    {"kind": "zn", "n": 4}
    {"kind": "gf", "q": 4}                      # or "p"/"e", optional "poly" (low-to-high)
    {"kind": "poly_quot", "base": {...}, "poly": [0, 0, 1]}
    {"kind": "product", "factors": [{...}, ...]}
    {"kind": "table", "add": [[...]], "mul": [[...]], "zero": 0, "one": 1}

Module (ring elements are written as ring indices)::

    {"kind": "free", "rank": 2}
    {"kind": "quotient", "rank": 2, "relations": [[1, 2], ...]}
    {"kind": "sum", "parts": [{...}, ...]}
    {"kind": "catalog", "class_id": "L2-4-3add3307ff"}
"""

from __future__ import annotations

import json
import os
import re

from .catalog import get_catalog
from .errors import SpecError
from .modules import (DEFAULT_MODULE_CAP, FiniteModule, direct_sum, free_module, quotient_module,
                      submodule_generated)
from .rings import DEFAULT_RING_CAP, FiniteRing, build_ring


def read_json(source: str):
    """Parse a JSON file path or an inline JSON document."""
    text = source
    if not source.lstrip().startswith(("{", "[")):
        if not os.path.exists(source):
            raise SpecError(f"no such file: {source}")
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON in {source!r}: {exc}") from exc


def load_ring(source: str, cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    try:
        return build_ring(read_json(source), cap=cap)
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed ring description: {exc}") from exc


def build_module(R: FiniteRing, spec, cap: int | None = DEFAULT_MODULE_CAP) -> FiniteModule:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("module description must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "free":
            return free_module(R, int(spec["rank"]), cap=cap)
        if kind == "quotient":
            d = int(spec["rank"])
            F = free_module(R, d, cap=cap)
            rels = []
            for rel in spec.get("relations", []):
                if len(rel) != d or any(not 0 <= int(c) < len(R) for c in rel):
                    raise SpecError(f"relation {rel} is not an element of R^{d}")
                rels.append(sum(int(c) * len(R) ** i for i, c in enumerate(rel)))
            Q, _ = quotient_module(F, submodule_generated(F, rels))
            Q.provenance = {"kind": "quotient", "rank": d, "relations": spec.get("relations", [])}
            return Q
        if kind == "sum":
            parts = [build_module(R, p, cap) for p in spec["parts"]]
            return direct_sum(*parts, cap=cap)
        if kind == "catalog":
            cid = spec["class_id"]
            m = re.match(r"L(\d+)-", cid)
            if not m:
                raise SpecError(f"malformed class id {cid!r}")
            cat = get_catalog(R, int(m.group(1)))
            try:
                return cat.get(cid).representative
            except KeyError as exc:
                raise SpecError(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"malformed module description: {exc}") from exc
    raise SpecError(f"unknown module kind {kind!r}")


def load_module(R: FiniteRing, source: str, cap: int | None = DEFAULT_MODULE_CAP) -> FiniteModule:
    return build_module(R, read_json(source), cap)
