"""Iso-class catalog L_d of modules of length at most d.

Classes of length ``l`` are found among the quotients of ``R^l`` of length
exactly ``l`` (every length-``l`` module is generated by ``l`` elements).
Building by length keeps representatives independent of the requested
depth, so a catalog to depth ``d`` is a prefix of the one to depth ``d+1``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvariantViolation
from .modules import (DEFAULT_MODULE_CAP, FiniteModule, Submodule, aut_group, free_module,
                      iso_test, quotient_module)
from .rings import FiniteRing, canonical_json


@dataclass
class ModuleIsoClass:
    representative: FiniteModule
    class_id: str
    length: int
    invariants: tuple

    @property
    def size(self) -> int:
        return len(self.representative)

    @cached_property
    def aut_group(self):
        return aut_group(self.representative)

    @property
    def aut_order(self) -> int:
        return self.aut_group.order

    @property
    def sort_key(self):
        return (self.length, self.invariants, self.class_id)

    def summary(self) -> dict:
        return {
            "class_id": self.class_id,
            "length": self.length,
            "size": self.size,
            "aut_order": self.aut_order,
            "cyclic_sizes": [list(p) for p in self.invariants[2]],
            "end_count": self.invariants[3],
        }


def class_id_for(M: FiniteModule, length: int) -> str:
    digest = hashlib.sha256(canonical_json(M.payload()).encode()).hexdigest()[:10]
    return f"L{length}-{len(M)}-{digest}"


class Catalog:
    def __init__(self, ring: FiniteRing, cap: int | None = DEFAULT_MODULE_CAP):
        self.ring = ring
        self.cap = cap
        self.depth = -1
        self.classes: list[ModuleIsoClass] = []
        self.by_id: dict[str, ModuleIsoClass] = {}

    def __repr__(self):
        return f"Catalog({self.ring.name}, depth={self.depth}, {len(self.classes)} classes)"

    def upto(self, d: int) -> list[ModuleIsoClass]:
        self.extend(d)
        return [c for c in self.classes if c.length <= d]

    def layer(self, length: int) -> list[ModuleIsoClass]:
        self.extend(length)
        return [c for c in self.classes if c.length == length]

    def extend(self, d: int) -> None:
        while self.depth < d:
            self._add_layer(self.depth + 1)

    def _add_layer(self, ell: int) -> None:
        F = free_module(self.ring, ell, cap=self.cap)
        L = F.lattice
        want = L.length - ell
        found: list[FiniteModule] = []
        for node in range(len(L)):
            if L.height[node] != want:
                continue
            Q, _ = quotient_module(F, Submodule(F, L.nodes[node]))
            if any(Q._cheap_invariants == P._cheap_invariants and iso_test(Q, P) is not None
                   for P in found):
                continue
            found.append(Q)
        layer = []
        for Q in found:
            Q.provenance = {"kind": "catalog", "length": ell}
            layer.append(ModuleIsoClass(Q, class_id_for(Q, ell), ell, Q.canonical_invariants))
        layer.sort(key=lambda c: c.sort_key)
        self.classes.extend(layer)
        for c in layer:
            self.by_id[c.class_id] = c
        self.depth = ell

    def get(self, class_id: str) -> ModuleIsoClass:
        if class_id not in self.by_id:
            raise KeyError(f"unknown class id {class_id!r}")
        return self.by_id[class_id]

    def match(self, M: FiniteModule) -> tuple[ModuleIsoClass, np.ndarray]:
        """Catalog class of M and an explicit isomorphism ``M -> representative``."""
        if M.ring.canonical_id != self.ring.canonical_id:
            raise ValueError("module lives over a different ring")
        ell = M.length
        for c in self.layer(ell):
            P = c.representative
            if P._cheap_invariants != M._cheap_invariants:
                continue
            iso = iso_test(M, P)
            if iso is not None:
                return c, iso
        raise InvariantViolation("module has no catalog class", {"size": len(M), "length": ell})


_CATALOGS: dict[str, Catalog] = {}


def get_catalog(R: FiniteRing, d_max: int = 0, cap: int | None = DEFAULT_MODULE_CAP) -> Catalog:
    cat = _CATALOGS.get(R.canonical_id)
    if cat is None:
        cat = Catalog(R, cap)
        _CATALOGS[R.canonical_id] = cat
    cat.extend(d_max)
    return cat


def catalog(R: FiniteRing, d_max: int, cap: int | None = DEFAULT_MODULE_CAP) -> list[ModuleIsoClass]:
    """Iso classes of length <= d_max, ordered by (length, invariants, class id)."""
    return get_catalog(R, d_max, cap).upto(d_max)


def classify(M: FiniteModule) -> tuple[ModuleIsoClass, np.ndarray]:
    return get_catalog(M.ring).match(M)
