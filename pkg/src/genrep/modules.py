"""Finite right R-modules with enumerated elements.

A module over a :class:`FiniteRing` ``R`` is stored as two dense tables:
``add[m, m']`` and ``act[m, r]`` (the right action ``m·r``).  Element 0 is
always the zero vector.  Submodules are Python-int bitsets over element
indices (see :mod:`genrep.bits`).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import bits
from .errors import CapExceeded, SpecError
from .rings import FiniteRing, ValidationReport, canonical_json, zn

DEFAULT_MODULE_CAP = 4096
DEFAULT_SEARCH_CAP = 10_000_000
_CHUNK_CELLS = 1 << 22

IDX = np.int32


class FiniteModule:
    """A finite right module over ``ring``.

    ``generators`` is a distinguished generating tuple; ``provenance`` is a
    small JSON-able trace of how the module was built.
    """

    def __init__(self, ring: FiniteRing, add, act, generators=None, provenance=None,
                 labels=None, check=True):
        self.ring = ring
        self.add = np.ascontiguousarray(add, dtype=IDX)
        self.act = np.ascontiguousarray(act, dtype=IDX)
        self.add.setflags(write=False)
        self.act.setflags(write=False)
        n = self.add.shape[0]
        if self.add.shape != (n, n) or self.act.shape != (n, len(ring)):
            raise SpecError("module tables have inconsistent shapes")
        if check and (np.any(self.add[0] != np.arange(n))):
            raise SpecError("element 0 must be the additive identity")
        if generators is None:
            generators = greedy_generators(self, range(n))
        self.generators = tuple(int(g) for g in generators)
        self.provenance = provenance or {"kind": "table"}
        self.labels = labels
        if check and self.span(self.generators) != self.full_mask:
            raise SpecError("generators do not generate the module")

    # -- basic data -------------------------------------------------------
    @property
    def element_count(self) -> int:
        return self.add.shape[0]

    def __len__(self):
        return self.element_count

    def __repr__(self):
        return f"FiniteModule(|M|={len(self)}, gens={len(self.generators)}, {self.provenance.get('kind')})"

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self)) - 1

    @cached_property
    def neg(self) -> np.ndarray:
        return np.argmax(self.add == 0, axis=1).astype(IDX)

    def label(self, m: int) -> str:
        return self.labels[m] if self.labels else str(m)

    @cached_property
    def additive_orders(self) -> np.ndarray:
        n = len(self)
        order = np.zeros(n, dtype=np.int64)
        order[0] = 1
        x = np.arange(n)
        k = 1
        while np.any(order == 0):
            x = self.add[x, np.arange(n)]
            k += 1
            order[(order == 0) & (x == 0)] = k
        return order

    @cached_property
    def exponent(self) -> int:
        return int(self.additive_orders.max())

    @cached_property
    def additive_generators(self) -> tuple[int, ...]:
        gens, span = [], 1
        for m in range(len(self)):
            if not span >> m & 1:
                gens.append(m)
                span = self._additive_span(span, m)
        return tuple(gens)

    def _additive_span(self, mask: int, m: int) -> int:
        els = bits.to_indices(mask)
        multiples = [0]
        x = m
        while x != 0:
            multiples.append(x)
            x = int(self.add[x, m])
        return bits.from_indices(np.unique(self.add[np.ix_(els, multiples)]))

    # -- annihilators and cyclic submodules -------------------------------
    @cached_property
    def annihilators(self) -> list[int]:
        """``ann(m)`` as a bitset over ring elements."""
        packed = np.packbits(self.act == 0, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    @cached_property
    def cyclic_masks(self) -> list[int]:
        # mR = {m·r} is already closed: m·r + m·s = m·(r+s)
        return [bits.from_indices(row) for row in self.act]

    @cached_property
    def cyclic_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(bits.popcount(c) for c in self.cyclic_masks))

    def sum_masks(self, a: int, b: int) -> int:
        if bits.subset(b, a):
            return a
        if bits.subset(a, b):
            return b
        ea, eb = bits.to_indices(a), bits.to_indices(b)
        return bits.from_indices(np.unique(self.add[np.ix_(ea, eb)]))

    def span(self, elements) -> int:
        mask = 1
        for m in elements:
            mask = self.sum_masks(mask, self.cyclic_masks[int(m)])
        return mask

    # -- structure via the lattice ----------------------------------------
    @cached_property
    def lattice(self):
        from .posets import SubmoduleLattice
        return SubmoduleLattice(self)

    @property
    def length(self) -> int:
        return self.lattice.length

    @cached_property
    def end_count(self) -> int:
        return int(hom_tables(self, self).shape[0])

    @cached_property
    def canonical_invariants(self) -> tuple:
        sizes = self.cyclic_sizes
        multiset = tuple((s, sizes.count(s)) for s in sorted(set(sizes)))
        return (len(self), self.length, multiset, self.end_count)

    @cached_property
    def _cheap_invariants(self) -> tuple:
        anns = sorted(bits.popcount(a) for a in self.annihilators)
        return (len(self), self.cyclic_sizes, tuple(anns), tuple(sorted(self.additive_orders.tolist())))

    # -- serialization ------------------------------------------------------
    def payload(self) -> dict:
        return {
            "ring": self.ring.canonical_id,
            "add": self.add.tolist(),
            "act": self.act.tolist(),
            "generators": list(self.generators),
        }

    @cached_property
    def content_hash(self) -> str:
        return hashlib.sha256(canonical_json(self.payload()).encode()).hexdigest()


# -- construction -------------------------------------------------------------

def _check_cap(count: int, cap: int | None, what="module"):
    if cap is not None and count > cap:
        raise CapExceeded(f"{what} would have {count} elements (cap {cap})")


def _tuple_tables(ring: FiniteRing, coords: np.ndarray):
    """Coordinatewise add/act tables for elements given as rows of ``coords``."""
    n, k = coords.shape
    base = len(ring)
    weights = base ** np.arange(k, dtype=np.int64)
    add = np.zeros((n, n), dtype=np.int64)
    act = np.zeros((n, base), dtype=np.int64)
    for i in range(k):
        col = coords[:, i]
        add += ring.add[col[:, None], col[None, :]] * weights[i]
        act += ring.mul[col[:, None], np.arange(base)[None, :]] * weights[i]
    return add, act


def _free_coords(base: int, k: int) -> np.ndarray:
    n = base ** k
    idx = np.arange(n, dtype=np.int64)
    return np.stack([(idx // base ** i) % base for i in range(k)], axis=1) if k else np.zeros((1, 0), np.int64)


def free_module(R: FiniteRing, n: int, cap: int | None = DEFAULT_MODULE_CAP) -> FiniteModule:
    """``R^n`` with tuple ``(c_0, ..., c_{n-1})`` at index ``sum c_i |R|^i``."""
    if n < 0:
        raise SpecError("rank must be nonnegative")
    _check_cap(len(R) ** n, cap)
    coords = _free_coords(len(R), n)
    add, act = _tuple_tables(R, coords)
    gens = [len(R) ** i * R.one for i in range(n)]
    labels = None
    if n <= 4:
        labels = ["(" + ",".join(R.label(int(c)) for c in row) + ")" for row in coords]
    return FiniteModule(R, add, act, gens, {"kind": "free", "rank": n}, labels, check=False)


def direct_sum(*parts: FiniteModule, cap: int | None = DEFAULT_MODULE_CAP) -> FiniteModule:
    if not parts:
        raise SpecError("direct_sum needs at least one summand")
    R = parts[0].ring
    if any(p.ring.canonical_id != R.canonical_id for p in parts):
        raise SpecError("summands live over different rings")
    sizes = [len(p) for p in parts]
    total = math.prod(sizes)
    _check_cap(total, cap)
    idx = np.arange(total, dtype=np.int64)
    weights = np.cumprod([1] + sizes[:-1])
    comps = [(idx // w) % s for w, s in zip(weights, sizes)]
    add = np.zeros((total, total), dtype=np.int64)
    act = np.zeros((total, len(R)), dtype=np.int64)
    gens = []
    for p, c, w in zip(parts, comps, weights):
        add += p.add[c[:, None], c[None, :]].astype(np.int64) * w
        act += p.act[c, :].astype(np.int64) * w
        gens += [int(g) * int(w) for g in p.generators]
    prov = {"kind": "sum", "parts": [p.provenance for p in parts]}
    return FiniteModule(R, add, act, gens, prov, check=False)


def greedy_generators(M: FiniteModule, candidates) -> list[int]:
    """Scan ``candidates`` in order, keeping each element not in the span so far."""
    gens, span = [], 1
    for m in candidates:
        m = int(m)
        if not span >> m & 1:
            gens.append(m)
            span = M.sum_masks(span, M.cyclic_masks[m])
    return gens


@dataclass(frozen=True)
class Submodule:
    parent: FiniteModule
    mask: int

    @property
    def elements(self) -> np.ndarray:
        return bits.to_indices(self.mask)

    @property
    def size(self) -> int:
        return bits.popcount(self.mask)

    def __len__(self):
        return self.size

    def __contains__(self, m) -> bool:
        return bool(self.mask >> int(m) & 1)

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.parent is other.parent and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def is_closed(self) -> bool:
        els = self.elements
        if els.size == 0 or els[0] != 0:
            return False
        flags = np.zeros(len(self.parent), dtype=bool)
        flags[els] = True
        return bool(flags[self.parent.add[np.ix_(els, els)]].all() and flags[self.parent.act[els]].all())

    def as_module(self) -> tuple[FiniteModule, np.ndarray]:
        """The submodule as a module in its own right, plus the inclusion table."""
        els = self.elements
        M = self.parent
        back = np.full(len(M), -1, dtype=np.int64)
        back[els] = np.arange(els.size)
        add = back[M.add[np.ix_(els, els)]]
        act = back[M.act[els]]
        sub = FiniteModule(M.ring, add, act, generators=[0] if els.size == 1 else None,
                           provenance={"kind": "submodule", "size": int(els.size)}, check=False)
        sub.generators = tuple(greedy_generators(sub, range(len(sub))))
        return sub, els


def submodule_generated(M: FiniteModule, S) -> Submodule:
    return Submodule(M, M.span(S))


def quotient_module(M: FiniteModule, K: Submodule) -> tuple[FiniteModule, np.ndarray]:
    """``M/K`` and the projection table ``M -> M/K``."""
    if K.parent is not M:
        raise SpecError("submodule belongs to a different module")
    if not K.is_closed():
        raise SpecError("K is not closed under addition and the action")
    kel = K.elements
    rep = M.add[:, kel].min(axis=1)  # least element of each coset
    reps = np.unique(rep)
    proj = np.searchsorted(reps, rep)
    add = proj[M.add[np.ix_(reps, reps)]]
    act = proj[M.act[reps]]
    Q = FiniteModule(M.ring, add, act, generators=[0], provenance={
        "kind": "quotient", "of": M.provenance, "kernel_size": int(kel.size)}, check=False)
    Q.generators = tuple(greedy_generators(Q, proj[list(M.generators)])) if len(Q) > 1 else ()
    return Q, proj.astype(IDX)


def zero_module(R: FiniteRing) -> FiniteModule:
    return free_module(R, 0)


# -- module axioms ------------------------------------------------------------

def verify_module(M: FiniteModule, limit: int | None = 1000) -> ValidationReport:
    rep = ValidationReport(limit=limit)
    R = M.ring
    n = len(M)
    a, act = M.add.astype(np.int64), M.act.astype(np.int64)
    e = np.arange(n)

    def record(name, mask):
        for inst in np.argwhere(mask):
            rep.add(name, inst)

    record("add_identity", a[0] != e)
    record("add_commutative", a != a.T)
    record("add_inverse", ~(a == 0).any(axis=1)[:, None])
    record("add_associative", a[a[:, :, None], e[None, None, :]] != a[e[:, None, None], a[None, :, :]])
    record("act_unital", (act[:, R.one] != e)[:, None])
    # (m + m')r = mr + m'r
    record("act_additive", act[a] != a[act[:, None, :], act[None, :, :]])
    # m(r + s) = mr + ms
    record("act_ring_additive", act[:, R.add] != a[act[:, :, None], act[:, None, :]])
    # m(rs) = (mr)s
    record("act_associative", act[:, R.mul] != act[act])
    return rep


# -- homomorphisms ------------------------------------------------------------

def coordinates(M: FiniteModule) -> np.ndarray:
    """Row ``m`` holds ring coefficients ``c`` with ``m = sum_i g_i · c_i``."""
    cached = getattr(M, "_coords", None)
    if cached is not None:
        return cached
    R = M.ring
    k = len(M.generators)
    coords = np.full((len(M), k), -1, dtype=np.int64)
    coords[0] = R.zero
    frontier = np.array([0])
    steps = R.additive_generators
    while frontier.size:
        found = []
        for i, g in enumerate(M.generators):
            for r in steps:
                tgt = M.add[frontier, M.act[g, r]]
                new = coords[tgt, 0] < 0
                if not new.any():
                    continue
                src, tgt = frontier[new], tgt[new]
                tgt, first = np.unique(tgt, return_index=True)
                src = src[first]
                c = coords[src].copy()
                c[:, i] = R.add[c[:, i], r]
                coords[tgt] = c
                found.append(tgt)
        frontier = np.unique(np.concatenate(found)) if found else np.zeros(0, np.int64)
    if (coords < 0).any():
        raise SpecError("generators do not generate the module")
    M._coords = coords
    return coords


def _candidates(M: FiniteModule, N: FiniteModule, exact_ann: bool) -> list[np.ndarray]:
    out = []
    annN = N.annihilators
    for g in M.generators:
        ag = M.annihilators[g]
        if exact_ann:
            c = [n for n, an in enumerate(annN) if an == ag]
        else:
            c = [n for n, an in enumerate(annN) if ag & ~an == 0]
        out.append(np.array(c, dtype=np.int64))
    return out


def _iter_hom_chunks(M, N, cands, cap):
    """Yield blocks of valid hom tables (rows) over all generator-image choices."""
    if M.ring.canonical_id != N.ring.canonical_id:
        raise SpecError("modules live over different rings")
    shape = tuple(len(c) for c in cands)
    total = math.prod(shape)
    if cap is not None and total > cap:
        raise CapExceeded(f"hom search needs {total} candidate assignments (cap {cap})")
    if total == 0:
        return
    C = coordinates(M)
    addN, actN = N.add, N.act
    m_add_gens = M.additive_generators
    r_add_gens = M.ring.additive_generators
    chunk = max(1, _CHUNK_CELLS // max(1, len(M)))
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk))
        choice = np.unravel_index(flat, shape) if shape else ()
        T = np.zeros((flat.size, len(M)), dtype=IDX)
        for i, c in enumerate(choice):
            img = cands[i][c]
            T = addN[T, actN[img[:, None], C[:, i][None, :]]]
        ok = np.ones(flat.size, dtype=bool)
        for s in m_add_gens:
            ok &= (T[:, M.add[:, s]] == addN[T, T[:, [s]]]).all(axis=1)
        for r in r_add_gens:
            ok &= (T[:, M.act[:, r]] == actN[T, r]).all(axis=1)
        if ok.any():
            yield T[ok]


def hom_tables(M: FiniteModule, N: FiniteModule, cap: int | None = DEFAULT_SEARCH_CAP) -> np.ndarray:
    """All R-linear maps ``M -> N`` as rows of an element table."""
    blocks = list(_iter_hom_chunks(M, N, _candidates(M, N, False), cap))
    if not blocks:
        return np.zeros((0, len(M)), dtype=IDX)
    return np.concatenate(blocks)


def hom_set(M: FiniteModule, N: FiniteModule, cap: int | None = DEFAULT_SEARCH_CAP) -> list[np.ndarray]:
    return list(hom_tables(M, N, cap))


def image_sizes(tables: np.ndarray) -> np.ndarray:
    if tables.size == 0:
        return np.ones(tables.shape[0], dtype=np.int64)
    s = np.sort(tables, axis=1)
    return 1 + (np.diff(s, axis=1) != 0).sum(axis=1)


def surjection_count_bruteforce(M: FiniteModule, N: FiniteModule,
                                cap: int | None = DEFAULT_SEARCH_CAP) -> int:
    """Number of maps in ``hom_set(M, N)`` whose image has |N| elements."""
    return int((image_sizes(hom_tables(M, N, cap)) == len(N)).sum())


def _injective_rows(T: np.ndarray) -> np.ndarray:
    # a module map is injective iff only 0 maps to 0
    return (T[:, 1:] != 0).all(axis=1)


def iso_test(M: FiniteModule, N: FiniteModule, cap: int | None = DEFAULT_SEARCH_CAP):
    """An isomorphism ``M -> N`` as an element table, or None if none exists."""
    if M.ring.canonical_id != N.ring.canonical_id:
        raise SpecError("modules live over different rings")
    if M._cheap_invariants != N._cheap_invariants:
        return None
    for T in _iter_hom_chunks(M, N, _candidates(M, N, True), cap):
        inj = _injective_rows(T)
        if inj.any():
            return T[np.argmax(inj)].copy()
    return None


def automorphisms(M: FiniteModule, cap: int | None = DEFAULT_SEARCH_CAP) -> np.ndarray:
    """Every automorphism of M as a permutation of element indices (rows)."""
    cached = getattr(M, "_autos", None)
    if cached is not None:
        return cached
    blocks = [T[_injective_rows(T)] for T in _iter_hom_chunks(M, M, _candidates(M, M, True), cap)]
    A = np.concatenate(blocks) if blocks else np.zeros((0, len(M)), dtype=IDX)
    A = A[np.lexsort(A.T[::-1])]
    M._autos = A
    return A


def aut_group(M: FiniteModule, cap: int | None = DEFAULT_SEARCH_CAP):
    """Aut(M) as a :class:`~genrep.groups.PermGroup` on the elements of M."""
    cached = getattr(M, "_aut_group", None)
    if cached is None:
        from .groups import PermGroup
        cached = PermGroup.from_elements(automorphisms(M, cap))
        M._aut_group = cached
    return cached


# -- duality ------------------------------------------------------------------

def underlying_group(M: FiniteModule) -> FiniteModule:
    """M as a module over ``Z/exp(M)``."""
    e = M.exponent
    Z = zn(e)
    act = np.zeros((len(M), e), dtype=np.int64)
    x = np.zeros(len(M), dtype=np.int64)
    for k in range(1, e):
        x = M.add[x, np.arange(len(M))]
        act[:, k] = x
    return FiniteModule(Z, M.add, act, M.additive_generators, {"kind": "abelian", "of": M.provenance},
                        check=False)


def dual_module(M: FiniteModule) -> FiniteModule:
    """``Hom_Z(M, Q/Z)`` realized as maps into ``Z/exp(M)``, a right R^op-module."""
    G = underlying_group(M)
    target = free_module(G.ring, 1)
    chars = hom_tables(G, target, cap=None).astype(np.int64)
    chars = chars[np.lexsort(chars.T[::-1])]
    if chars.shape[0] != len(M):
        raise AssertionError("character group has the wrong size")
    e = M.exponent
    index = {row.tobytes(): i for i, row in enumerate(chars)}

    def lookup(rows):
        return np.array([index[r.tobytes()] for r in rows], dtype=np.int64)

    n = len(M)
    add = np.stack([lookup((chars[i][None, :] + chars) % e) for i in range(n)])
    act = np.stack([lookup(chars[:, M.act[:, r]]) for r in range(len(M.ring))], axis=1)
    D = FiniteModule(M.ring.opposite(), add, act, generators=[0] if n == 1 else None,
                     provenance={"kind": "dual", "of": M.provenance}, check=False)
    if n == 1:
        D.generators = ()
    D.characters = chars
    return D


def module_length(M: FiniteModule) -> int:
    return M.length


def radical(M: FiniteModule) -> Submodule:
    return Submodule(M, M.lattice.nodes[M.lattice.radical])


def socle(M: FiniteModule) -> Submodule:
    return Submodule(M, M.lattice.nodes[M.lattice.socle])


def submodule_lattice(M: FiniteModule):
    return M.lattice
