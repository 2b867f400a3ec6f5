"""Submodule lattices, Möbius values, chain sets and their orbits.

Everything here works on node indices.  Nodes are the submodules of a module
sorted by ``(size, bitmask)``, so node 0 is the zero submodule and the last
node is the whole module.  The module itself is only used through its tables
(``add``, ``act``, ``cyclic_masks``, ``sum_masks``), so this file does not
import :mod:`genrep.modules`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import bits
from .errors import CapExceeded, InvariantViolation

DEFAULT_LATTICE_CAP = 50_000

STRICT = "strict-increasing-proper"
DECREASING = "decreasing-nonzero"


class SubmoduleLattice:
    def __init__(self, module, cap: int | None = DEFAULT_LATTICE_CAP):
        self.module = module
        cyclics = sorted(set(module.cyclic_masks), key=lambda m: (bits.popcount(m), m))
        seen = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for node in frontier:
                for c in cyclics:
                    if bits.subset(c, node):
                        continue
                    s = module.sum_masks(node, c)
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
                        if cap is not None and len(seen) > cap:
                            raise CapExceeded(f"lattice has more than {cap} nodes "
                                              f"(stopped at {len(seen)})")
            frontier = nxt
        self.nodes: list[int] = sorted(seen, key=lambda m: (bits.popcount(m), m))
        self.index = {m: i for i, m in enumerate(self.nodes)}
        self.sizes = np.array([bits.popcount(m) for m in self.nodes], dtype=np.int64)
        self._moebius: dict[int, np.ndarray] = {}
        self._node_actions: dict[int, np.ndarray] = {}

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"SubmoduleLattice({len(self)} nodes, length {self.length})"

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.nodes) - 1

    def elements(self, i: int) -> np.ndarray:
        return bits.to_indices(self.nodes[i])

    def node_of(self, mask: int) -> int:
        return self.index[mask]

    @cached_property
    def indicator(self) -> np.ndarray:
        """Boolean matrix, row i flags the elements of node i."""
        out = np.zeros((len(self), len(self.module)), dtype=bool)
        for i, m in enumerate(self.nodes):
            out[i, bits.to_indices(m)] = True
        return out

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[i, j]`` iff node i is contained in node j."""
        ind = self.indicator.astype(np.float32)
        inter = ind @ ind.T
        return inter == self.sizes[:, None]

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        s = strict.astype(np.float32)
        between = (s @ s) > 0
        cov = strict & ~between
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]

    @cached_property
    def _heights(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.zeros(len(self), dtype=np.int64)
        hi = np.zeros(len(self), dtype=np.int64)
        below: list[list[int]] = [[] for _ in self.nodes]
        for i, j in self.covers:
            below[j].append(i)
        for j in range(1, len(self)):
            lo[j] = min(lo[i] for i in below[j]) + 1
            hi[j] = max(hi[i] for i in below[j]) + 1
        return lo, hi

    @property
    def height(self) -> np.ndarray:
        """Length of each node as a module."""
        return self._heights[1]

    @cached_property
    def length(self) -> int:
        lo, hi = self._heights
        if not np.array_equal(lo, hi):
            bad = int(np.nonzero(lo != hi)[0][0])
            raise InvariantViolation("maximal chains of different lengths",
                                     {"node": bad, "min": int(lo[bad]), "max": int(hi[bad])})
        return int(hi[self.top])

    def jordan_holder_ok(self) -> bool:
        lo, hi = self._heights
        return bool(np.array_equal(lo, hi))

    @cached_property
    def coatoms(self) -> list[int]:
        return [i for i, j in self.covers if j == self.top]

    @cached_property
    def atoms(self) -> list[int]:
        return [j for i, j in self.covers if i == self.bottom]

    def meet(self, i: int, j: int) -> int:
        return self.index[self.nodes[i] & self.nodes[j]]

    def join(self, i: int, j: int) -> int:
        return self.index[self.module.sum_masks(self.nodes[i], self.nodes[j])]

    @cached_property
    def radical(self) -> int:
        mask = self.nodes[self.top]
        for c in self.coatoms:
            mask &= self.nodes[c]
        return self.index[mask]

    @cached_property
    def socle(self) -> int:
        mask = 1
        for a in self.atoms:
            mask = self.module.sum_masks(mask, self.nodes[a])
        return self.index[mask]

    @cached_property
    def cyclic_node(self) -> np.ndarray:
        """Node index of ``mR`` for every element ``m``."""
        return np.array([self.index[c] for c in self.module.cyclic_masks], dtype=np.int64)

    def below(self, a: int) -> np.ndarray:
        return np.nonzero(self.leq[:, a])[0]

    # -- Möbius -------------------------------------------------------------
    def moebius_column(self, a: int) -> np.ndarray:
        """``mu(b, a)`` for every node b (zero when b is not below a)."""
        col = self._moebius.get(a)
        if col is None:
            col = np.zeros(len(self), dtype=np.int64)
            down = self.leq[:, a]
            col[a] = 1
            for b in sorted(np.nonzero(down)[0], reverse=True):
                if b == a:
                    continue
                above = self.leq[b] & down
                above[b] = False
                col[b] = -col[above].sum()
            self._moebius[a] = col
        return col

    def moebius(self, b: int, a: int) -> int:
        if not self.leq[b, a]:
            raise ValueError(f"node {b} is not below node {a}")
        return int(self.moebius_column(a)[b])

    # -- chains -------------------------------------------------------------
    def chains(self, flavor: str, d: int, top: int | None = None) -> "ChainSet":
        """Chains inside the interval [0, top] (default: the whole lattice).

        strict: ``T_0 < ... < T_d < top``; decreasing: ``top >= N_0 > ... > N_d > 0``.
        """
        if d < 0:
            raise ValueError("chain degree must be nonnegative")
        top = self.top if top is None else top
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        inside = self.leq[:, top]
        if flavor == STRICT:
            pool = inside.copy()
            pool[top] = False
            succ = [np.nonzero(strict[i] & pool)[0] for i in range(len(self))]
        elif flavor == DECREASING:
            pool = inside.copy()
            pool[self.bottom] = False
            succ = [np.nonzero(strict[:, i] & pool)[0] for i in range(len(self))]
        else:
            raise ValueError(f"unknown chain flavor {flavor!r}")
        out: list[tuple[int, ...]] = []

        def extend(chain):
            if len(chain) == d + 1:
                out.append(tuple(chain))
                return
            for nxt in succ[chain[-1]]:
                chain.append(int(nxt))
                extend(chain)
                chain.pop()

        for start in np.nonzero(pool)[0]:
            extend([int(start)])
        out.sort()
        return ChainSet(self, flavor, d, out, top)

    def all_chains(self, flavor: str, top: int | None = None) -> list["ChainSet"]:
        """Chain sets for d = 0, 1, ... up to the last nonempty one."""
        out = []
        d = 0
        while True:
            c = self.chains(flavor, d, top)
            if not c.chains:
                return out
            out.append(c)
            d += 1

    # -- group actions ------------------------------------------------------
    def node_permutation(self, perm) -> np.ndarray:
        """Induced permutation of nodes for a permutation of module elements."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        img = self.indicator[:, inv]
        packed = np.packbits(img, axis=1, bitorder="little")
        out = np.empty(len(self), dtype=np.int64)
        for i, row in enumerate(packed):
            key = int.from_bytes(row.tobytes(), "little")
            j = self.index.get(key)
            if j is None:
                raise ValueError("permutation does not map submodules to submodules")
            out[i] = j
        return out

    def node_actions(self, group) -> np.ndarray:
        """Row g: node permutation induced by element g of ``group``."""
        key = id(group)
        acts = self._node_actions.get(key)
        if acts is None:
            gens = [self.node_permutation(s) for s in group.generators]
            acts = group.induced_action(gens, len(self))
            self._node_actions[key] = acts
        return acts


@dataclass
class ChainSet:
    lattice: SubmoduleLattice
    flavor: str
    d: int
    chains: list[tuple[int, ...]]
    top: int = field(default=-1)

    def __len__(self):
        return len(self.chains)

    def __iter__(self):
        return iter(self.chains)


@dataclass
class ChainOrbit:
    representative: tuple[int, ...]
    size: int
    stabilizer: np.ndarray  # element indices of the acting group
    stabilizer_generators: list[np.ndarray]


def chain_orbits(C: ChainSet, group) -> list[ChainOrbit]:
    """Split a chain set into orbits under a permutation group on module elements."""
    L = C.lattice
    acts = L.node_actions(group)
    gens_idx = group.generator_indices
    pos = {c: i for i, c in enumerate(C.chains)}
    arr = np.array(C.chains, dtype=np.int64).reshape(len(C.chains), C.d + 1)
    orbit_of = np.full(len(C.chains), -1, dtype=np.int64)
    out = []
    for start in range(len(C.chains)):
        if orbit_of[start] >= 0:
            continue
        orbit_of[start] = start
        stack, members = [start], [start]
        while stack:
            c = stack.pop()
            for g in gens_idx:
                img = pos.get(tuple(int(x) for x in acts[g][arr[c]]))
                if img is None:
                    raise ValueError("group does not preserve the chain set")
                if orbit_of[img] < 0:
                    orbit_of[img] = start
                    stack.append(img)
                    members.append(img)
        rep = C.chains[start]  # chains are sorted, so the first met is minimal
        fixes = (acts[:, list(rep)] == np.array(rep)[None, :]).all(axis=1)
        stab = np.nonzero(fixes)[0]
        if len(members) * stab.size != group.order:
            raise InvariantViolation("orbit-stabilizer failed", {"chain": rep})
        out.append(ChainOrbit(rep, len(members), stab, group.subgroup_generators(stab)))
    return out


def moebius(L: SubmoduleLattice, b: int, a: int) -> int:
    return L.moebius(b, a)


def chains(L: SubmoduleLattice, flavor: str, d: int, top: int | None = None) -> ChainSet:
    return L.chains(flavor, d, top)
