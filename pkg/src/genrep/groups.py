"""Permutation groups and their complex character tables, computed mod a prime.

Permutations are integer arrays ``p`` with ``p[i]`` the image of ``i``; the
product ``g*h`` is "apply h, then g", i.e. ``(g*h)[i] = g[h[i]]``.

Character values are kept modulo a prime ``q`` with ``q ≡ 1 (mod exp G)``
(Dixon's method).  Everything a caller needs as an exact integer (degrees,
multiplicities, inner products) is small compared to ``q`` and lifted back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .errors import CapExceeded, InvariantViolation

DEFAULT_GROUP_CAP = 100_000
DEFAULT_BOUND = 2 ** 31
MODULUS_LIMIT = 2 ** 61


class PermGroup:
    """A permutation group with every element enumerated.

    Element 0 is the identity.  Elements are stored in breadth-first order from
    the generators; ``_tree[x] = (parent, generator)`` with
    ``elements[x] = elements[parent] * generators[generator]``.
    """

    def __init__(self, degree: int, generators, cap: int | None = DEFAULT_GROUP_CAP):
        self.degree = int(degree)
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        ident = np.arange(self.degree, dtype=np.int64)
        gens = [g for g in gens if not np.array_equal(g, ident)]
        for g in gens:
            if g.shape != (self.degree,) or not np.array_equal(np.sort(g), ident):
                raise ValueError("generator is not a permutation of the right degree")
        self.generators = gens
        elements = [ident]
        self._index = {ident.tobytes(): 0}
        tree = [(-1, -1)]
        head = 0
        while head < len(elements):
            e = elements[head]
            for s_i, s in enumerate(gens):
                x = e[s]
                key = x.tobytes()
                if key not in self._index:
                    self._index[key] = len(elements)
                    elements.append(x)
                    tree.append((head, s_i))
                    if cap is not None and len(elements) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
            head += 1
        self.elements = np.array(elements, dtype=np.int64).reshape(len(elements), self.degree)
        self._tree = tree
        self._tables: dict[int, CharacterTable] = {}

    @classmethod
    def from_elements(cls, elements, degree: int | None = None) -> "PermGroup":
        """Group from a complete element list; generators are picked greedily."""
        elements = np.asarray(elements, dtype=np.int64)
        if degree is None:
            degree = elements.shape[1]
        gens: list[np.ndarray] = []
        seen = {np.arange(degree, dtype=np.int64).tobytes()}
        for e in elements:
            if e.tobytes() in seen:
                continue
            gens.append(e)
            seen = {x.tobytes() for x in cls(degree, gens).elements}
        G = cls(degree, gens)
        if G.order != len(elements):
            raise InvariantViolation("element list is not closed under composition",
                                     {"given": len(elements), "closure": G.order})
        return G

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.order

    def index(self, perm) -> int:
        return self._index[np.asarray(perm, dtype=np.int64).tobytes()]

    def lookup(self, perms: np.ndarray) -> np.ndarray:
        return np.array([self._index[p.tobytes()] for p in np.asarray(perms, dtype=np.int64)],
                        dtype=np.int64)

    def mul(self, i: int, j: int) -> int:
        return self._index[self.elements[i][self.elements[j]].tobytes()]

    @cached_property
    def inverse_elements(self) -> np.ndarray:
        inv = np.empty_like(self.elements)
        rows = np.arange(self.order)[:, None]
        inv[rows, self.elements] = np.arange(self.degree)[None, :]
        return inv

    @cached_property
    def inverse(self) -> np.ndarray:
        return self.lookup(self.inverse_elements)

    @cached_property
    def generator_indices(self) -> list[int]:
        return [self.index(g) for g in self.generators]

    def induced_action(self, gen_images, size: int, check: bool = True) -> np.ndarray:
        """Extend images of the generators (permutations of ``size`` points) to all elements."""
        gen_images = [np.asarray(g, dtype=np.int64) for g in gen_images]
        out = np.empty((self.order, size), dtype=np.int64)
        out[0] = np.arange(size)
        for x in range(1, self.order):
            p, s = self._tree[x]
            out[x] = out[p][gen_images[s]]
        if check:
            for s_i, s in enumerate(self.generators):
                prod = self.lookup(self.elements[:, s])
                if not np.array_equal(out[prod], np.take_along_axis(
                        out, np.broadcast_to(gen_images[s_i], out.shape), axis=1)):
                    raise ValueError("action is not compatible with the group law")
        return out

    # -- subgroups ------------------------------------------------------------
    def closure_indices(self, gen_idx) -> np.ndarray:
        gen_idx = [int(g) for g in gen_idx]
        members = {0}
        queue = [0]
        while queue:
            x = queue.pop()
            for s in gen_idx:
                y = self.mul(x, s)
                if y not in members:
                    members.add(y)
                    queue.append(y)
        return np.array(sorted(members), dtype=np.int64)

    def subgroup_generators(self, members) -> list[np.ndarray]:
        """Greedy generating set (as permutations) for a subgroup given by element indices."""
        members = [int(m) for m in members]
        chosen: list[int] = []
        span = {0}
        for m in members:
            if m in span:
                continue
            chosen.append(m)
            span = set(self.closure_indices(chosen).tolist())
        if len(span) != len(members):
            raise InvariantViolation("subset is not a subgroup", {"size": len(members)})
        return [self.elements[c].copy() for c in chosen]

    # -- classes --------------------------------------------------------------
    @cached_property
    def _classes(self):
        class_of = np.full(self.order, -1, dtype=np.int64)
        raw = []
        gens = self.generators
        gen_inv = [np.argsort(s) for s in gens]
        for x in range(self.order):
            if class_of[x] >= 0:
                continue
            members = [x]
            class_of[x] = len(raw)
            stack = [x]
            while stack:
                y = stack.pop()
                e = self.elements[y]
                for s, si in zip(gens, gen_inv):
                    z = self._index[s[e[si]].tobytes()]
                    if class_of[z] < 0:
                        class_of[z] = len(raw)
                        members.append(z)
                        stack.append(z)
            raw.append(sorted(members))
        order = sorted(range(len(raw)), key=lambda c: (len(raw[c]), raw[c][0]))
        relabel = np.empty(len(raw), dtype=np.int64)
        relabel[order] = np.arange(len(raw))
        return [raw[c] for c in order], relabel[class_of]

    @property
    def classes(self) -> list[list[int]]:
        return self._classes[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._classes[1]

    @cached_property
    def class_reps(self) -> list[int]:
        return [c[0] for c in self.classes]

    @cached_property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @cached_property
    def inverse_class(self) -> list[int]:
        return [int(self.class_of[self.inverse[r]]) for r in self.class_reps]

    def element_order(self, x: int) -> int:
        e = self.elements[x]
        y, k = e, 1
        ident = np.arange(self.degree)
        while not np.array_equal(y, ident):
            y = e[y]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*[self.element_order(r) for r in self.class_reps])

    def character_table(self, q: int | None = None, bound: int = DEFAULT_BOUND) -> "CharacterTable":
        if q is None:
            q = admissible_modulus(self, bound)
        t = self._tables.get(q)
        if t is None:
            t = dixon_table(self, q)
            self._tables[q] = t
        return t


def closure(gens, degree: int | None = None, cap: int | None = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = [np.asarray(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree is required for an empty generator list")
        degree = gens[0].size
    return PermGroup(degree, gens, cap)


def conjugacy_classes(G: PermGroup) -> list[list[int]]:
    return G.classes


# -- modular linear algebra -----------------------------------------------------

def admissible_modulus(G: PermGroup, bound: int = DEFAULT_BOUND) -> int:
    e = G.exponent
    floor = max(2 * math.isqrt(G.order - 1) + 2 if G.order > 1 else 2, bound)
    q = (floor // e + 1) * e + 1
    while not isprime(q):
        q += e
        if q >= MODULUS_LIMIT:
            raise CapExceeded("no admissible prime below the modulus limit")
    return q


def _charpoly(A: list[list[int]], q: int) -> list[int]:
    """Characteristic polynomial mod q (low-to-high) via Hessenberg reduction."""
    n = len(A)
    H = [row[:] for row in A]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if H[i][j] % q), None)
        if piv is None:
            continue
        if piv != j + 1:
            H[piv], H[j + 1] = H[j + 1], H[piv]
            for row in H:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = pow(H[j + 1][j], -1, q)
        for k in range(j + 2, n):
            u = H[k][j] * inv % q
            if u:
                H[k] = [(a - u * b) % q for a, b in zip(H[k], H[j + 1])]
                for row in H:
                    row[j + 1] = (row[j + 1] + u * row[k]) % q
    polys = [[1]]
    for m in range(n):
        # p_{m+1} = (x - h_mm) p_m - sum_i h_im * prod_{k=i+1..m} h_{k,k-1} p_i
        p = [0] + polys[m]
        for t, c in enumerate(polys[m]):
            p[t] = (p[t] - H[m][m] * c) % q
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = prod * H[i + 1][i] % q
            coef = H[i][m] * prod % q
            if coef:
                for t, c in enumerate(polys[i]):
                    p[t] = (p[t] - coef * c) % q
        polys.append(p)
    return polys[n]


def _roots(poly_low: list[int], q: int) -> list[int]:
    f = [c % q for c in reversed(poly_low)]
    _, factors = gf_factor(f, q, ZZ)
    roots = []
    for g, _mult in factors:
        if len(g) != 2:
            raise InvariantViolation("characteristic polynomial does not split mod q", {"q": q})
        roots.append((-int(g[1]) * pow(int(g[0]), -1, q)) % q)
    return sorted(set(roots))


def _rref(rows: list[list[int]], q: int) -> tuple[list[list[int]], list[int]]:
    rows = [[x % q for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, q)
        rows[r] = [x * inv % q for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % q for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(A: list[list[int]], q: int) -> list[list[int]]:
    n = len(A[0])
    R, piv = _rref(A, q)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, p in zip(R, piv):
            v[p] = (-row[f]) % q
        basis.append(v)
    return basis


# -- Dixon ---------------------------------------------------------------------

def class_coefficients(G: PermGroup) -> np.ndarray:
    """``c[i, j, k] = #{x in C_i : x^-1 z_k in C_j}`` with ``z_k`` the class representatives."""
    r = len(G.classes)
    c = np.zeros((r, r, r), dtype=np.int64)
    cls = G.class_of
    inv = G.inverse_elements
    for k, z in enumerate(G.class_reps):
        prods = G.lookup(inv[:, G.elements[z]])
        np.add.at(c, (cls, cls[prods], k), 1)
    return c


def dixon_table(G: PermGroup, q: int) -> "CharacterTable":
    if (q - 1) % G.exponent or not isprime(q):
        raise ValueError(f"{q} is not a prime congruent to 1 mod the exponent")
    r = len(G.classes)
    coeff = class_coefficients(G)
    spaces = [[[int(i == j) for j in range(r)] for i in range(r)]]
    for i in range(1, r):
        if all(len(S) == 1 for S in spaces):
            break
        Mi = coeff[i].tolist()
        nxt = []
        for S in spaces:
            if len(S) == 1:
                nxt.append(S)
                continue
            S, piv = _rref(S, q)
            images = [[sum(Mi[j][k] * s[k] for k in range(r)) % q for j in range(r)] for s in S]
            B = [[images[b][piv[a]] for b in range(len(S))] for a in range(len(S))]
            for lam in _roots(_charpoly(B, q), q):
                shifted = [[(B[a][b] - (lam if a == b else 0)) % q for b in range(len(S))]
                           for a in range(len(S))]
                vecs = _nullspace(shifted, q)
                new = [[sum(v[b] * S[b][k] for b in range(len(S))) % q for k in range(r)]
                       for v in vecs]
                nxt.append(_rref(new, q)[0])
        spaces = nxt
    if len(spaces) != r or any(len(S) != 1 for S in spaces):
        raise InvariantViolation("class matrices did not separate the characters", {"q": q})
    sizes = G.class_sizes
    inv_class = G.inverse_class
    rows, degrees = [], []
    isq = math.isqrt(G.order)
    for (w,) in spaces:
        w0inv = pow(w[0], -1, q)
        w = [x * w0inv % q for x in w]
        s = sum(w[k] * w[inv_class[k]] * pow(sizes[k], -1, q) for k in range(r)) % q
        d2 = G.order * pow(s, -1, q) % q
        d = next((t for t in range(1, isq + 1) if t * t % q == d2), None)
        if d is None:
            raise InvariantViolation("no integer degree fits", {"q": q})
        rows.append([d * w[k] * pow(sizes[k], -1, q) % q for k in range(r)])
        degrees.append(d)
    order = sorted(range(r), key=lambda i: (degrees[i], rows[i]))
    T = CharacterTable(G, q, [rows[i] for i in order], [degrees[i] for i in order])
    T.check()
    return T


def character_table(G: PermGroup, q: int | None = None, bound: int = DEFAULT_BOUND) -> "CharacterTable":
    return G.character_table(q, bound)


@dataclass
class CharacterTable:
    group: PermGroup
    q: int
    rows: list[list[int]]
    degrees: list[int]

    def __len__(self):
        return len(self.rows)

    @property
    def class_sizes(self):
        return self.group.class_sizes

    def irreducible(self, i: int) -> "ClassFunction":
        return ClassFunction(self, list(self.rows[i]))

    def trivial(self) -> "ClassFunction":
        return ClassFunction(self, [1] * len(self.rows))

    def regular(self) -> "ClassFunction":
        return ClassFunction(self, [self.group.order % self.q] + [0] * (len(self.rows) - 1))

    def lift(self, x: int, signed: bool = False) -> int:
        x %= self.q
        if signed and x > self.q // 2:
            return x - self.q
        return x

    def check(self) -> None:
        G, q = self.group, self.q
        r = len(self.rows)
        if sum(d * d for d in self.degrees) != G.order:
            raise InvariantViolation("sum of squared degrees differs from |G|",
                                     {"degrees": self.degrees, "order": G.order})
        if any(G.order % d for d in self.degrees):
            raise InvariantViolation("a degree does not divide |G|", {"degrees": self.degrees})
        inv_class = G.inverse_class
        sizes = G.class_sizes
        ginv = pow(G.order, -1, q)
        for i in range(r):
            for j in range(r):
                v = sum(sizes[k] * self.rows[i][k] * self.rows[j][inv_class[k]] for k in range(r))
                if v * ginv % q != (i == j):
                    raise InvariantViolation("row orthogonality fails", {"rows": (i, j), "q": q})
        for a in range(r):
            for b in range(r):
                v = sum(self.rows[i][a] * self.rows[i][inv_class[b]] for i in range(r)) % q
                want = (G.order // sizes[a]) % q if a == b else 0
                if v != want:
                    raise InvariantViolation("column orthogonality fails", {"classes": (a, b), "q": q})

    def to_json(self) -> dict:
        return {"q": self.q, "class_sizes": list(self.class_sizes),
                "class_reps": [int(x) for x in self.group.class_reps],
                "degrees": list(self.degrees), "rows": self.rows}


class ClassFunction:
    """Values mod ``table.q``, one per conjugacy class of ``table.group``."""

    def __init__(self, table: CharacterTable, values, virtual: bool = False):
        self.table = table
        self.values = [int(v) % table.q for v in values]
        self.virtual = virtual

    def __repr__(self):
        return f"ClassFunction({self.values}, q={self.table.q})"

    def _same(self, other):
        if other.table is not self.table:
            raise ValueError("class functions live on different tables")

    def __add__(self, other):
        self._same(other)
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)],
                             self.virtual or other.virtual)

    def __sub__(self, other):
        self._same(other)
        return ClassFunction(self.table, [a - b for a, b in zip(self.values, other.values)], True)

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._same(other)
            return ClassFunction(self.table, [a * b for a, b in zip(self.values, other.values)],
                                 self.virtual or other.virtual)
        return ClassFunction(self.table, [a * int(other) for a in self.values],
                             self.virtual or int(other) < 0)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and other.table is self.table and other.values == self.values

    def degree(self, signed: bool = True) -> int:
        return self.table.lift(self.values[0], signed)

    def decompose(self) -> list[int]:
        """Multiplicity of every irreducible (signed lift for virtual functions)."""
        return [inner_product(self, self.table.irreducible(i)) for i in range(len(self.table))]


def inner_product(a: ClassFunction, b: ClassFunction, signed: bool | None = None) -> int:
    """``(1/|G|) sum_g a(g) b(g^-1)``, lifted to [0, q) or to the symmetric range."""
    a._same(b)
    T = a.table
    G = T.group
    inv_class = G.inverse_class
    s = sum(size * a.values[k] * b.values[inv_class[k]] for k, size in enumerate(G.class_sizes))
    val = s * pow(G.order, -1, T.q) % T.q
    if signed is None:
        signed = a.virtual or b.virtual
    return T.lift(val, signed)


def perm_character(table: CharacterTable, action) -> ClassFunction:
    """Fixed-point character of an action given by generator images or a callable.

    ``action`` is either a list of permutations (one per generator of the
    group, in order) or a function taking an element permutation and
    returning the permutation it induces.
    """
    G = table.group
    if callable(action):
        gen_images = [np.asarray(action(s)) for s in G.generators]
        size = gen_images[0].size if gen_images else np.asarray(action(G.elements[0])).size
    else:
        gen_images = [np.asarray(a) for a in action]
        if len(gen_images) != len(G.generators):
            raise ValueError("need one image per generator")
        size = gen_images[0].size if gen_images else 0
    acts = G.induced_action(gen_images, size)
    values = [int((acts[r] == np.arange(size)).sum()) for r in G.class_reps]
    return ClassFunction(table, values)


def parabolic_transport(chi: ClassFunction, H_table: CharacterTable, Pi, phi, K) -> ClassFunction:
    """Restrict to Pi, average over K, push along phi, induce to H.

    ``Pi`` and ``K`` are generator lists given as element indices of chi's
    group; ``phi`` maps an element index of G (inside Pi) to an element
    index of H (a callable or an indexable).
    """
    T = chi.table
    G = T.group
    H = H_table.group
    q = T.q
    if H_table.q != q:
        raise ValueError("source and target tables use different moduli")
    f = phi if callable(phi) else (lambda g: int(phi[g]))
    Pi = [int(x) for x in Pi]
    K = [int(x) for x in K]
    pi_el = G.closure_indices(Pi)
    k_el = G.closure_indices(K)
    pi_set, k_set = set(pi_el.tolist()), set(k_el.tolist())
    if not k_set <= pi_set:
        raise ValueError("kernel is not inside the parabolic subgroup")
    inv = G.inverse
    for s in Pi:
        for k in K:
            if G.mul(G.mul(s, k), int(inv[s])) not in k_set:
                raise ValueError("kernel is not normal in the parabolic subgroup")
    img = {x: f(x) for x in pi_el.tolist()}
    for x in pi_el.tolist():
        for s in Pi:
            if img[G.mul(x, s)] != H.mul(img[x], img[s]):
                raise ValueError("phi is not a homomorphism on the parabolic subgroup")
    if {x for x in pi_el.tolist() if img[x] == 0} != k_set:
        raise ValueError("K is not the kernel of phi")
    kinv = pow(len(k_el), -1, q)
    cls = G.class_of
    psi: dict[int, int] = {}
    for x in pi_el.tolist():
        h = img[x]
        if h in psi:
            continue
        tot = sum(chi.values[cls[G.mul(x, k)]] for k in k_el.tolist())
        psi[h] = tot * kinv % q
    iinv = pow(len(psi), -1, q)
    Hel, Hinv = H.elements, H.inverse_elements
    values = []
    for rep in H.class_reps:
        conj = np.take_along_axis(Hel, Hel[rep][Hinv], axis=1)  # y * rep * y^-1
        tot = sum(psi.get(int(c), 0) for c in H.lookup(conj))
        values.append(tot * iinv % q)
    return ClassFunction(H_table, values, chi.virtual)
