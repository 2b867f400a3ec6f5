"""Dimension functions of the Q-functors, simple census, G0 decompositions,
parabolic shifts and F_d membership.

Dimensions are always evaluated at free points Rⁿ; a module A contributes
A(Rⁿ) = Aⁿ.  Group data lives on catalog representatives: any module is first
matched to its class and all equivariant work happens on the representative.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .catalog import Catalog, ModuleIsoClass, get_catalog
from .dimension import DimensionFunction, chi_polynomial, ring_prime
from .errors import InvariantViolation
from .groups import DEFAULT_BOUND, ClassFunction, CharacterTable, inner_product, parabolic_transport
from .modules import FiniteModule, Submodule, free_module, hom_tables, quotient_module
from .posets import DECREASING, STRICT, chain_orbits
from .rings import FiniteRing

CHECK_POINTS = range(5)


# -- context: catalog depth plus one character-table modulus ------------------

class Context:
    """Catalog to a fixed depth and a prime ``q`` that serves every Aut group in it.

    Transports between groups mix character values, so all tables of one
    context share the same modulus.
    """

    def __init__(self, ring: FiniteRing, depth: int, bound: int = DEFAULT_BOUND):
        from sympy import isprime
        self.ring = ring
        self.depth = depth
        self.bound = bound
        self.catalog: Catalog = get_catalog(ring, depth)
        groups = [c.aut_group for c in self.catalog.upto(depth)]
        e = math.lcm(*[G.exponent for G in groups])
        floor = max([bound] + [2 * (math.isqrt(G.order - 1) + 1) for G in groups if G.order > 1])
        q = (floor // e + 1) * e + 1
        while not isprime(q):
            q += e
        self.q = q
        self._expansions: dict = {}
        self._vchars: dict = {}

    def classes(self) -> list[ModuleIsoClass]:
        return self.catalog.upto(self.depth)

    def table(self, cls: ModuleIsoClass) -> CharacterTable:
        if cls.length > self.depth:
            raise ValueError(f"class {cls.class_id} lies beyond the context depth {self.depth}")
        return cls.aut_group.character_table(q=self.q)

    def match(self, M: FiniteModule) -> tuple[ModuleIsoClass, np.ndarray]:
        return self.catalog.match(M)


_CONTEXTS: dict = {}


def context(ring: FiniteRing, depth: int, bound: int = DEFAULT_BOUND) -> Context:
    key = (ring.canonical_id, depth, bound)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = Context(ring, depth, bound)
    return ctx


def _ctx_for(ring, length, ctx):
    if ctx is not None and ctx.depth >= length:
        return ctx
    return context(ring, max(length, ctx.depth if ctx else 0))


# -- quotients inside a lattice -----------------------------------------------

def _projection(A: FiniteModule, node: int) -> np.ndarray:
    L = A.lattice
    cache = L.__dict__.setdefault("_projections", {})
    proj = cache.get(node)
    if proj is None:
        _, proj = quotient_module(A, Submodule(A, L.nodes[node]))
        cache[node] = proj
    return proj


def quotient_class(A: FiniteModule, node: int) -> tuple[ModuleIsoClass, np.ndarray]:
    """Class of A/N and the composite map A -> A/N -> representative."""
    L = A.lattice
    cache = L.__dict__.setdefault("_quotient_classes", {})
    hit = cache.get(node)
    if hit is None:
        Q, proj = quotient_module(A, Submodule(A, L.nodes[node]))
        cls, iso = get_catalog(A.ring).match(Q)
        hit = (cls, iso[proj])
        cache[node] = hit
    return hit


def induced_on_quotient(g: np.ndarray, to_rep: np.ndarray, size: int) -> np.ndarray:
    """Permutation of the representative induced by an automorphism g of A."""
    pre = np.zeros(size, dtype=np.int64)
    pre[to_rep[::-1]] = np.arange(to_rep.size)[::-1]
    return to_rep[g[pre]]


# -- s-counts and the Q-family --------------------------------------------------

def s_count(A: FiniteModule) -> DimensionFunction:
    """#Surj(Rⁿ, A) = Σ_B μ(B, A)·|B|ⁿ."""
    L = A.lattice
    return s_quotient(A, L.bottom)


def s_quotient(A: FiniteModule, node: int) -> DimensionFunction:
    """s-count of A/N read off the interval [N, A]."""
    L = A.lattice
    col = L.moebius_column(L.top)
    n = int(L.sizes[node])
    terms: dict[int, int] = {}
    for b in np.nonzero(col)[0]:
        if L.leq[node, b]:
            base = int(L.sizes[b]) // n
            terms[base] = terms.get(base, 0) + int(col[b])
    return DimensionFunction(terms)


def dim_QAM(A: FiniteModule, irr: int | None = None, ctx: Context | None = None,
            module_dim: int | None = None) -> DimensionFunction:
    """(dim M / |Aut A|)·s_A."""
    if module_dim is None:
        if irr is None:
            module_dim = 1
        else:
            cls, _ = get_catalog(A.ring).match(A)
            table = _ctx_for(A.ring, cls.length, ctx).table(cls)
            if not 0 <= irr < len(table):
                raise KeyError(f"unknown irreducible index {irr}")
            module_dim = table.degrees[irr]
    from .modules import aut_group
    return s_count(A) * Fraction(module_dim, aut_group(A).order)


def _qupper_interval(A: FiniteModule, top: int) -> DimensionFunction:
    L = A.lattice
    size = int(L.sizes[top])
    f = DimensionFunction.power(size)
    for C in L.all_chains(DECREASING, top):
        sign = -(-1) ** C.d
        for chain in C:
            f = f + DimensionFunction.power(size // int(L.sizes[chain[0]]), sign)
    return f


def dim_Qupper(A: FiniteModule) -> DimensionFunction:
    """|A|ⁿ − Σ_d (−1)^d Σ_{Q_d(A)} |A/N₀|ⁿ."""
    return _qupper_interval(A, A.lattice.top)


def dim_QA_via_resolution(A: FiniteModule) -> DimensionFunction:
    """|A|ⁿ + Σ_d (−1)^{d+1} Σ_{N_d(A)} |T₀|ⁿ."""
    L = A.lattice
    f = DimensionFunction.power(len(A))
    for C in L.all_chains(STRICT):
        sign = (-1) ** (C.d + 1)
        for chain in C:
            f = f + DimensionFunction.power(int(L.sizes[chain[0]]), sign)
    return f


@dataclass
class QofA:
    euler: DimensionFunction
    product: DimensionFunction

    @property
    def agree(self) -> bool:
        return self.euler == self.product


def dim_Q_of_A(A: FiniteModule, check: bool = True) -> QofA:
    """dim Q(A) by the augmented resolution and by s_{A/Rad}·dim Q^{Rad}."""
    L = A.lattice
    rad = L.radical
    euler = s_count(A)
    for C in L.all_chains(DECREASING, rad):
        sign = (-1) ** (C.d + 1)
        for chain in C:
            euler = euler + s_quotient(A, chain[0]) * sign
    product = s_quotient(A, rad) * _qupper_interval(A, rad)
    out = QofA(euler, product)
    if check and not out.agree:
        raise InvariantViolation("the two routes to dim Q(A) disagree",
                                 {"euler": str(euler), "product": str(product)})
    return out


# -- equivariant data on catalog representatives --------------------------------

def q_of_a_character(cls: ModuleIsoClass, ctx: Context) -> list[DimensionFunction]:
    """Virtual Aut(A)-character of Q(A)(Rⁿ), one exponential polynomial per class.

    g contributes a chain N of Q_d(Rad A) when it fixes every N_i and acts
    trivially on A/N₀; the leading Q_A term is free, so it only shows at 1.
    """
    hit = ctx._vchars.get(cls.class_id)
    if hit is not None:
        return hit
    A = cls.representative
    G = cls.aut_group
    L = A.lattice
    chainsets = L.all_chains(DECREASING, L.radical)
    s_A = s_count(A)
    out = []
    for k, rep in enumerate(G.class_reps):
        g = G.elements[rep]
        f = s_A if rep == 0 else DimensionFunction()
        if chainsets:
            nodes = L.node_permutation(g)
        for C in chainsets:
            sign = (-1) ** (C.d + 1)
            for chain in C:
                if any(nodes[c] != c for c in chain):
                    continue
                proj = _projection(A, chain[0])
                if np.array_equal(proj[g], proj):
                    f = f + s_quotient(A, chain[0]) * sign
        out.append(f)
    ctx._vchars[cls.class_id] = out
    return out


def q_of_a_class_function(cls: ModuleIsoClass, n: int, ctx: Context) -> ClassFunction:
    vals = [f.value(n) for f in q_of_a_character(cls, ctx)]
    return ClassFunction(ctx.table(cls), vals, virtual=True)


def dim_simple(A: FiniteModule, irr: int, ctx: Context | None = None) -> DimensionFunction:
    """dim Q(A,M)(Rⁿ) = ⟨χ_{Q(A)(Rⁿ)}·χ_M, 1⟩ as an exponential polynomial."""
    cls, _ = get_catalog(A.ring).match(A)
    ctx = _ctx_for(A.ring, cls.length, ctx)
    return _dim_simple_cls(cls, irr, ctx)


def _dim_simple_cls(cls: ModuleIsoClass, irr: int, ctx: Context) -> DimensionFunction:
    T = ctx.table(cls)
    if not 0 <= irr < len(T):
        raise KeyError(f"unknown irreducible index {irr}")
    G = T.group
    chi = T.rows[irr]
    vchar = q_of_a_character(cls, ctx)
    bases = sorted({b for f in vchar for b in f.terms})
    terms = {}
    for b in bases:
        s = 0
        for k, f in enumerate(vchar):
            c = f.terms.get(b, 0)
            if c:
                if c.denominator != 1:
                    raise InvariantViolation("non-integral chain coefficient", {"base": b})
                s += G.class_sizes[k] * int(c) * chi[k]
        terms[b] = Fraction(T.lift(s, signed=True), G.order)
    return DimensionFunction(terms)


def dim_simple_values(A: FiniteModule, irr: int, ns, ctx: Context | None = None) -> list[int]:
    """Pointwise route: inner products of the virtual character at each n."""
    cls, _ = get_catalog(A.ring).match(A)
    ctx = _ctx_for(A.ring, cls.length, ctx)
    T = ctx.table(cls)
    out = []
    for n in ns:
        bound = len(A) ** n
        if bound * 2 >= ctx.q:
            ctx = context(A.ring, ctx.depth, bound=2 * bound + 1)
            T = ctx.table(cls)
        vc = q_of_a_class_function(cls, n, ctx)
        # ⟨χ_Q χ_M, 1⟩ pairs χ_M(g) with χ_Q(g): use the inverse class on χ_M
        G = T.group
        chi_inv = ClassFunction(T, [T.rows[irr][G.inverse_class[k]] for k in range(len(T))])
        out.append(inner_product(vc, chi_inv, signed=True))
    return out


# -- transports ---------------------------------------------------------------

def _transport(cls: ModuleIsoClass, irr: int, stab: np.ndarray, to_rep: np.ndarray,
               target: ModuleIsoClass, ctx: Context) -> list[int]:
    """Multiplicities of Irr(Aut B) in the transport of M along Π = stab -> Aut(B)."""
    G = cls.aut_group
    H = target.aut_group
    T, TH = ctx.table(cls), ctx.table(target)
    size = len(target.representative)
    phi = {int(x): H.index(induced_on_quotient(G.elements[x], to_rep, size)) for x in stab}
    kernel = [x for x, h in phi.items() if h == 0]
    pi_gens = [G.index(p) for p in G.subgroup_generators(stab)]
    k_gens = [G.index(p) for p in G.subgroup_generators(kernel)]
    out = parabolic_transport(T.irreducible(irr), TH, pi_gens, phi, k_gens)
    mults = out.decompose()
    if any(m < 0 for m in mults):
        raise InvariantViolation("transport produced a negative multiplicity", {"mults": mults})
    return mults


# -- G0 vectors -----------------------------------------------------------------

QBASIS, QAMBASIS, SIMPLEBASIS = "Q", "QAM", "simple"


@dataclass
class G0Vector:
    basis: str
    entries: dict = field(default_factory=dict)  # (class_id, irr or None) -> Fraction
    ring: FiniteRing | None = None

    def add(self, key, c) -> None:
        v = self.entries.get(key, Fraction(0)) + Fraction(c)
        if v:
            self.entries[key] = v
        else:
            self.entries.pop(key, None)

    def items_sorted(self):
        cat = get_catalog(self.ring)

        def key(item):
            (cid, irr), _ = item
            return (cat.get(cid).sort_key, -1 if irr is None else irr)

        return sorted(self.entries.items(), key=key)

    def to_json(self) -> list:
        rows = []
        for (cid, irr), c in self.items_sorted():
            rows.append({"class_id": cid, "irr": irr,
                         "coeff": c.numerator if c.denominator == 1 else [c.numerator, c.denominator]})
        return rows

    def dimension(self, ctx: Context) -> DimensionFunction:
        cat = get_catalog(self.ring)
        f = DimensionFunction()
        for (cid, irr), c in self.entries.items():
            cls = cat.get(cid)
            if self.basis == QBASIS:
                g = s_count(cls.representative)
            elif self.basis == QAMBASIS:
                g = dim_QAM(cls.representative, module_dim=ctx.table(cls).degrees[irr])
            else:
                g = _dim_simple_cls(cls, irr, ctx)
            f = f + g * c
        return f


def g0_linearization(X: FiniteModule, ctx: Context | None = None, check: bool = True) -> G0Vector:
    """{k[X]} in the {Q_{A,M}} basis: deg M times the number of submodules ≅ A."""
    L = X.lattice
    ctx = _ctx_for(X.ring, L.length, ctx)
    counts: Counter = Counter()
    for mask in L.nodes:
        sub, _ = Submodule(X, mask).as_module()
        cls, _ = ctx.match(sub)
        counts[cls.class_id] += 1
    v = G0Vector(QAMBASIS, ring=X.ring)
    for cid, k in counts.items():
        T = ctx.table(ctx.catalog.get(cid))
        for i, d in enumerate(T.degrees):
            v.add((cid, i), d * k)
    if check:
        _bookkeeping(v, len(X), ctx)
    return v


def _bookkeeping(v: G0Vector, size: int, ctx: Context) -> None:
    f = v.dimension(ctx)
    for n in CHECK_POINTS:
        if f(n) != size ** n:
            raise InvariantViolation("G0 bookkeeping identity fails",
                                     {"n": n, "got": str(f(n)), "want": size ** n, "basis": v.basis})


def expand_QAM(cls: ModuleIsoClass, irr: int, ctx: Context) -> dict:
    """{Q_{A,M}} in the simple basis (memoized).

    {Q_{A,M}} = {Q(A,M)} + Σ_d (−1)^d Σ_{orbits [N] of Q_d(Rad A)} Σ_{M'} c·{Q_{A/N₀,M'}},
    with c the multiplicity of M' in the transport of M along Stab(N).
    """
    key = (cls.class_id, irr)
    hit = ctx._expansions.get(key)
    if hit is not None:
        return hit
    A = cls.representative
    L = A.lattice
    out: Counter = Counter({key: 1})
    for C in L.all_chains(DECREASING, L.radical):
        sign = (-1) ** C.d
        for orbit in chain_orbits(C, cls.aut_group):
            target, to_rep = quotient_class(A, orbit.representative[0])
            mults = _transport(cls, irr, orbit.stabilizer, to_rep, target, ctx)
            for j, c in enumerate(mults):
                if c:
                    for k2, v2 in expand_QAM(target, j, ctx).items():
                        out[k2] += sign * c * v2
    res = {k: v for k, v in out.items() if v}
    ctx._expansions[key] = res
    return res


def g0_to_simple_basis(v: G0Vector, ctx: Context, check_size: int | None = None) -> G0Vector:
    cat = get_catalog(v.ring)
    out = G0Vector(SIMPLEBASIS, ring=v.ring)
    if v.basis == SIMPLEBASIS:
        out.entries = dict(v.entries)
        return out
    for (cid, irr), c in v.entries.items():
        cls = cat.get(cid)
        if v.basis == QBASIS:
            T = ctx.table(cls)
            pieces = [(i, c * d) for i, d in enumerate(T.degrees)]
        else:
            pieces = [(irr, c)]
        for i, ci in pieces:
            for k2, v2 in expand_QAM(cls, i, ctx).items():
                out.add(k2, ci * v2)
    if check_size is not None:
        _bookkeeping(out, check_size, ctx)
    return out


def decompose_linearization(X: FiniteModule, ctx: Context | None = None) -> tuple[G0Vector, G0Vector]:
    ctx = _ctx_for(X.ring, X.length, ctx)
    v = g0_linearization(X, ctx)
    return v, g0_to_simple_basis(v, ctx, check_size=len(X))


# -- parabolic shifts -------------------------------------------------------------

@dataclass
class LinFormalSum:
    """⊕ mult·k[A] (or ⊕ mult·Q_A when ``kind == "Q"``) keyed by class id."""
    ring: FiniteRing
    terms: Counter
    kind: str = "lin"

    def items_sorted(self):
        cat = get_catalog(self.ring)
        return sorted(self.terms.items(), key=lambda kv: cat.get(kv[0]).sort_key)

    def dimension(self) -> DimensionFunction:
        cat = get_catalog(self.ring)
        f = DimensionFunction()
        for cid, k in self.terms.items():
            A = cat.get(cid).representative
            f = f + (s_count(A) if self.kind == "Q" else DimensionFunction.power(len(A))) * k
        return f

    def to_json(self) -> list:
        return [{"class_id": cid, "mult": k} for cid, k in self.items_sorted()]


def _image_nodes(A: FiniteModule, T: np.ndarray) -> np.ndarray:
    L = A.lattice
    ind = np.zeros((T.shape[0], len(A)), dtype=bool)
    ind[np.arange(T.shape[0])[:, None], T] = True
    packed = np.packbits(ind, axis=1, bitorder="little")
    return np.array([L.index[int.from_bytes(r.tobytes(), "little")] for r in packed], dtype=np.int64)


def _shift_terms(x: FiniteModule, A: FiniteModule, drop_zero: bool) -> Counter:
    T = hom_tables(x, A)
    if drop_zero:
        T = T[(T != 0).any(axis=1)]
    nodes = Counter(_image_nodes(A, T).tolist())
    out: Counter = Counter()
    for node, k in nodes.items():
        cls, _ = quotient_class(A, node)
        out[cls.class_id] += k
    return out


def taubar_lin(x: FiniteModule, A: FiniteModule) -> LinFormalSum:
    """{A/A_ξ : ξ ∈ A(x)}."""
    return LinFormalSum(A.ring, _shift_terms(x, A, False))


def deltabar_lin(x: FiniteModule, A: FiniteModule) -> LinFormalSum:
    """{A/A_ξ : ξ ∈ A(x), ξ ≠ 0}."""
    return LinFormalSum(A.ring, _shift_terms(x, A, True))


def taubar_Q(x: FiniteModule, A: FiniteModule) -> LinFormalSum:
    return LinFormalSum(A.ring, _shift_terms(x, A, False), kind="Q")


def taubar_QAM(x: FiniteModule, A: FiniteModule, irr: int, ctx: Context | None = None) -> Counter:
    """Σ over Aut(A)-orbits of ξ ∈ A(x) of Q_{A/A_ξ, M'} with M' from the transport of M."""
    cls, _ = get_catalog(A.ring).match(A)
    ctx = _ctx_for(A.ring, cls.length, ctx)
    rep = cls.representative
    G = cls.aut_group
    T = hom_tables(x, rep).astype(np.int64)
    index = {row.tobytes(): i for i, row in enumerate(T)}
    nodes = _image_nodes(rep, T)
    seen = np.zeros(T.shape[0], dtype=bool)
    out: Counter = Counter()
    for start in range(T.shape[0]):
        if seen[start]:
            continue
        orbit = {index[G.elements[g][T[start]].tobytes()] for g in range(G.order)}
        seen[list(orbit)] = True
        stab = np.nonzero((G.elements[:, T[start]] == T[start][None, :]).all(axis=1))[0]
        target, to_rep = quotient_class(rep, int(nodes[start]))
        for j, c in enumerate(_transport(cls, irr, stab, to_rep, target, ctx)):
            if c:
                out[(target.class_id, j)] += c
    return out


def _tuple_states(A: FiniteModule, m: int, n: int):
    k = len(A)
    total = k ** (m + n)
    idx = np.arange(total, dtype=np.int64)
    weights = k ** np.arange(m + n, dtype=np.int64)
    coords = (idx[:, None] // weights[None, :]) % k
    return coords, weights


def _orbit_labels(A: FiniteModule, m: int, n: int, generating_only: bool):
    """Orbits of m×n matrices f acting by (ξ, α) ↦ (ξ, α + ξ·f)."""
    coords, weights = _tuple_states(A, m, n)
    total = coords.shape[0]
    keep = np.ones(total, dtype=bool)
    if generating_only:
        L = A.lattice
        span = np.zeros(total, dtype=np.int64)
        cyc = L.cyclic_node
        jt = join_table(L)
        for j in range(m + n):
            span = jt[span, cyc[coords[:, j]]]
        keep = span == L.top
    rows, cols = [], []
    src = np.nonzero(keep)[0]
    for i in range(m):
        for j in range(n):
            for r in A.ring.additive_generators:
                new = coords[src].copy()
                new[:, m + j] = A.add[new[:, m + j], A.act[new[:, i], r]]
                rows.append(src)
                cols.append(new @ weights)
    if rows:
        r_ = np.concatenate(rows)
        c_ = np.concatenate(cols)
    else:
        r_ = c_ = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r_.size, dtype=np.int8), (r_, c_)), shape=(total, total)).tocsr()
    _, labels = connected_components(graph, directed=False)
    return coords, weights, keep, labels


def join_table(L) -> np.ndarray:
    jt = L.__dict__.get("_join_table")
    if jt is None:
        leq = L.leq
        sizes = L.sizes
        n = len(L)
        jt = np.empty((n, n), dtype=np.int64)
        big = sizes.max() + 1
        for i in range(n):
            ub = leq[i][None, :] & leq  # [j, k]: i <= k and j <= k
            jt[i] = np.where(ub, sizes[None, :], big).argmin(axis=1)
        L._join_table = jt
    return jt


def verify_orbit_formula(m: int, A: FiniteModule, n: int, version: str = "lin") -> dict:
    """Compare orbit counts on A(Rᵐ ⊕ Rⁿ) with Σ_ξ |(A/A_ξ)(Rⁿ)| (or s-counts)."""
    gen_only = version == "Q"
    _, _, keep, labels = _orbit_labels(A, m, n, gen_only)
    lhs = int(np.unique(labels[keep]).size)
    terms = _shift_terms(free_module(A.ring, m), A, False)
    cat = get_catalog(A.ring)
    rhs = 0
    for cid, k in terms.items():
        B = cat.get(cid).representative
        rhs += k * (s_count(B).value(n) if gen_only else len(B) ** n)
    return {"x_rank": m, "a_rank": n, "version": version, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs}


def verify_orbit_formula_QAM(m: int, A: FiniteModule, n: int, irr: int,
                             ctx: Context | None = None) -> dict:
    """Equivariant form: ⟨Aut(A) on orbits, χ_M⟩ against the transported Q_{B,M'} sum."""
    cls, _ = get_catalog(A.ring).match(A)
    ctx = _ctx_for(A.ring, cls.length, ctx)
    rep = cls.representative
    G = cls.aut_group
    T = ctx.table(cls)
    coords, weights, keep, labels = _orbit_labels(rep, m, n, True)
    orbit_ids, first = np.unique(labels[keep], return_index=True)
    rep_states = np.nonzero(keep)[0][first]
    values = []
    for g in G.class_reps:
        moved = G.elements[g][coords[rep_states]] @ weights
        values.append(int((labels[moved] == orbit_ids).sum()))
    perm = ClassFunction(T, values)
    chi_inv = ClassFunction(T, [T.rows[irr][G.inverse_class[k]] for k in range(len(T))])
    lhs = inner_product(perm, chi_inv)
    rhs = Fraction(0)
    cat = get_catalog(A.ring)
    for (cid, j), c in taubar_QAM(free_module(A.ring, m), rep, irr, ctx).items():
        B = cat.get(cid)
        rhs += c * dim_QAM(B.representative, module_dim=ctx.table(B).degrees[j])(n)
    return {"x_rank": m, "a_rank": n, "irr": irr, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs}


def noncommutation_gap(A: FiniteModule, x: int, y: int, a: int) -> int:
    """|A(x)|·Σ_ζ |(A/A_ζ)(a)| − Σ_ζ |(A/A_ζ)(x)|·|(A/A_ζ)(a)| over ζ ∈ A(y); never negative."""
    terms = _shift_terms(free_module(A.ring, y), A, False)
    cat = get_catalog(A.ring)
    lhs = rhs = 0
    for cid, k in terms.items():
        b = len(cat.get(cid).representative)
        lhs += k * len(A) ** x * b ** a
        rhs += k * b ** x * b ** a
    return lhs - rhs


# -- F_d membership ------------------------------------------------------------------

@dataclass
class FdResult:
    member: bool
    d: int
    length: int
    witness: list = field(default_factory=list)
    transitions_checked: int = 0

    def to_json(self) -> dict:
        return {"member": self.member, "d": self.d, "length": self.length,
                "witness": self.witness, "transitions_checked": self.transitions_checked}


def _longest_cyclic_path(A: FiniteModule) -> tuple[int, int]:
    """Longest chain of nonzero cyclic quotient steps, by exhaustive DP over the lattice."""
    L = A.lattice
    jt = join_table(L)
    cyc = np.unique(L.cyclic_node)
    best = np.zeros(len(L), dtype=np.int64)
    checked = 0
    for node in range(len(L) - 1, -1, -1):
        nxt = {int(jt[node, c]) for c in cyc}
        nxt.discard(node)
        checked += len(nxt)
        best[node] = 1 + max(best[j] for j in nxt) if nxt else 0
    return int(best[0]), checked


def fd_membership(A: FiniteModule, d: int) -> FdResult:
    """k[A] ∈ F_d, tested by iterating δ̄_R (quotients by nonzero cyclic submodules)."""
    if d < -1:
        raise ValueError("d must be at least -1")
    L = A.lattice
    steps, checked = _longest_cyclic_path(A)
    if steps != L.length:
        raise InvariantViolation("longest cyclic-step chain differs from the length",
                                 {"steps": steps, "length": L.length})
    res = FdResult(steps <= d, d, L.length, transitions_checked=checked)
    if not res.member:
        # each step quotients by the cyclic submodule of the image of xi
        jt = join_table(L)
        node = 0
        for _ in range(d + 1):
            proj = _projection(A, node)
            h = L.height[node]
            m = next(int(m) for m in range(len(A)) if L.height[jt[node, L.cyclic_node[m]]] == h + 1)
            node = int(jt[node, L.cyclic_node[m]])
            res.witness.append({"xi": int(proj[m]), "kernel": L.elements(node).tolist(),
                                "quotient_size": len(A) // int(L.sizes[node]),
                                "quotient_length": L.length - int(L.height[node])})
    return res


def fd_membership_formal(expr: LinFormalSum, d: int) -> FdResult:
    cat = get_catalog(expr.ring)
    out = FdResult(True, d, 0)
    for cid, _ in expr.items_sorted():
        r = fd_membership(cat.get(cid).representative, d)
        out.length = max(out.length, r.length)
        out.transitions_checked += r.transitions_checked
        if not r.member and out.member:
            out.member = False
            out.witness = [{"class_id": cid}] + r.witness
    return out


# -- census ------------------------------------------------------------------------

def simple_census(R: FiniteRing, d_max: int, n_eval: int, ctx: Context | None = None) -> dict:
    ctx = _ctx_for(R, d_max, ctx)
    p = ring_prime(len(R))
    ns = list(range(n_eval + 1))
    rows = []
    layers = Counter()
    for cls in ctx.classes():
        if cls.length > d_max:
            continue
        T = ctx.table(cls)
        A = cls.representative
        for i, deg in enumerate(T.degrees):
            fq = dim_QAM(A, module_dim=deg)
            fs = _dim_simple_cls(cls, i, ctx)
            row = {
                "class_id": cls.class_id,
                "length": cls.length,
                "size": cls.size,
                "aut_order": cls.aut_order,
                "irr": i,
                "degree": deg,
                "dim_QAM": fq.values(ns),
                "dim_simple": fs.values(ns),
                "dim_QAM_terms": fq.to_json(),
                "dim_simple_terms": fs.to_json(),
            }
            if p is not None:
                row["chi_QAM"] = chi_polynomial(fq, p).to_json()
                row["chi_simple"] = chi_polynomial(fs, p).to_json()
            rows.append(row)
            layers[cls.length] += 1
    return {"rows": rows, "layers": [layers.get(k, 0) for k in range(d_max + 1)], "modulus": ctx.q}
