"""Finite unital rings stored as full addition/multiplication tables.

Element orders are fixed by construction:

* ``zn(n)``: element ``i`` is the residue ``i``.
* ``gf`` and ``poly_quot``: element index is the little-endian mixed-radix
  encoding of the coefficient vector ``(c_0, ..., c_{e-1})`` over the base
  ring, i.e. ``c_0 + |B| c_1 + |B|^2 c_2 + ...``.
* ``product``: index of ``(a_1, ..., a_k)`` is ``a_1 + |R_1| a_2 + ...``.
* ``table``: the order given by the tables.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceeded, SpecError

DEFAULT_RING_CAP = 256


class RingAxiomError(SpecError):
    pass


@dataclass
class ValidationReport:
    """Violated axiom instances. ``total`` counts all, ``violations`` is truncated at ``limit``."""

    violations: list = field(default_factory=list)
    total: int = 0
    limit: int | None = 1000

    def add(self, axiom, instance):
        self.total += 1
        if self.limit is None or len(self.violations) < self.limit:
            self.violations.append((axiom, tuple(int(v) for v in instance)))

    @property
    def ok(self) -> bool:
        return self.total == 0

    def __bool__(self):
        # truthy when something is wrong, like a non-empty list
        return self.total > 0

    def axioms(self) -> set[str]:
        return {a for a, _ in self.violations}


class FiniteRing:
    """A finite unital ring given by exact element tables.

    Instances are treated as immutable; tables are read-only numpy arrays.
    """

    def __init__(self, add, mul, zero=0, one=1, name=None, labels=None):
        self.add = np.array(add, dtype=np.int64)
        self.mul = np.array(mul, dtype=np.int64)
        self.add.setflags(write=False)
        self.mul.setflags(write=False)
        self.zero = int(zero)
        self.one = int(one)
        self.name = name
        self.labels = labels

    @property
    def element_count(self) -> int:
        return self.add.shape[0]

    def __len__(self):
        return self.element_count

    def __repr__(self):
        return f"FiniteRing({self.name or '?'}, |R|={len(self)}, id={self.canonical_id})"

    def canonical_payload(self) -> dict:
        return {
            "add": self.add.tolist(),
            "mul": self.mul.tolist(),
            "n": self.element_count,
            "one": self.one,
            "zero": self.zero,
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json(self.canonical_payload()).encode()

    @cached_property
    def canonical_id(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()[:16]

    @cached_property
    def neg(self) -> np.ndarray:
        return np.argmax(self.add == self.zero, axis=1)

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def additive_generators(self) -> tuple[int, ...]:
        """Greedy additive generating set (smallest indices first)."""
        span = {self.zero}
        gens = []
        for r in range(len(self)):
            if r in span:
                continue
            gens.append(r)
            span = _additive_closure(self.add, span, r)
            if len(span) == len(self):
                break
        return tuple(gens)

    @cached_property
    def characteristic(self) -> int:
        x, k = self.zero, 0
        while True:
            x = int(self.add[x, self.one])
            k += 1
            if x == self.zero:
                return k

    def opposite(self) -> FiniteRing:
        name = f"op({self.name})" if self.name else None
        return FiniteRing(self.add, self.mul.T, self.zero, self.one, name=name, labels=self.labels)

    def label(self, r: int) -> str:
        if self.labels is not None:
            return str(self.labels[r])
        return str(r)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _additive_closure(add, span: set, r: int) -> set:
    # H + <r> = union of H + k r
    out = set(span)
    k_r = r
    while k_r not in span:
        out.update(int(add[h, k_r]) for h in span)
        k_r = int(add[k_r, r])
    return out


# ---------------------------------------------------------------- constructors


def zn(n: int, cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    if n < 1:
        raise SpecError(f"zn needs n >= 1, got {n}")
    _check_cap(n, cap)
    a = np.arange(n)
    return FiniteRing((a[:, None] + a[None, :]) % n, (a[:, None] * a[None, :]) % n,
                      0, 1 % n, name=f"Z/{n}")


def _poly_tables(base: FiniteRing, poly: list[int]):
    """Tables of base[t]/(poly) for a monic ``poly`` given low-to-high."""
    e = len(poly) - 1
    if e < 1:
        raise SpecError("quotient polynomial must have degree >= 1")
    if poly[-1] != base.one:
        raise SpecError("quotient polynomial must be monic")
    b = len(base)
    elems = list(itertools.product(range(b), repeat=e))
    # little-endian: first coordinate least significant
    elems = [tuple(reversed(c)) for c in elems]
    elems.sort(key=lambda c: sum(ci * b**i for i, ci in enumerate(c)))
    index = {c: i for i, c in enumerate(elems)}
    add = base.add
    mul = base.mul

    def padd(u, v):
        return tuple(int(add[x, y]) for x, y in zip(u, v))

    def pmul(u, v):
        prod = [base.zero] * (2 * e - 1)
        for i, ui in enumerate(u):
            for j, vj in enumerate(v):
                prod[i + j] = int(add[prod[i + j], mul[ui, vj]])
        # reduce: t^e = -(poly_0 + ... + poly_{e-1} t^{e-1})
        for d in range(2 * e - 2, e - 1, -1):
            c = prod[d]
            if c == base.zero:
                continue
            prod[d] = base.zero
            for i in range(e):
                sub = int(mul[c, poly[i]])
                prod[d - e + i] = int(add[prod[d - e + i], base.neg[sub]])
        return tuple(prod[:e])

    n = len(elems)
    A = np.empty((n, n), dtype=np.int64)
    M = np.empty((n, n), dtype=np.int64)
    for i, u in enumerate(elems):
        for j, v in enumerate(elems):
            A[i, j] = index[padd(u, v)]
            M[i, j] = index[pmul(u, v)]
    one = index[(base.one,) + (base.zero,) * (e - 1)]
    return A, M, index[(base.zero,) * e], one, elems


def poly_quot(base: FiniteRing, poly, cap: int = DEFAULT_RING_CAP, name=None) -> FiniteRing:
    poly = [int(c) for c in poly]
    _check_cap(len(base) ** (len(poly) - 1), cap)
    A, M, zero, one, elems = _poly_tables(base, poly)
    labels = [_poly_label(c, base) for c in elems]
    if name is None:
        name = f"{base.name}[t]/({_poly_label(poly, base)})"
    return validated(FiniteRing(A, M, zero, one, name=name, labels=labels))


def _poly_label(coeffs, base) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == base.zero:
            continue
        cl = base.label(c)
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if not mono:
            terms.append(cl)
        elif c == base.one:
            terms.append(mono)
        else:
            terms.append(f"{cl}{mono}")
    return "+".join(terms) if terms else "0"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, m = 0, q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise SpecError(f"{q} is not a prime power")
            return p, e
    raise SpecError(f"{q} is not a prime power")


def default_irreducible(p: int, e: int) -> list[int]:
    """Lexicographically first monic irreducible of degree ``e`` over F_p (low-to-high)."""
    base = zn(p)
    for tail in itertools.product(range(p), repeat=e):
        poly = list(reversed(tail)) + [1]
        if poly[0] == 0:
            continue
        A, M, zero, one, _ = _poly_tables(base, poly)
        if _is_field_tables(M, zero, one):
            return poly
    raise SpecError(f"no irreducible polynomial of degree {e} over F_{p}")


def _is_field_tables(mul, zero, one) -> bool:
    n = mul.shape[0]
    return all((mul[r] == one).any() for r in range(n) if r != zero)


def gf(q: int, poly=None, cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    p, e = _prime_power(q)
    _check_cap(q, cap)
    if e == 1:
        if poly is not None and len(poly) != 2:
            raise SpecError("prime field takes no polynomial (or a degree-1 one)")
        R = zn(p)
        R.name = f"GF({p})"
        return R
    if poly is None:
        poly = default_irreducible(p, e)
    poly = [int(c) % p for c in poly]
    if len(poly) != e + 1 or poly[-1] != 1:
        raise SpecError(f"GF({q}) needs a monic polynomial of degree {e}")
    A, M, zero, one, elems = _poly_tables(zn(p), poly)
    if not _is_field_tables(M, zero, one):
        raise SpecError(f"polynomial {poly} is reducible over F_{p}")
    labels = [_poly_label(c, zn(p)).replace("t", "x") for c in elems]
    return FiniteRing(A, M, zero, one, name=f"GF({q})", labels=labels)


def product(*factors: FiniteRing, cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    if not factors:
        return zn(1)
    sizes = [len(f) for f in factors]
    n = int(np.prod(sizes))
    _check_cap(n, cap)
    coords = list(itertools.product(*[range(s) for s in reversed(sizes)]))
    coords = [tuple(reversed(c)) for c in coords]
    strides = np.cumprod([1] + sizes[:-1])

    def idx(c):
        return int(sum(ci * s for ci, s in zip(c, strides)))

    coords.sort(key=idx)
    C = np.array(coords)
    A = np.zeros((n, n), dtype=np.int64)
    M = np.zeros((n, n), dtype=np.int64)
    for k, f in enumerate(factors):
        A += f.add[C[:, k][:, None], C[:, k][None, :]] * strides[k]
        M += f.mul[C[:, k][:, None], C[:, k][None, :]] * strides[k]
    zero = idx(tuple(f.zero for f in factors))
    one = idx(tuple(f.one for f in factors))
    name = " x ".join(f.name or "?" for f in factors)
    return FiniteRing(A, M, zero, one, name=name)


def from_tables(add, mul, zero=0, one=1, cap: int = DEFAULT_RING_CAP, name=None) -> FiniteRing:
    add = np.asarray(add)
    mul = np.asarray(mul)
    n = add.shape[0] if add.ndim == 2 else 0
    if add.shape != (n, n) or mul.shape != (n, n) or n == 0:
        raise RingAxiomError("tables must be square, nonempty and of equal size")
    _check_cap(n, cap)
    if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
        raise RingAxiomError("table entries out of range")
    R = validated(FiniteRing(add, mul, zero, one, name=name))
    if R.zero != 0:
        # module code assumes the zero element sits at index 0
        perm = np.arange(n)
        perm[[0, R.zero]] = perm[[R.zero, 0]]
        R = FiniteRing(perm[R.add[np.ix_(perm, perm)]], perm[R.mul[np.ix_(perm, perm)]],
                       0, int(perm[R.one]), name=name)
    return R


def validated(R: FiniteRing) -> FiniteRing:
    rep = verify_axioms(R, limit=5)
    if rep:
        raise RingAxiomError(f"ring axioms fail ({rep.total} instances), e.g. {rep.violations}")
    return R


def _check_cap(n, cap):
    if n > cap:
        raise CapExceeded(f"ring with {n} elements exceeds cap {cap}")


def build_ring(spec: dict, cap: int = DEFAULT_RING_CAP) -> FiniteRing:
    """Build a ring from a JSON-style description (see module docstring)."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("ring description must be an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "zn":
        return zn(int(spec["n"]), cap=cap)
    if kind == "gf":
        q = int(spec["q"]) if "q" in spec else int(spec["p"]) ** int(spec.get("e", 1))
        return gf(q, spec.get("poly"), cap=cap)
    if kind == "poly_quot":
        base = build_ring(spec["base"], cap=cap)
        return poly_quot(base, spec["poly"], cap=cap)
    if kind == "product":
        return product(*[build_ring(f, cap=cap) for f in spec["factors"]], cap=cap)
    if kind == "table":
        return from_tables(spec["add"], spec["mul"], spec.get("zero", 0), spec.get("one", 1),
                           cap=cap, name=spec.get("name"))
    raise SpecError(f"unknown ring kind {kind!r}")


# ---------------------------------------------------------------- checks


def verify_axioms(R: FiniteRing, limit: int | None = 1000) -> ValidationReport:
    """Exhaustively check the unital ring axioms. Empty report iff valid."""
    rep = ValidationReport(limit=limit)
    add, mul, z, o = R.add, R.mul, R.zero, R.one
    n = add.shape[0]
    ar = np.arange(n)
    for a in np.nonzero(add[z] != ar)[0]:
        rep.add("additive identity", (a,))
    for a, b in zip(*np.nonzero(add != add.T)):
        if a < b:
            rep.add("additive commutativity", (a, b))
    for a in np.nonzero(~(add == z).any(axis=1))[0]:
        rep.add("additive inverse", (a,))
    for a in np.nonzero((mul[o] != ar) | (mul[:, o] != ar))[0]:
        rep.add("multiplicative identity", (a,))
    for a in range(n):
        # (a+b)+c == a+(b+c)
        lhs = add[add[a]][:, :]
        rhs = add[a][add]
        for b, c in zip(*np.nonzero(lhs != rhs)):
            rep.add("additive associativity", (a, b, c))
        lhs = mul[mul[a]]
        rhs = mul[a][mul]
        for b, c in zip(*np.nonzero(lhs != rhs)):
            rep.add("multiplicative associativity", (a, b, c))
        # a(b+c) == ab+ac
        lhs = mul[a][add]
        rhs = add[mul[a][:, None], mul[a][None, :]]
        for b, c in zip(*np.nonzero(lhs != rhs)):
            rep.add("left distributivity", (a, b, c))
        # (b+c)a == ba+ca
        lhs = mul[:, a][add]
        rhs = add[mul[:, a][:, None], mul[:, a][None, :]]
        for b, c in zip(*np.nonzero(lhs != rhs)):
            rep.add("right distributivity", (b, c, a))
    return rep


def units(R: FiniteRing) -> list[int]:
    """Two-sided invertible elements."""
    one = R.one
    left = (R.mul == one).any(axis=1)
    right = (R.mul == one).any(axis=0)
    return [int(r) for r in np.nonzero(left & right)[0]]


def k_trivial(R: FiniteRing, coeff_char: int) -> bool:
    if coeff_char < 0:
        raise ValueError("characteristic must be nonnegative")
    if coeff_char == 0:
        return True
    if not _is_prime(coeff_char):
        raise ValueError(f"coefficient characteristic {coeff_char} is not 0 or a prime")
    return len(R) % coeff_char != 0


def primary_prime(R: FiniteRing) -> int | None:
    """The prime p with |R| = p^e, or None if |R| is not a prime power."""
    n = len(R)
    if n == 1:
        return None
    try:
        p, _ = _prime_power(n)
    except SpecError:
        return None
    return p


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


__all__ = [
    "FiniteRing", "ValidationReport", "RingAxiomError", "build_ring", "zn", "gf",
    "poly_quot", "product", "from_tables", "verify_axioms", "units", "k_trivial",
    "primary_prime", "canonical_json", "default_irreducible",
]
