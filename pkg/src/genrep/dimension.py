"""Exponential polynomials n ↦ Σ c_b·bⁿ and their χ-polynomial form P(pⁿ)."""

from __future__ import annotations

from fractions import Fraction

from .rings import prime_factors


def _frac_pair(c: Fraction) -> list[int]:
    return [c.numerator, c.denominator]


class DimensionFunction:
    """Exact exponential polynomial with positive integer bases."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[int, Fraction] = {}
        for b, c in (terms or {}).items():
            b = int(b)
            if b < 1:
                raise ValueError("bases must be positive integers")
            c = Fraction(c)
            if c:
                clean[b] = clean.get(b, Fraction(0)) + c
                if not clean[b]:
                    del clean[b]
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, c) -> "DimensionFunction":
        return cls({1: c})

    @classmethod
    def power(cls, b: int, c=1) -> "DimensionFunction":
        return cls({b: c})

    def __call__(self, n: int) -> Fraction:
        return sum((c * Fraction(b) ** n for b, c in self.terms.items()), Fraction(0))

    def value(self, n: int) -> int:
        """Evaluate and insist on an integer."""
        v = self(n)
        if v.denominator != 1:
            raise ValueError(f"non-integer value {v} at n={n}")
        return int(v)

    def values(self, ns) -> list[int]:
        return [self.value(n) for n in ns]

    def __add__(self, other):
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return DimensionFunction(out)

    def __neg__(self):
        return DimensionFunction({b: -c for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, DimensionFunction):
            out: dict[int, Fraction] = {}
            for b1, c1 in self.terms.items():
                for b2, c2 in other.terms.items():
                    out[b1 * b2] = out.get(b1 * b2, 0) + c1 * c2
            return DimensionFunction(out)
        return DimensionFunction({b: c * Fraction(other) for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DimensionFunction) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"DimensionFunction({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b, c in sorted(self.terms.items(), reverse=True):
            mag = abs(c)
            coef = "" if mag == 1 and b != 1 else str(mag)
            body = f"{b}^n" if b != 1 else ""
            term = f"{coef}*{body}" if coef and body else (coef or body)
            parts.append(("-" if c < 0 else "+", term))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, t in parts[1:]:
            s += f" {sign} {t}"
        return s

    def to_json(self) -> list:
        return [[b, *_frac_pair(c)] for b, c in self.terms.items()]


def primary_exponent(b: int, p: int) -> int | None:
    e = 0
    while b % p == 0:
        b //= p
        e += 1
    return e if b == 1 else None


class NotPrimaryError(ValueError):
    def __init__(self, f: DimensionFunction, p: int):
        super().__init__(f"bases of {f} are not all powers of {p}; multi-base form: {f.to_json()}")
        self.function = f


class ChiPolynomial:
    """P ∈ ℚ[X] with f(n) = P(pⁿ); coefficients low-to-high."""

    def __init__(self, p: int, coeffs):
        self.p = int(p)
        coeffs = [Fraction(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = coeffs or [Fraction(0)]

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == [0] else len(self.coeffs) - 1

    def __call__(self, X) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * X + c
        return acc

    def at_power(self, n: int) -> Fraction:
        return self(self.p ** n)

    def __eq__(self, other):
        return isinstance(other, ChiPolynomial) and (self.p, self.coeffs) == (other.p, other.coeffs)

    def __repr__(self):
        return f"ChiPolynomial(p={self.p}, {self.coeffs})"

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": [_frac_pair(c) for c in self.coeffs]}


def chi_polynomial(f: DimensionFunction, p: int, checks: int = 2) -> ChiPolynomial:
    """Collect bases pᵉ into Xᵉ and confirm at points beyond the degree."""
    coeffs: dict[int, Fraction] = {}
    for b, c in f.terms.items():
        e = primary_exponent(b, p)
        if e is None:
            raise NotPrimaryError(f, p)
        coeffs[e] = c
    deg = max(coeffs, default=0)
    P = ChiPolynomial(p, [coeffs.get(e, 0) for e in range(deg + 1)])
    for n in range(deg + 1, deg + 1 + checks):
        if P.at_power(n) != f(n):
            raise AssertionError(f"χ-polynomial disagrees with {f} at n={n}")
    return P


def interpolate(points: list[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low-to-high) of the polynomial through (X, Y) points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += Fraction(yi) * basis[k] / denom
    return coeffs


def fit_chi_polynomial(values: dict[int, int], p: int, degree: int) -> ChiPolynomial:
    """Interpolate P from f(n) at n = 0..degree (only the values are used)."""
    pts = [(p ** n, values[n]) for n in range(degree + 1)]
    return ChiPolynomial(p, interpolate(pts))


def ring_prime(order: int) -> int | None:
    ps = prime_factors(order)
    return ps[0] if len(ps) == 1 else None
