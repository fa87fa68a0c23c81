"""Sparse multivariate polynomials over F_p.

A polynomial is a dict from exponent tuples to nonzero residues in [0, p).
Text output lists terms in descending order of the ring's default monomial
order (grevlex unless declared otherwise), e.g. ``x^4 + y^4 + 4*z^4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    ExponentOverflowError,
    PreconditionError,
    RingMismatchError,
    ZeroPolynomialDegreeError,
)
from .field import check_prime

MAX_EXPONENT = 2**63 - 1

Monomial = tuple  # tuple[int, ...], one exponent per ring variable


def _grevlex_key(exp, weights):
    deg = sum(w * a for w, a in zip(weights, exp))
    return (deg,) + tuple(-a for a in reversed(exp))


class MonomialOrder:
    """lex, grlex or grevlex over a variable permutation, optionally with an elimination block.

    ``perm`` lists variable indices from most to least significant.  With
    ``block=k`` the first k variables of ``perm`` are compared first (by the
    chosen kind), then the remaining ones: an elimination order for that block.
    ``key(exp)`` returns a tuple of ints; larger key means larger monomial.
    """

    KINDS = ("lex", "grlex", "grevlex")

    def __init__(self, kind: str = "grevlex", perm: Sequence[int] | None = None,
                 block: int | None = None, weights: Sequence[int] | None = None):
        if kind not in self.KINDS:
            raise PreconditionError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.perm = tuple(perm) if perm is not None else None
        self.block = block
        self.weights = tuple(weights) if weights is not None else None

    def _single(self, exp, weights):
        if self.kind == "lex":
            return tuple(exp)
        deg = sum(w * a for w, a in zip(weights, exp))
        if self.kind == "grlex":
            return (deg,) + tuple(exp)
        return (deg,) + tuple(-a for a in reversed(exp))

    def key(self, exp) -> tuple:
        n = len(exp)
        perm = self.perm if self.perm is not None else range(n)
        e = [exp[i] for i in perm]
        w = [self.weights[i] for i in perm] if self.weights is not None else [1] * n
        if self.block is None:
            return self._single(e, w)
        k = self.block
        return self._single(e[:k], w[:k]) + self._single(e[k:], w[k:])

    def _ident(self):
        return (self.kind, self.perm, self.block, self.weights)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        extra = ""
        if self.perm is not None:
            extra += f", perm={self.perm}"
        if self.block is not None:
            extra += f", block={self.block}"
        return f"MonomialOrder({self.kind!r}{extra})"


class PolyRing:
    """F_p[y_1, ..., y_n] with positive integer weights (default all 1)."""

    def __init__(self, p: int, variables: Sequence[str], weights: Sequence[int] | None = None,
                 order: str = "grevlex"):
        self.p = check_prime(p)
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PreconditionError(f"duplicate variable names in {variables}")
        if not variables:
            raise PreconditionError("a polynomial ring needs at least one variable")
        self.variables = variables
        self.nvars = len(variables)
        if weights is None:
            weights = (1,) * self.nvars
        weights = tuple(int(w) for w in weights)
        if len(weights) != self.nvars or any(w <= 0 for w in weights):
            raise PreconditionError(f"weights must be {self.nvars} positive integers, got {weights}")
        self.weights = weights
        self.order = MonomialOrder(order, weights=None if self.standard_grading else weights)
        self._index = {v: i for i, v in enumerate(variables)}

    @property
    def standard_grading(self) -> bool:
        return all(w == 1 for w in self.weights)

    def _ident(self):
        return (self.p, self.variables, self.weights, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"PolyRing({self.p}, {list(self.variables)})"

    def __str__(self):
        return f"F_{self.p}[{', '.join(self.variables)}]"

    def index(self, name: str) -> int:
        return self._index[name]

    def has_var(self, name: str) -> bool:
        return name in self._index

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.variables]

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self._index[name]] = 1
        return Polynomial(self, {tuple(e): 1})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exp: Sequence[int], c: int = 1) -> "Polynomial":
        if len(exp) != self.nvars:
            raise PreconditionError(f"monomial {tuple(exp)} needs {self.nvars} exponents")
        return Polynomial(self, {tuple(exp): c})

    def parse(self, text: str) -> "Polynomial":
        from .parse import parse_polynomial

        return parse_polynomial(text, self)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatchError(f"{value} is not in {self}")
            return value
        if isinstance(value, int):
            return self.const(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot convert {value!r} to a polynomial")


class Polynomial:
    """Immutable polynomial in a :class:`PolyRing`."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, int]):
        p = ring.p
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                clean[tuple(e)] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._hash = None
        return obj

    # -- access --

    @property
    def terms(self) -> dict:
        """Exponent tuple -> residue.  Treat as read-only."""
        return self._terms

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Monomial, int]]:
        key = (order or self.ring.order).key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[Monomial, int]:
        if not self._terms:
            raise ZeroPolynomialDegreeError("zero polynomial has no leading term")
        key = (order or self.ring.order).key
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def coefficient_of(self, monomial) -> int:
        """Coefficient of a monomial, given as an exponent tuple or a monomial polynomial."""
        if isinstance(monomial, Polynomial):
            if len(monomial._terms) != 1:
                raise PreconditionError(f"{monomial} is not a monomial")
            monomial = next(iter(monomial._terms))
        return self._terms.get(tuple(monomial), 0)

    def weighted_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomialDegreeError("zero polynomial has no degree")
        w = self.ring.weights
        return max(sum(a * b for a, b in zip(w, e)) for e in self._terms)

    def is_homogeneous(self) -> bool:
        if not self._terms:
            return True
        w = self.ring.weights
        return len({sum(a * b for a, b in zip(w, e)) for e in self._terms}) == 1

    def degree_in(self, var: str | int) -> int:
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(e) for e in self._terms), default=0)

    # -- arithmetic --

    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        p = self.ring.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial._raw(self.ring, {e: p - c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if self.max_exponent() + other.max_exponent() > MAX_EXPONENT:
            raise ExponentOverflowError("product exponent exceeds 64 bits")
        p = self.ring.p
        out: dict = {}
        get = out.get
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (get(e, 0) + c1 * c2) % p
        return Polynomial._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.ring, {e: c * v for e, v in self._terms.items()})

    def shift(self, exp: Sequence[int], c: int = 1) -> "Polynomial":
        """Multiply by the monomial c * y^exp."""
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial._raw(
            self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c % p for e, v in self._terms.items()}
        )

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise PreconditionError(f"exponent must be a non-negative integer, got {n!r}")
        if self.max_exponent() * n > MAX_EXPONENT:
            raise ExponentOverflowError(f"power {n} overflows 64-bit exponents")
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def frobenius(self, e: int = 1) -> "Polynomial":
        """f^(p^e) by scaling exponents; coefficients in F_p are Frobenius-fixed."""
        if e < 0:
            raise PreconditionError("Frobenius exponent must be non-negative")
        q = self.ring.p**e
        if self.max_exponent() * q > MAX_EXPONENT:
            raise ExponentOverflowError(f"p^{e} * {self.max_exponent()} overflows 64-bit exponents")
        return Polynomial._raw(self.ring, {tuple(a * q for a in m): c for m, c in self._terms.items()})

    def derivative(self, var: str | int) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, out)

    def divides_monomial_wise(self, exp) -> bool:
        return all(all(a <= b for a, b in zip(m, exp)) for m in self._terms)

    def to_ring(self, ring: PolyRing, mapping: Sequence[int] | None = None) -> "Polynomial":
        """Re-embed into ``ring``; ``mapping[i]`` is the target index of variable i."""
        if mapping is None:
            mapping = [ring.index(v) for v in self.ring.variables]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * ring.nvars
            for i, a in enumerate(e):
                ne[mapping[i]] += a
            out[tuple(ne)] = c
        return Polynomial(ring, out)

    # -- comparison / text --

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r}, {self.ring!r})"


def monomial_text(exp: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for v, a in zip(variables, exp):
        if a == 1:
            parts.append(v)
        elif a:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def to_text(f: Polynomial, compact: bool = False) -> str:
    """Canonical text: descending default order, explicit '*', least non-negative residues."""
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        mon = monomial_text(e, f.ring.variables)
        if not mon:
            parts.append(str(c))
        elif c == 1:
            parts.append(mon)
        else:
            parts.append(f"{c}*{mon}")
    return ("+" if compact else " + ").join(parts)


def product(polys: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    acc = ring.one()
    for f in polys:
        acc = acc * f
    return acc


@dataclass(frozen=True)
class Homogeneity:
    degree: int
    homogeneous: bool


def weighted_degree(f: Polynomial) -> Homogeneity:
    return Homogeneity(f.weighted_degree(), f.is_homogeneous())


def frobenius_poly(f: Polynomial, e: int) -> Polynomial:
    return f.frobenius(e)


def coefficient_of(f: Polynomial, monomial) -> int:
    return f.coefficient_of(monomial)
