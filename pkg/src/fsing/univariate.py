"""Sparse univariate polynomials over a finite field and unreduced fractions of them.

These carry the coefficient domain F_{p^m}[u] of the semilinear module, where
u = x^(1/p^t) is a p^t-th root of the transcendental x.  Frobenius on such a
polynomial only rescales exponents, so q-th powers of very high degree stay
sparse.  Fractions are kept unreduced and compared by cross-multiplication,
which keeps quotients like a^(q^r) / a sparse as well.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import ExponentOverflowError, FieldMismatchError, PreconditionError
from .field import FieldElement, FiniteField

_MAX_EXP = 2**63 - 1


class UPoly:
    __slots__ = ("field", "terms", "var")

    def __init__(self, field: FiniteField, terms: Mapping[int, FieldElement] | None = None,
                 var: str = "x"):
        self.field = field
        self.var = var
        clean = {}
        for e, c in (terms or {}).items():
            c = field(c)
            if not c.is_zero():
                clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field, terms, var):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj.var = var
        return obj

    @classmethod
    def constant(cls, field: FiniteField, c, var: str = "x") -> "UPoly":
        return cls(field, {0: field(c)}, var)

    @classmethod
    def monomial(cls, field: FiniteField, e: int, c=1, var: str = "x") -> "UPoly":
        return cls(field, {e: field(c)}, var)

    def _like(self, terms):
        return UPoly._raw(self.field, terms, self.var)

    def _coerce(self, other):
        if isinstance(other, UPoly):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine polynomials over {self.field} and {other.field}")
            return other
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            return UPoly.constant(self.field, other, self.var)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def leading_coefficient(self) -> FieldElement:
        return self.terms[self.degree()] if self.terms else self.field.zero

    def coefficient(self, e: int) -> FieldElement:
        return self.terms.get(e, self.field.zero)

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[int, FieldElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return self._like({e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PreconditionError("negative powers of polynomials are not polynomials")
        if self.degree() * n > _MAX_EXP:
            raise ExponentOverflowError(f"degree {self.degree()} * {n} exceeds 64 bits")
        acc = UPoly.constant(self.field, 1, self.var)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def frob(self, e: int) -> "UPoly":
        """Raise to the p^e-th power: exponents scale, coefficients get Frobenius."""
        q = self.field.p**e
        if self.terms and self.degree() * q > _MAX_EXP:
            raise ExponentOverflowError(f"degree {self.degree()} * {q} exceeds 64 bits")
        return self._like({k * q: c.frobenius(e) for k, c in self.terms.items()})

    def rescale(self, factor: int) -> "UPoly":
        """Substitute var -> var^factor."""
        return self._like({k * factor: c for k, c in self.terms.items()})

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero
        for e, c in self.terms.items():
            acc = acc + c * x**e
        return acc

    def monic(self) -> "UPoly":
        inv = self.leading_coefficient().inverse()
        return self._like({e: c * inv for e, c in self.terms.items()})

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        """Long division; the quotient is built term by term so sparse cases stay cheap."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree()
        inv = other.leading_coefficient().inverse()
        rem = dict(self.terms)
        quo: dict[int, FieldElement] = {}
        tail = [(e, c) for e, c in other.terms.items() if e != db]
        while rem:
            d = max(rem)
            if d < db:
                break
            c = rem.pop(d) * inv
            shift = d - db
            quo[shift] = c
            for e, oc in tail:
                k = e + shift
                s = rem.get(k)
                s = -(c * oc) if s is None else s - c * oc
                if s.is_zero():
                    rem.pop(k, None)
                else:
                    rem[k] = s
        return self._like(quo), self._like(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exact_div(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise PreconditionError(f"{other} does not divide {self}")
        return q

    def powmod(self, n: int, modulus: "UPoly") -> "UPoly":
        acc = UPoly.constant(self.field, 1, self.var)
        base = self % modulus
        while n:
            if n & 1:
                acc = (acc * base) % modulus
            n >>= 1
            if n:
                base = (base * base) % modulus
        return acc

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "UPoly":
        return self._like({e - 1: c * e for e, c in self.terms.items() if e and (c * e)})

    def with_var(self, var: str) -> "UPoly":
        return UPoly._raw(self.field, self.terms, var)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return other == self
        o = self._coerce(other) if not isinstance(other, UPoly) else other
        if o is None:
            return NotImplemented
        return self.field == o.field and self.terms == o.terms

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def __str__(self):
        return self.to_text()

    def to_text(self, compact: bool = False) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            cs = str(c)
            if self.field.m > 1 and len([x for x in c.coeffs if x]) > 1:
                cs = f"({cs})"
            mon = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            if not mon:
                parts.append(cs)
            elif c.is_one():
                parts.append(mon)
            else:
                parts.append(f"{cs}*{mon}")
        return ("+" if compact else " + ").join(parts)

    def __repr__(self):
        return f"UPoly({self})"


class RatFunc:
    """num/den over F_{p^m}[u], never reduced; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly | None = None):
        if den is None:
            den = UPoly.constant(num.field, 1, num.var)
        if den.is_zero():
            raise ZeroDivisionError("fraction with zero denominator")
        # Normalize only the unit part so that constants denominators disappear.
        if den.is_constant():
            num = num * den.leading_coefficient().inverse()
            den = UPoly.constant(num.field, 1, num.var)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    @staticmethod
    def _lift(x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, UPoly):
            return RatFunc(x)
        return None

    def __add__(self, other):
        if not isinstance(other, (RatFunc, UPoly)):
            other = RatFunc(self.num._coerce(other))
        o = self._lift(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, UPoly)):
            other = RatFunc(self.num._coerce(other))
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero fraction")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other) if isinstance(other, (RatFunc, UPoly)) else RatFunc(self.num._coerce(other))
        return self * o.inverse()

    def frob(self, e: int) -> "RatFunc":
        return RatFunc(self.num.frob(e), self.den.frob(e))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant() or (self.num % self.den).is_zero()

    def to_polynomial(self) -> UPoly:
        """Exact division; raises if the fraction is not a polynomial."""
        return self.num.exact_div(self.den)

    def __eq__(self, other):
        if isinstance(other, (int, FieldElement)) and not isinstance(other, bool):
            other = self.num._coerce(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("unreduced fractions are unhashable")

    def to_text(self, compact: bool = False) -> str:
        if self.den.is_constant():
            return self.num.to_text(compact)
        return f"({self.num.to_text(compact)})/({self.den.to_text(compact)})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RatFunc({self})"


def roots_in_field(g: UPoly) -> list[FieldElement]:
    """All roots of g in its coefficient field (equal-degree splitting, deterministic)."""
    if g.is_zero():
        raise PreconditionError("zero polynomial has every element as a root")
    F = g.field
    x = UPoly.monomial(F, 1, 1, g.var)
    # Restrict to the product of the distinct linear factors: gcd(g, x^|F| - x).
    split = g.gcd(x.powmod(F.order, g) - x) if g.degree() > 0 else g
    return sorted(_split_linear(split, F), key=lambda r: r.to_int())


def _split_linear(g: UPoly, F: FiniteField) -> list[FieldElement]:
    d = g.degree()
    if d <= 0:
        return []
    g = g.monic()
    if d == 1:
        return [-g.coefficient(0)]
    x = UPoly.monomial(F, 1, 1, g.var)
    for delta in F.elements():
        probe = x + delta
        if F.p != 2:
            h = probe.powmod((F.order - 1) // 2, g) - 1
        else:
            # Absolute trace to F_2 of (delta * x) splits squarefree products of linears.
            t = x * delta if not delta.is_zero() else x
            h = UPoly(F, {}, g.var)
            term = t % g
            for _ in range(F.m):
                h = h + term
                term = (term * term) % g
        f1 = g.gcd(h)
        if 0 < f1.degree() < d:
            return _split_linear(f1, F) + _split_linear(g.exact_div(f1), F)
    raise AssertionError("equal-degree splitting failed")


def from_coefficients(field: FiniteField, coeffs: Iterable, var: str = "x") -> UPoly:
    return UPoly(field, {i: field(c) for i, c in enumerate(coeffs)}, var)
