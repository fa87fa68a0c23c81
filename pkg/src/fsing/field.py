"""Exact arithmetic in F_p and F_{p^m}.

Elements of F_{p^m} are coefficient vectors over F_p modulo a fixed monic
irreducible of degree m.  The irreducible is picked deterministically by
:func:`find_irreducible` so that serialized output is reproducible.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import FieldMismatchError, PreconditionError

_MAX_P = 2**64

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool):
        raise PreconditionError(f"characteristic must be an integer, got {p!r}")
    if p >= _MAX_P:
        raise PreconditionError(f"characteristic {p} does not fit in 64 bits")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    return p


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e; raise if q is not a prime power."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise PreconditionError(f"{q} is not a prime power")
            return p, e
    raise AssertionError("unreachable")


# -- dense univariate helpers over F_p (coefficient lists, low degree first) --

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Monic polys of the given degree, in increasing integer encoding."""
    for low in range(p**degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(low % p)
            low //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial factorization by every monic poly of degree <= deg/2."""
    poly = _trim([c % p for c in poly])
    m = len(poly) - 1
    if m < 1:
        return False
    for k in range(1, m // 2 + 1):
        for g in _monic_polys(p, k):
            if not _pmod(poly, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over F_p.

    Coefficients are returned low degree first; "smallest" means the least
    integer value of sum(c_i p^i) over the non-leading coefficients.
    """
    check_prime(p)
    if m < 1:
        raise PreconditionError(f"extension degree must be >= 1, got {m}")
    for cand in _monic_polys(p, m):
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible of degree {m} over F_{p}")


class FiniteField:
    """The field F_{p^m} = F_p[a]/(modulus)."""

    __slots__ = ("p", "m", "modulus", "gen_name", "order", "_key")

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None,
                 gen_name: str = "a"):
        check_prime(p)
        if m < 1:
            raise PreconditionError(f"extension degree must be >= 1, got {m}")
        if modulus is None:
            modulus = find_irreducible(p, m)
        else:
            modulus = tuple(_trim([c % p for c in modulus]))
            if len(modulus) - 1 != m:
                raise PreconditionError(f"modulus has degree {len(modulus) - 1}, expected {m}")
            if modulus[-1] != 1:
                inv = pow(modulus[-1], -1, p)
                modulus = tuple(c * inv % p for c in modulus)
            if not is_irreducible(modulus, p):
                raise PreconditionError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.gen_name = gen_name
        self.order = p**m
        self._key = (p, m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.m == 1:
            return f"FiniteField({self.p})"
        return f"FiniteField({self.p}, {self.m}, modulus={self.modulus})"

    def __str__(self):
        return f"F_{self.order}"

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value!r} is not an element of {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.m - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            coeffs = _pmod(coeffs, self.modulus, self.p)
        coeffs += [0] * (self.m - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        if self.m == 1:
            # F_p is generated by 1 over itself; the "generator" is the root of x.
            return self(-self.modulus[0])
        return self((0, 1))

    def from_int(self, n: int) -> "FieldElement":
        """Inverse of :meth:`FieldElement.to_int` (base-p digits as coefficients)."""
        coeffs = []
        for _ in range(self.m):
            coeffs.append(n % self.p)
            n //= self.p
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in increasing :meth:`FieldElement.to_int` order."""
        for n in range(self.order):
            yield self.from_int(n)

    def nonzero_elements(self) -> Iterator["FieldElement"]:
        for n in range(1, self.order):
            yield self.from_int(n)

    def random_element(self, rng) -> "FieldElement":
        return self.from_int(rng.randrange(self.order))

    def contains_subfield(self, other: "FiniteField") -> bool:
        return other.p == self.p and self.m % other.m == 0

    def embedding_from(self, small: "FiniteField"):
        """Return a map small -> self sending the generator to the least root of its modulus."""
        if not self.contains_subfield(small):
            raise FieldMismatchError(f"{small} does not embed in {self}")
        if small == self:
            return lambda x: x
        if small.m == 1:
            return lambda x: self(x.coeffs[0])
        image = _least_root(small.modulus, self)
        powers = [self.one]
        for _ in range(small.m - 1):
            powers.append(powers[-1] * image)

        def embed(x: FieldElement) -> FieldElement:
            if x.field != small:
                raise FieldMismatchError(f"{x!r} is not an element of {small}")
            acc = self.zero
            for c, pw in zip(x.coeffs, powers):
                if c:
                    acc = acc + pw * c
            return acc

        return embed


def _least_root(poly: Sequence[int], field: FiniteField) -> "FieldElement":
    from .univariate import UPoly, roots_in_field

    g = UPoly(field, {i: field(c) for i, c in enumerate(poly) if c % field.p})
    roots = roots_in_field(g)
    if not roots:
        raise FieldMismatchError(f"{poly} has no root in {field}")
    return min(roots, key=lambda r: r.to_int())


class FieldElement:
    """Immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        F = self.field
        p = F.p
        if F.m == 1:
            return FieldElement(F, (self.coeffs[0] * other.coeffs[0] % p,))
        prod = [0] * (2 * F.m - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return F(prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in {self.field}")
        if self.field.m == 1:
            return FieldElement(self.field, (pow(self.coeffs[0], -1, self.field.p),))
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        F = self.field
        if n < 0:
            return self.inverse() ** (-n)
        if F.m == 1:
            return FieldElement(F, (pow(self.coeffs[0], n, F.p),))
        if self.is_zero():
            return F.one if n == 0 else F.zero
        n %= F.order - 1
        acc = F.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def frobenius(self, e: int = 1) -> "FieldElement":
        """a -> a^(p^e)."""
        F = self.field
        if F.m == 1:
            return self
        e %= F.m
        return self ** (F.p**e) if e else self

    # Matrix code twists entries uniformly through .frob(e).
    frob = frobenius

    def pth_root(self) -> "FieldElement":
        """The unique b with b^p = a, computed as a^(p^(m-1))."""
        F = self.field
        if F.m == 1:
            return self
        return self ** (F.p ** (F.m - 1))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def to_int(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    def __int__(self):
        if self.field.m != 1:
            raise TypeError(f"{self!r} is not in the prime field")
        return self.coeffs[0]

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self.coeffs == self.field(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self.field.m == 1:
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def __str__(self):
        if self.field.m == 1:
            return str(self.coeffs[0])
        g = self.field.gen_name
        parts = []
        for i in range(self.field.m - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = g if i == 1 else f"{g}^{i}"
                parts.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FieldElement({self}, {self.field})"


@lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)


def all_vectors(field: FiniteField, n: int) -> Iterator[tuple[FieldElement, ...]]:
    """Every vector of F^n, lexicographic in element order."""
    elems = list(field.elements())
    return itertools.product(elems, repeat=n)
