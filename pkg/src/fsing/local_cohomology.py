"""Top local cohomology of a graded hypersurface A = R/(f) through Cech fractions.

With f monic (up to a unit) in the last variable y_n, A is free over
k[y_1..y_{n-1}] on 1, y_n, ..., y_n^(d-1).  So H^(n-1)_m(A) has the k-basis
of single fractions y_n^k / (y_1^b_1 ... y_{n-1}^b_{n-1}) with k < d and
every b_j >= 1; a fraction whose numerator exponent reaches its denominator
exponent in any y_j is zero.  A class is stored as a map (k, b) -> coeff.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial

from .errors import NotMonicError, PreconditionError
from .field import prime_field
from .frobenius_ideals import bracket_power, is_rf_submodule
from .groebner import Ideal, ideal_quotient, is_zero_dimensional
from .linalg import (
    is_zero_matrix,
    kernel,
    lift_int_matrix,
    mat_pow,
    normalize_vector,
    rank,
)
from .polynomial import Polynomial, monomial_text, to_text

SIMPLE = "SIMPLE"
NOT_SIMPLE = "NOT_SIMPLE"
INCONCLUSIVE = "INCONCLUSIVE"


class GradedHypersurface:
    """A = k[y_1..y_n]/(f), f homogeneous of degree d containing c*y_n^d with c != 0."""

    def __init__(self, f: Polynomial):
        ring = f.ring
        if not ring.standard_grading:
            raise PreconditionError("local cohomology is implemented for the standard grading only")
        if ring.nvars < 2:
            raise PreconditionError("need at least two variables")
        if f.is_zero() or f.is_constant():
            raise PreconditionError("f must be a non-constant polynomial")
        if not f.is_homogeneous():
            raise PreconditionError(f"{f} is not homogeneous")
        n, d = ring.nvars, f.weighted_degree()
        lead = (0,) * (n - 1) + (d,)
        c = f.coefficient_of(lead)
        if not c:
            last = ring.variables[-1]
            raise NotMonicError(
                f"{f} has no {last}^{d} term; reorder the variables so that the last one "
                f"appears to the full degree")
        self.f = f
        self.ring = ring
        self.p = ring.p
        self.n = n
        self.d = d
        p = ring.p
        inv = pow(c, -1, p)
        # y_n^d == sum of tail terms modulo f
        self._tail = [(e[-1], e[:-1], (-v * inv) % p) for e, v in f.terms.items() if e != lead]

    @property
    def a_invariant(self) -> int:
        return self.d - self.n

    @cached_property
    def jacobian_zero_dimensional(self) -> bool:
        """Isolated singularity at the irrelevant ideal: (df/dy_1, ..., df/dy_n, f) is m-primary."""
        J = Ideal(self.ring, [self.f.derivative(i) for i in range(self.n)] + [self.f])
        return is_zero_dimensional(J)

    def __eq__(self, other):
        return isinstance(other, GradedHypersurface) and self.f == other.f

    def __hash__(self):
        return hash(self.f)

    def __repr__(self):
        return f"GradedHypersurface({self.f})"

    # -- Cech reduction --

    def _reduce(self, items) -> dict:
        """items: iterable of (k, b, c) with b possibly non-positive; returns canonical terms."""
        p, d = self.p, self.d
        pending: dict = {}
        heap = []
        for k, b, c in items:
            if c % p and all(x > 0 for x in b):
                key = (k, b)
                if key not in pending:
                    heapq.heappush(heap, (-k, b))
                    pending[key] = 0
                pending[key] = (pending[key] + c) % p
        out = {}
        while heap:
            negk, b = heapq.heappop(heap)
            k = -negk
            c = pending.pop((k, b), 0)
            if not c:
                continue
            if k < d:
                out[(k, b)] = (out.get((k, b), 0) + c) % p
                continue
            for kk, aa, cc in self._tail:
                nb = tuple(x - y for x, y in zip(b, aa))
                if any(x <= 0 for x in nb):
                    continue
                key = (k - d + kk, nb)
                if key not in pending:
                    heapq.heappush(heap, (-key[0], nb))
                    pending[key] = 0
                pending[key] = (pending[key] + c * cc) % p
        return {key: c for key, c in out.items() if c}

    def cech_class(self, numerator: Polynomial, denominator_exponents) -> "CechClass":
        """The class of numerator / (y_1^i_1 ... y_{n-1}^i_{n-1})."""
        if numerator.ring != self.ring:
            raise PreconditionError("numerator lives in a different ring")
        den = tuple(int(x) for x in denominator_exponents)
        if len(den) != self.n - 1 or any(x < 1 for x in den):
            raise PreconditionError(f"need {self.n - 1} denominator exponents >= 1, got {den}")
        items = ((e[-1], tuple(i - a for i, a in zip(den, e[:-1])), c) for e, c in numerator.terms.items())
        return CechClass(self, _freeze(self._reduce(items)))


def _freeze(terms: dict) -> tuple:
    return tuple(sorted(terms.items()))


@dataclass(frozen=True)
class CechClass:
    hypersurface: GradedHypersurface = field(repr=False)
    terms: tuple  # sorted ((k, b), coeff) pairs

    @property
    def p(self):
        return self.hypersurface.p

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> set:
        return {k - sum(b) for (k, b), _ in self.terms}

    @property
    def degree(self) -> int | None:
        """Graded degree, or None for the zero class (and for mixed-degree sums)."""
        ds = self.degrees
        return ds.pop() if len(ds) == 1 else None

    @property
    def denominator_exponents(self) -> tuple:
        n = self.hypersurface.n
        if not self.terms:
            return (1,) * (n - 1)
        return tuple(max(b[j] for (_, b), _ in self.terms) for j in range(n - 1))

    @property
    def numerator(self) -> Polynomial:
        H = self.hypersurface
        B = self.denominator_exponents
        out = {}
        for (k, b), c in self.terms:
            out[tuple(x - y for x, y in zip(B, b)) + (k,)] = c
        return Polynomial(H.ring, out)

    def _combine(self, other: "CechClass", sign: int) -> "CechClass":
        if other.hypersurface != self.hypersurface:
            raise PreconditionError("classes of different hypersurfaces")
        p = self.p
        out = dict(self.terms)
        for key, c in other.terms:
            out[key] = (out.get(key, 0) + sign * c) % p
        return CechClass(self.hypersurface, _freeze({k: v for k, v in out.items() if v}))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c: int) -> "CechClass":
        p = self.p
        return CechClass(self.hypersurface, _freeze({k: v * c % p for k, v in self.terms if v * c % p}))

    def __str__(self):
        if not self.terms:
            return "0"
        num = to_text(self.numerator)
        if len(self.terms) > 1:
            num = f"({num})"
        H = self.hypersurface
        den = monomial_text(self.denominator_exponents, H.ring.variables[:-1])
        return f"{num} / {den}"


def frobenius_on_class(H: GradedHypersurface, c: CechClass, e: int = 1) -> CechClass:
    """F^e on a class: numerator to the p^e, denominators times p^e, then reduce and prune."""
    q = H.p**e
    items = ((q * k, tuple(q * x for x in b), v) for (k, b), v in c.terms)
    return CechClass(H, _freeze(H._reduce(items)))


def _monomials_of_degree(n: int, deg: int):
    for combo in itertools.combinations_with_replacement(range(n), deg):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def degree_zero_monomials(H: GradedHypersurface) -> list[tuple]:
    """Exponent vectors s of degree d - n, in descending order of the ring's monomial order."""
    if H.d < H.n:
        return []
    mons = list(_monomials_of_degree(H.n, H.d - H.n))
    key = H.ring.order.key
    return sorted(mons, key=key, reverse=True)


def degree_zero_basis(H: GradedHypersurface) -> list[CechClass]:
    """e_s = y_n^(d-1) / (y_1 ... y_{n-1}) * s^(-1) = y_n^(d-i_n) / prod y_j^(i_j), i = s + 1."""
    out = []
    for s in degree_zero_monomials(H):
        i = tuple(x + 1 for x in s)
        out.append(CechClass(H, (((H.d - i[-1], i[:-1]), 1),)))
    return out


def basis_exponents(cls: CechClass) -> tuple:
    """(i_1, ..., i_n) of a single-fraction class y_n^(d-i_n) / prod y_j^(i_j)."""
    if len(cls.terms) != 1:
        raise PreconditionError(f"{cls} is not a single fraction")
    (k, b), _ = cls.terms[0]
    return tuple(b) + (cls.hypersurface.d - k,)


def frobenius_matrix_degree_zero(H: GradedHypersurface) -> tuple:
    """Matrix over F_p whose column s holds the coordinates of F(e_s) in the basis."""
    basis = degree_zero_basis(H)
    if not basis:
        raise PreconditionError("the degree-zero part is zero (d < n)")
    index = {cls.terms[0][0]: j for j, cls in enumerate(basis)}
    dim = len(basis)
    M = [[0] * dim for _ in range(dim)]
    for col, cls in enumerate(basis):
        image = frobenius_on_class(H, cls)
        for key, c in image.terms:
            M[index[key]][col] = c
    return tuple(tuple(r) for r in M)


def fermat_frobenius_coefficient(d: int, p: int, exponents) -> int:
    """(r(d-i_n))! / prod_{j<n} (r i_j)! mod p with r = (p-1)/d, for p = 1 mod d."""
    if (p - 1) % d:
        raise PreconditionError(f"p = {p} is not 1 mod {d}")
    r = (p - 1) // d
    *lower, i_n = exponents
    num = factorial(r * (d - i_n))
    den = 1
    for i in lower:
        den *= factorial(r * i)
    return (num // den) % p


@dataclass(frozen=True)
class NilpotencyRecord:
    dimension: int
    nilpotent: bool
    order: int | None
    injective: bool
    f_reduced_dimension: int
    positive_degree_nilpotent: bool = True

    @property
    def kind(self) -> str:
        if self.dimension == 0 or self.nilpotent:
            return "nilpotent"
        if self.injective:
            return "injective"
        return "mixed"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dimension": self.dimension,
            "nilpotent": self.nilpotent,
            "order": self.order,
            "injective": self.injective,
            "f_reduced_dimension": self.f_reduced_dimension,
            "positive_degree_nilpotent": self.positive_degree_nilpotent,
        }


def nilpotency_of(M, p: int) -> NilpotencyRecord:
    """Semilinear powers of a matrix over F_p are ordinary powers."""
    dim = len(M)
    if dim == 0:
        return NilpotencyRecord(0, True, 0, True, 0)
    F = prime_field(p)
    A = lift_int_matrix(M, F)
    P = A
    order = None
    for k in range(1, dim + 1):
        if is_zero_matrix(P):
            order = k
            break
        P = tuple(tuple(x for x in r) for r in _mul(P, A))
    stable = mat_pow(A, dim, F)
    red = rank(stable)
    return NilpotencyRecord(dim, order is not None, order, rank(A) == dim, red)


def _mul(A, B):
    from .linalg import mat_mul

    return mat_mul(A, B)


def star_zero_analysis(H: GradedHypersurface) -> NilpotencyRecord:
    """Nilpotency of F on the degree >= 0 part, taken as the tight closure of zero.

    Positive degrees are always nilpotent (F multiplies degree by p and the
    top degree is the a-invariant), so only the degree-zero matrix decides.
    """
    if not degree_zero_basis(H):
        return NilpotencyRecord(0, True, 0, True, 0)
    return nilpotency_of(frobenius_matrix_degree_zero(H), H.p)


@dataclass(frozen=True)
class SocleLine:
    cls: CechClass
    eigencoefficient: int
    annihilator: Ideal
    parameter_ideal: Ideal | None
    annihilator_verified: bool | None
    rf_submodule: bool

    @property
    def exponents(self) -> tuple | None:
        return basis_exponents(self.cls) if len(self.cls.terms) == 1 else None

    def to_dict(self) -> dict:
        return {
            "class": str(self.cls),
            "eigencoefficient": self.eigencoefficient,
            "annihilator": [str(g) for g in self.annihilator.groebner().elements],
            "parameter_ideal": ([str(g) for g in self.parameter_ideal.generators]
                                if self.parameter_ideal is not None else None),
            "annihilator_verified": self.annihilator_verified,
            "rf_submodule": self.rf_submodule,
        }


def annihilator(H: GradedHypersurface, cls: CechClass) -> Ideal:
    """Ann_R of num / y'^i, i.e. ((y_1^i_1, ..., y_{n-1}^i_{n-1}) + (f)) : num."""
    ring = H.ring
    if cls.is_zero():
        return Ideal(ring, [ring.one()])
    den = cls.denominator_exponents
    gens = [ring.monomial(tuple(den[j] if k == j else 0 for k in range(H.n))) for j in range(H.n - 1)]
    return ideal_quotient(Ideal(ring, gens + [H.f]), cls.numerator)


def parameter_ideal(H: GradedHypersurface, exponents) -> Ideal:
    ring = H.ring
    return Ideal(ring, [ring.monomial(tuple(a if k == j else 0 for k in range(H.n)))
                        for j, a in enumerate(exponents)])


def _stable_lines(H: GradedHypersurface, M) -> list[tuple[CechClass, int]]:
    basis = degree_zero_basis(H)
    dim = len(basis)
    diagonal = all(M[i][j] == 0 for i in range(dim) for j in range(dim) if i != j)
    if diagonal:
        return [(basis[i], M[i][i]) for i in range(dim) if M[i][i]]
    F = prime_field(H.p)
    out = []
    for lam in range(1, H.p):
        shifted = tuple(tuple(F(M[i][j] - (lam if i == j else 0)) for j in range(dim)) for i in range(dim))
        for v in kernel(shifted, F):
            v = normalize_vector(v)
            cls = CechClass(H, ())
            for coeff, b in zip(v, basis):
                if not coeff.is_zero():
                    cls = cls + b.scale(int(coeff))
            out.append((cls, lam))
    return out


def socle_line_data(H: GradedHypersurface) -> list[SocleLine]:
    """F-stable degree-zero lines with nonzero eigencoefficient and their annihilators."""
    if not degree_zero_basis(H):
        return []
    M = frobenius_matrix_degree_zero(H)
    I = Ideal(H.ring, [H.f])
    lines = []
    for cls, c in _stable_lines(H, M):
        ann = annihilator(H, cls)
        tau = None
        verified = None
        if len(cls.terms) == 1:
            tau = parameter_ideal(H, basis_exponents(cls))
            verified = ann.equals(tau)
        lines.append(SocleLine(cls, c, ann, tau, verified, is_rf_submodule(ann, I, 1)))
    return lines


def square_commutes(f: Polynomial, tau: Ideal, c: int, witness: Polynomial) -> bool:
    """f^(p-1) == c * witness^(p-1) modulo tau^[p]."""
    p = f.ring.p
    diff = f ** (p - 1) - (witness ** (p - 1)).scale(c)
    return bracket_power(tau, 1).contains(diff)


def dual_square_check(H: GradedHypersurface, line: SocleLine) -> bool:
    """Dual witness that R e_s is F-stable: f^(p-1) == c_s (y^i)^(p-1) mod tau_s^[p]."""
    if not line.eigencoefficient:
        raise PreconditionError("dual square needs a nonzero eigencoefficient")
    if line.parameter_ideal is None:
        raise PreconditionError("dual square needs a single-fraction socle class")
    i = line.exponents
    return square_commutes(H.f, line.parameter_ideal, line.eigencoefficient, H.ring.monomial(i))


def is_frobenius_stable(H: GradedHypersurface, cls: CechClass) -> bool:
    """F(cls) lies in k * cls (degree-zero R-span of cls)."""
    image = frobenius_on_class(H, cls)
    if image.is_zero():
        return True
    if {k for k, _ in image.terms} != {k for k, _ in cls.terms}:
        return False
    (k0, c0), = cls.terms[:1]
    p = H.p
    lam = dict(image.terms)[k0] * pow(c0, -1, p) % p
    return image == cls.scale(lam)


@dataclass(frozen=True)
class SimplicityReport:
    f: str
    p: int
    n: int
    d: int
    a_invariant: int
    degree_zero_dimension: int
    basis: tuple
    frobenius_matrix: tuple
    nilpotency: NilpotencyRecord
    verdict: str
    isolated_singularity: bool
    hara_large_p_assumed: bool
    socle_lines: tuple
    experimental_grading: bool = False

    def to_dict(self) -> dict:
        return {
            "f": self.f,
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "a_invariant": self.a_invariant,
            "degree_zero_dimension": self.degree_zero_dimension,
            "basis": list(self.basis),
            "frobenius_matrix": [list(r) for r in self.frobenius_matrix],
            "nilpotency": self.nilpotency.to_dict(),
            "verdict": self.verdict,
            "hypotheses": {
                "isolated_singularity": self.isolated_singularity,
                "hara_large_p_assumed": self.hara_large_p_assumed,
            },
            "socle_lines": [s.to_dict() for s in self.socle_lines],
        }


def d_simplicity_verdict(H: GradedHypersurface, with_socle: bool = True) -> SimplicityReport:
    """SIMPLE iff the degree >= 0 part is F-nilpotent (hypotheses holding).

    The identification of the tight closure of zero with the degree >= 0
    part needs p large (Hara); the report always carries that assumption.
    """
    isolated = H.jacobian_zero_dimensional
    basis = degree_zero_basis(H)
    M = frobenius_matrix_degree_zero(H) if basis else ()
    record = nilpotency_of(M, H.p) if basis else NilpotencyRecord(0, True, 0, True, 0)
    if not isolated:
        verdict = INCONCLUSIVE
    elif record.nilpotent:
        verdict = SIMPLE
    elif record.f_reduced_dimension > 0:
        verdict = NOT_SIMPLE
    else:
        verdict = INCONCLUSIVE
    lines = tuple(socle_line_data(H)) if (with_socle and basis and isolated and not record.nilpotent) else ()
    return SimplicityReport(
        f=str(H.f), p=H.p, n=H.n, d=H.d, a_invariant=H.a_invariant,
        degree_zero_dimension=len(basis), basis=tuple(str(b) for b in basis),
        frobenius_matrix=M, nilpotency=record, verdict=verdict,
        isolated_singularity=isolated, hara_large_p_assumed=True, socle_lines=lines,
    )


def degree_zero_dimension_formula(d: int, n: int) -> int:
    return comb(d - 1, n - 1) if d >= n else 0
