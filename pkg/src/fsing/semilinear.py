"""Frobenius structures on free modules as semilinear maps v -> A * v^[q].

Coefficients live either in a finite field or in K[u] with u = x^(1/p^t),
a finite-depth truncation of the perfection of K[x].  Over K[u] the map
x -> x^q only rescales exponents, so twisted products stay sparse.
"""

from __future__ import annotations

import itertools
from math import gcd
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    BoundExhaustedError,
    BudgetExceededError,
    FsingError,
    PreconditionError,
    SingularMatrixError,
)
from .field import FieldElement, FiniteField, is_irreducible, prime_field, prime_power
from .linalg import (
    adjugate,
    as_matrix,
    det_generic,
    inverse,
    kernel,
    mat_mul,
    mat_vec,
    rank,
    twist,
)
from .univariate import RatFunc, UPoly

SUBSPACE_LIMIT = 10**6


@dataclass(frozen=True)
class TwistedDomain:
    """K[u] with u = x^(1/p^t); at depth 0 the variable is printed as x itself."""

    field: FiniteField
    depth: int = 0

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def var(self) -> str:
        return "x" if self.depth == 0 else "u"

    def x(self) -> UPoly:
        return UPoly.monomial(self.field, self.field.p**self.depth, 1, self.var)

    def const(self, c) -> UPoly:
        return UPoly.constant(self.field, c, self.var)

    def __call__(self, value):
        if isinstance(value, UPoly):
            return value
        return self.const(value)

    @property
    def zero(self):
        return self.const(0)

    @property
    def one(self):
        return self.const(1)

    def __str__(self):
        if self.depth == 0:
            return f"{self.field}[x]"
        return f"{self.field}[u], u = x^(1/{self.field.p}^{self.depth})"



def _base_field(domain) -> FiniteField:
    return domain if isinstance(domain, FiniteField) else domain.field


def _entry_text(a) -> str:
    if isinstance(a, (UPoly, RatFunc)):
        return a.to_text(compact=True)
    return str(a)


def matrix_text(A) -> str:
    return "[" + "; ".join(", ".join(_entry_text(a) for a in row) for row in A) + "]"


def matrix_json(A) -> list:
    return [[_entry_text(a) for a in row] for row in A]


def twist_vector(v: Sequence, e: int) -> tuple:
    return tuple(a.frob(e) for a in v)


@dataclass(frozen=True)
class SemilinearMap:
    """v -> A * v^[q] with q = p^e."""

    A: tuple
    e: int
    domain: object
    basis_tag: str = "standard"

    def __post_init__(self):
        A = as_matrix(self.A)
        if not A or len(A) != len(A[0]):
            raise PreconditionError("a semilinear map needs a square, nonempty matrix")
        if self.e < 1:
            raise PreconditionError(f"twist power must be >= 1, got {self.e}")
        object.__setattr__(self, "A", A)

    @property
    def p(self) -> int:
        return self.domain.p

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def n(self) -> int:
        return len(self.A)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.n:
            raise PreconditionError(f"vector of length {len(v)} for a {self.n}x{self.n} map")
        return mat_vec(self.A, twist_vector(v, self.e))

    __call__ = apply

    def iterate_matrix(self, r: int) -> tuple:
        """A_r = A * A^[q] * ... * A^[q^(r-1)], the matrix of the r-th iterate."""
        if r < 1:
            raise PreconditionError(f"r must be >= 1, got {r}")
        out = self.A
        for i in range(1, r):
            out = mat_mul(out, twist(self.A, self.e * i))
        return out

    def iterate(self, r: int) -> "SemilinearMap":
        return SemilinearMap(self.iterate_matrix(r), self.e * r, self.domain, f"{self.basis_tag}^{r}")

    def determinant(self):
        return det_generic(self.A)

    def base_change(self, C, tag: str = "changed") -> "SemilinearMap":
        """C^-1 * A * C^[q]: the same map in the basis given by the columns of C."""
        return SemilinearMap(base_change_matrix(self.A, C, self.e, self.domain), self.e, self.domain, tag)

    def __str__(self):
        return matrix_text(self.A)


def base_change_matrix(A, C, e: int, domain) -> tuple:
    C = as_matrix(C)
    if len(C) != len(A) or len(C[0]) != len(A):
        raise PreconditionError("change-of-basis matrix has the wrong size")
    twisted = twist(C, e)
    if isinstance(domain, FiniteField):
        return mat_mul(mat_mul(inverse(C, domain), A), twisted)
    det = det_generic(C)
    if det.is_zero():
        raise SingularMatrixError("change-of-basis matrix is singular")
    core = mat_mul(mat_mul(adjugate(C), A), twisted)
    if det.is_constant():
        inv = det.leading_coefficient().inverse()
        return tuple(tuple(a * inv for a in row) for row in core)
    # Non-unit determinant: the entries are fractions; kept unreduced.
    return tuple(tuple(RatFunc(a) / det for a in row) for row in core)


# -- the companion example A = [[0, 1], [1, x]] --

def companion_matrix(domain: TwistedDomain) -> tuple:
    return ((domain.zero, domain.one), (domain.one, domain.x()))


def companion_sequence(domain: TwistedDomain, q: int, r: int) -> list[UPoly]:
    """[a_-1, a_0, ..., a_r] with a_k = a_(k-2) + a_(k-1) * x^(q^(k-1))."""
    a = [domain.zero, domain.one]
    x = domain.x()
    for k in range(1, r + 1):
        a.append(a[-2] + a[-1] * x.rescale(q ** (k - 1)))
    return a


def companion_change_matrix(a: list[UPoly], q: int, r: int) -> tuple:
    """C_r = [[1, a_(r-2)^q], [0, a_(r-1)]]; a is the list from companion_sequence."""
    one = a[1]
    a_rm2, a_rm1 = a[r - 1], a[r]
    q_exp = prime_power(q)[1]
    return ((one, a_rm2.frob(q_exp)), (one * 0, a_rm1))


# -- finite-field analysis --

def _coords(x: FieldElement) -> tuple:
    return x.coeffs


def _require_field(F: SemilinearMap) -> FiniteField:
    if not isinstance(F.domain, FiniteField):
        raise PreconditionError("this operation needs a finite coefficient field")
    return F.domain


@dataclass(frozen=True)
class FixedSpace:
    """Fixed vectors of a semilinear map, an F_p-space given by a basis."""

    basis: tuple
    ambient_dim: int
    field: FiniteField = field(repr=False)

    @property
    def dimension(self) -> int:
        """Dimension over F_p."""
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.field.p ** self.dimension

    def elements(self, budget: int = 10**6) -> list[tuple]:
        if self.size > budget:
            raise BudgetExceededError(f"{self.size} fixed vectors exceed the budget {budget}")
        Fp = self.field
        zero = tuple(Fp.zero for _ in range(self.ambient_dim))
        out = []
        for combo in itertools.product(range(Fp.p), repeat=self.dimension):
            v = zero
            for c, b in zip(combo, self.basis):
                if c:
                    v = tuple(x + y * c for x, y in zip(v, b))
            out.append(v)
        return sorted(out, key=lambda v: tuple(x.to_int() for x in v))


def fixed_space(F: SemilinearMap) -> FixedSpace:
    """Solve A v^[q] = v exactly as an F_p-linear system in the coordinates of v."""
    K = _require_field(F)
    n, m, p = F.n, K.m, K.p
    Fp = prime_field(p)
    cols = []
    for j in range(n):
        for k in range(m):
            v = [K.zero] * n
            v[j] = K(tuple(1 if i == k else 0 for i in range(m)))
            image = F.apply(v)
            diff = [a - b for a, b in zip(image, v)]
            cols.append([c for x in diff for c in _coords(x)])
    L = tuple(tuple(Fp(cols[c][r]) for c in range(n * m)) for r in range(n * m))
    basis = []
    for vec in kernel(L, Fp):
        entries = [int(x) for x in vec]
        basis.append(tuple(K(tuple(entries[j * m:(j + 1) * m])) for j in range(n)))
    return FixedSpace(tuple(basis), n, K)


def fixed_vectors(F: SemilinearMap, budget: int = 10**6) -> list[tuple]:
    """Every v with A v^[q] = v, sorted by the integer codes of the coordinates."""
    return fixed_space(F).elements(budget)


def is_injective(F: SemilinearMap) -> bool:
    return not det_generic(F.A).is_zero()


def independent_subset(vectors: Sequence[tuple], n: int) -> list[tuple]:
    """Greedy K-linearly independent choice, preserving order."""
    chosen: list[tuple] = []
    for v in vectors:
        if rank(tuple(chosen + [v])) > len(chosen):
            chosen.append(v)
            if len(chosen) == n:
                break
    return chosen


@dataclass(frozen=True)
class FixedBasis:
    extension_degree: int
    field: FiniteField
    basis: tuple
    period: int | None = None  # r with A_r = I over the base field

    def verify(self, F_ext: SemilinearMap) -> bool:
        return all(F_ext.apply(v) == v for v in self.basis) and rank(self.basis) == len(self.basis)


def extend_map(F: SemilinearMap, k: int) -> SemilinearMap:
    """The same map with coefficients pushed into the degree-k extension of its field."""
    K = _require_field(F)
    if k == 1:
        return F
    L = FiniteField(K.p, K.m * k)
    embed = L.embedding_from(K)
    A = tuple(tuple(embed(a) for a in row) for row in F.A)
    return SemilinearMap(A, F.e, L, F.basis_tag)


def _twist_period(m: int, e: int, k: int) -> int:
    """Order of x -> x^(p^e) on the field of p^(m k) elements."""
    return m * k // gcd(e, m * k)


def minimal_extension_degree(F: SemilinearMap, bound: int = 4096) -> int | None:
    """Smallest k <= bound such that the degree-k extension carries a fixed basis, or None.

    On an extension where the twist has order r, a fixed basis B gives
    A = B (B^[q])^-1, so A_r = I; conversely A_r = I makes A a cocycle for a
    cyclic Galois group, which is trivial in GL_n.  Only iterates over the
    base field are needed.
    """
    K = _require_field(F)
    n, m, e = F.n, K.m, F.e
    ident = tuple(tuple(K.one if i == j else K.zero for j in range(n)) for i in range(n))
    periods = {_twist_period(m, e, k): k for k in range(bound, 0, -1)}
    hits = set()
    acc = F.A
    for r in range(1, max(periods) + 1):
        if r > 1:
            acc = mat_mul(acc, twist(F.A, e * (r - 1)))
        if r in periods and acc == ident:
            hits.add(periods[r])
    return min(hits) if hits else None


def f_fixed_basis(F: SemilinearMap, max_ext: int = 8) -> FixedBasis:
    """A basis of fixed vectors over the smallest extension that has one, if its degree is <= max_ext."""
    K = _require_field(F)
    if not is_injective(F):
        raise SingularMatrixError("a fixed basis needs an injective map (det A != 0)")
    k = minimal_extension_degree(F, max(max_ext, 64))
    if k is None or k > max_ext:
        need = f"degree {k}" if k is not None else "degree > 64"
        raise BoundExhaustedError(f"a fixed basis needs an extension of {need}, above the limit {max_ext}")
    Fk = extend_map(F, k)
    chosen = independent_subset(list(fixed_space(Fk).basis), F.n)
    if len(chosen) != F.n:
        raise FsingError(f"fixed vectors over degree {k} do not span; this is a bug")
    return FixedBasis(k, Fk.domain, tuple(chosen), _twist_period(K.m, F.e, k))


def characteristic_polynomial(A, field_: FiniteField, var: str = "t") -> UPoly:
    n = len(A)
    t = UPoly.monomial(field_, 1, 1, var)
    M = tuple(tuple((t if i == j else UPoly.constant(field_, 0, var)) - UPoly.constant(field_, A[i][j], var)
                    for j in range(n)) for i in range(n))
    return det_generic(M)


def is_irreducible_over(g: UPoly) -> bool:
    """Irreducibility over the prime field by trial division."""
    if g.field.m != 1:
        raise PreconditionError("irreducibility is tested over prime fields only")
    d = g.degree()
    return is_irreducible(tuple(int(g.coefficient(i)) for i in range(d + 1)), g.field.p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _subspaces(K: FiniteField, n: int, k: int):
    """All k-dimensional subspaces of K^n, each as its RREF row basis."""
    elems = list(K.elements())
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i in range(k) for c in range(pivots[i] + 1, n) if c not in pivots]
        for values in itertools.product(elems, repeat=len(free)):
            rows = [[K.zero] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = K.one
            for (i, c), val in zip(free, values):
                rows[i][c] = val
            yield tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class StabilityLevel:
    r: int
    simple: bool
    stable_lines: tuple
    stable_hyperplanes: int
    stable_total: int

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "simple": self.simple,
            "stable_lines": len(self.stable_lines),
            "stable_hyperplanes": self.stable_hyperplanes,
            "stable_proper_subspaces": self.stable_total,
            "lines": [[str(x) for x in v] for v in self.stable_lines],
        }


def stable_subspaces(F: SemilinearMap, r: int, limit: int = SUBSPACE_LIMIT) -> list[StabilityLevel]:
    """For r' = 1..r, the nonzero proper subspaces stable under the r'-th iterate."""
    K = _require_field(F)
    n = F.n
    total = sum(gaussian_binomial(n, k, K.order) for k in range(1, n))
    if total > limit:
        raise BudgetExceededError(f"{total} subspaces exceed the enumeration limit {limit}")
    spaces = [W for k in range(1, n) for W in _subspaces(K, n, k)]
    out = []
    for rr in range(1, r + 1):
        G = F.iterate(rr)
        lines, hyper, count = [], 0, 0
        for W in spaces:
            if all(rank(W + (G.apply(w),)) == len(W) for w in W):
                count += 1
                if len(W) == 1:
                    lines.append(W[0])
                if len(W) == n - 1:
                    hyper += 1
        lines.sort(key=lambda v: tuple(x.to_int() for x in v))
        out.append(StabilityLevel(rr, count == 0, tuple(lines), hyper, count))
    return out


# -- bounded root search in K[x^(1/p^t)] --

@dataclass(frozen=True)
class DepthRecord:
    depth: int
    surviving_degrees: tuple
    candidates: int
    solutions: tuple


@dataclass(frozen=True)
class SearchCertificate:
    equation: str
    q: int
    base_field: str
    t_max: int
    deg_max: int
    depths: tuple
    degree_obstruction: dict | None = None

    @property
    def solutions(self) -> list:
        return [s for d in self.depths for s in d.solutions]

    @property
    def found(self) -> bool:
        return bool(self.solutions)

    @property
    def candidates(self) -> int:
        return sum(d.candidates for d in self.depths)

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "q": self.q,
            "base_field": self.base_field,
            "t_max": self.t_max,
            "deg_max": self.deg_max,
            "found": self.found,
            "candidates_scanned": self.candidates,
            "depths": [
                {"t": d.depth, "surviving_degrees": list(d.surviving_degrees),
                 "candidates": d.candidates, "solutions": list(d.solutions)}
                for d in self.depths
            ],
            "degree_obstruction": self.degree_obstruction,
        }


def counterexample_equation(q: int, field_: FiniteField) -> dict[int, UPoly]:
    """alpha^(q+1) + x*alpha - 1, as {power of alpha: coefficient in K[x]}."""
    x = UPoly.monomial(field_, 1, 1, "x")
    return {q + 1: UPoly.constant(field_, 1, "x"), 1: x, 0: UPoly.constant(field_, -1, "x")}


def equation_text(eq: dict[int, UPoly]) -> str:
    parts = []
    for k in sorted(eq, reverse=True):
        c = eq[k]
        mon = "" if k == 0 else ("alpha" if k == 1 else f"alpha^{k}")
        cs = c.to_text(compact=True)
        if not mon:
            parts.append(cs)
        elif c == 1:
            parts.append(mon)
        else:
            parts.append(f"({cs})*{mon}" if len(c.terms) > 1 else f"{cs}*{mon}")
    return " + ".join(parts) if parts else "0"


def _evaluate(eq: dict[int, UPoly], alpha: UPoly) -> UPoly:
    acc = UPoly(alpha.field, {}, alpha.var)
    powers = {0: UPoly.constant(alpha.field, 1, alpha.var)}
    for k in sorted(eq):
        if k not in powers:
            powers[k] = alpha**k
        acc = acc + eq[k] * powers[k]
    return acc


def surviving_degrees(coeff_degrees: dict[int, int], deg_max: int) -> list[int]:
    """Degrees n of alpha for which the top degree of sum c_k alpha^k is attained twice."""
    out = []
    for n in range(deg_max + 1):
        tops = [dc + k * n for k, dc in coeff_degrees.items()]
        if tops.count(max(tops)) >= 2:
            out.append(n)
    return out


def counterexample_search(q: int, t_max: int, deg_max: int, equation: dict[int, UPoly] | None = None,
                          base_field: FiniteField | None = None, budget: int = 10**7) -> SearchCertificate:
    """Exhaustively look for alpha in K[x^(1/p^t)], t <= t_max, u-degree <= deg_max, with P(alpha) = 0.

    A candidate of u-degree n can only be a root when the largest of
    deg c_k + k*n is attained by two k's; all other degrees are skipped.
    """
    p, _ = prime_power(q)
    K = base_field or prime_field(p)
    if K.p != p:
        raise PreconditionError("base field has the wrong characteristic")
    eq = equation if equation is not None else counterexample_equation(q, K)
    eq = {k: c for k, c in eq.items() if not c.is_zero()}
    if not eq:
        raise PreconditionError("the zero equation has every alpha as a root")
    elems = list(K.elements())
    depths = []
    scanned = 0
    for t in range(t_max + 1):
        pt = p**t
        coeffs = {k: c.rescale(pt).with_var("u") for k, c in eq.items()}
        degs = {k: c.degree() for k, c in coeffs.items()}
        alive = surviving_degrees(degs, deg_max)
        sols = []
        count = 0
        zero = UPoly(K, {}, "u")
        if _evaluate(coeffs, zero).is_zero():
            sols.append("0")
        count += 1
        for n in alive:
            size = (K.order - 1) * K.order**n
            scanned += size
            if scanned > budget:
                raise BudgetExceededError(f"search would scan more than {budget} candidates")
            for lead in elems[1:]:
                for rest in itertools.product(elems, repeat=n):
                    terms = {i: c for i, c in enumerate(rest) if not c.is_zero()}
                    terms[n] = lead
                    alpha = UPoly._raw(K, terms, "u")
                    if _evaluate(coeffs, alpha).is_zero():
                        sols.append(alpha.to_text(compact=True))
            count += size
        depths.append(DepthRecord(t, tuple(alive), count, tuple(sols)))
    obstruction = None
    if equation is None:
        obstruction = degree_obstruction(q, t_max)
    return SearchCertificate(equation_text(eq), q, str(K), t_max, deg_max, tuple(depths), obstruction)


def degree_obstruction(q: int, t_max: int) -> dict:
    """For alpha of u-degree n at depth t, (q+1)n = p^t + n must hold; n = p^t / q."""
    p, _ = prime_power(q)
    rows = []
    for t in range(t_max + 1):
        pt = p**t
        n = pt // q if pt % q == 0 else None
        rows.append({"t": t, "integer_solution": n})
    return {"relation": "(q+1)*n = p^t + n", "depth_zero_solvable": rows[0]["integer_solution"] is not None,
            "by_depth": rows}
