"""Dense linear algebra over finite fields and generic matrix helpers.

Matrices are tuples of row tuples.  Field routines need ``/``; the generic
product, determinant and twist helpers only need ring operations, so they
also serve polynomial and fraction entries.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from .errors import PreconditionError, SingularMatrixError
from .field import FieldElement, FiniteField

Matrix = tuple  # tuple[tuple[element, ...], ...]


def as_matrix(rows) -> Matrix:
    rows = tuple(tuple(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise PreconditionError("ragged matrix")
    return rows


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int, zero, one) -> Matrix:
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    if shape(A)[1] != shape(B)[0]:
        raise PreconditionError(f"cannot multiply {shape(A)} by {shape(B)}")
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = None
            for a, b in zip(row, col):
                t = a * b
                acc = t if acc is None else acc + t
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(A: Matrix, v: Sequence) -> tuple:
    if shape(A)[1] != len(v):
        raise PreconditionError(f"dimension mismatch: {shape(A)} times vector of length {len(v)}")
    out = []
    for row in A:
        acc = None
        for a, b in zip(row, v):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return tuple(out)


def twist(A: Matrix, e: int) -> Matrix:
    """Entrywise p^e-th power A^[p^e]."""
    return tuple(tuple(a.frob(e) for a in row) for row in A)


def det_generic(A: Matrix):
    """Leibniz expansion; fine for the small matrices used here over any commutative ring."""
    n = len(A)
    if n == 0:
        raise PreconditionError("empty matrix")
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = None
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        term = A[0][perm[0]]
        for i in range(1, n):
            term = term * A[i][perm[i]]
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def adjugate(A: Matrix) -> Matrix:
    n = len(A)
    if n == 1:
        return ((A[0][0] * 0 + 1,),)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(tuple(A[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            d = det_generic(minor)
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return tuple(tuple(r) for r in out)


# -- field routines --

def rref(A: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field, and the pivot columns."""
    M = [list(r) for r in A]
    rows, cols = shape(A)
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not M[i][c].is_zero()), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def kernel(A: Matrix, field: FiniteField) -> list[tuple]:
    """Basis of {v : A v = 0}, one vector per free column, in column order."""
    rows, cols = shape(A)
    if rows == 0:
        return [tuple(field.one if i == j else field.zero for i in range(cols)) for j in range(cols)]
    M, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * cols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -M[r][fc]
        basis.append(tuple(v))
    return basis


def inverse(A: Matrix, field: FiniteField) -> Matrix:
    n = len(A)
    aug = [list(row) + list(idrow) for row, idrow in zip(A, identity(n, field.zero, field.one))]
    M, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(r[n:]) for r in M)


def mat_pow(A: Matrix, k: int, field: FiniteField) -> Matrix:
    out = identity(len(A), field.zero, field.one)
    base = A
    while k:
        if k & 1:
            out = mat_mul(out, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return out


def is_zero_matrix(A: Matrix) -> bool:
    return all(x.is_zero() for row in A for x in row)


def lift_int_matrix(rows, field: FiniteField) -> Matrix:
    return tuple(tuple(field(int(x)) for x in r) for r in rows)


def lower_int_matrix(A: Matrix) -> tuple:
    return tuple(tuple(int(x) for x in r) for r in A)


def normalize_vector(v: Sequence[FieldElement]) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    lead = next((x for x in v if not x.is_zero()), None)
    if lead is None:
        return tuple(v)
    inv = lead.inverse()
    return tuple(x * inv for x in v)
