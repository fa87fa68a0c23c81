"""Independent reference computations used to cross-check fsing.

Nothing here calls the Groebner engine or fsing's linear algebra.
"""

import itertools
import random
from math import comb, factorial


def _monomials_of_degree(n, d):
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def la_membership(f_terms, gens_terms, n, p):
    """f in (gens) for homogeneous data, by linear algebra in the degree of f.

    Each argument is a dict exponent -> coefficient.
    """
    if not f_terms:
        return True
    D = sum(next(iter(f_terms)))
    cols = list(_monomials_of_degree(n, D))
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for g in gens_terms:
        dg = sum(next(iter(g)))
        if dg > D:
            continue
        for m in _monomials_of_degree(n, D - dg):
            row = [0] * len(cols)
            for e, c in g.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c % p
            rows.append(row)
    target = [0] * len(cols)
    for e, c in f_terms.items():
        target[index[e]] = c % p
    if not rows:
        return not any(target)
    return _rank_mod_p(rows, p) == _rank_mod_p(rows + [target], p)


def minimal_monomials(mons):
    mons = set(mons)
    return {m for m in mons
            if not any(o != m and all(a <= b for a, b in zip(o, m)) for o in mons)}


def monomial_colon(I, J):
    """Minimal generators of (I : J) for monomial ideals given by exponent tuples."""
    result = None
    for n in J:
        part = minimal_monomials(tuple(max(a - b, 0) for a, b in zip(m, n)) for m in I)
        if result is None:
            result = part
        else:
            result = minimal_monomials(tuple(max(a, b) for a, b in zip(u, v)) for u in result for v in part)
    return result


def random_monomials(rng: random.Random, n, k, max_exp):
    return [tuple(rng.randint(0, max_exp) for _ in range(n)) for _ in range(k)]


def fermat_frobenius_matrix(d, n, p, basis_exponents):
    """F on degree-zero classes of y_1^d + ... + y_{n-1}^d - y_n^d, by multinomial expansion.

    Uses y_n^d = sum_{j<n} y_j^d, so y_n^(dQ+R) = y_n^R * (sum y_j^d)^Q, and a
    fraction survives only if every y_j exponent stays below its denominator.
    Returns (matrix, list of columns as dicts) in the order of basis_exponents,
    each given as (i_1, ..., i_n).
    """
    index = {tuple(i): k for k, i in enumerate(basis_exponents)}
    dim = len(basis_exponents)
    M = [[0] * dim for _ in range(dim)]
    for col, i in enumerate(basis_exponents):
        k = p * (d - i[-1])
        Q, R = divmod(k, d)
        dens = [p * x for x in i[:-1]]
        for ks in _compositions(Q, n - 1):
            if any(d * kj >= den for kj, den in zip(ks, dens)):
                continue
            coeff = factorial(Q)
            for kj in ks:
                coeff //= factorial(kj)
            new = tuple(den - d * kj for kj, den in zip(ks, dens)) + (d - R,)
            M[index[new]][col] = (M[index[new]][col] + coeff) % p
    return M


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def fermat_formula(d, p, i):
    r = (p - 1) // d
    num = factorial(r * (d - i[-1]))
    den = 1
    for x in i[:-1]:
        den *= factorial(r * x)
    return (num // den) % p


def binomial_mod(n, k, p):
    return comb(n, k) % p


def brute_fixed_vectors(A, apply_twist, field, n):
    """All v in field^n with A * twist(v) = v."""
    elems = list(field.elements())
    out = []
    for v in itertools.product(elems, repeat=n):
        tv = [apply_twist(x) for x in v]
        w = []
        for row in A:
            acc = field.zero
            for a, b in zip(row, tv):
                acc = acc + a * b
            w.append(acc)
        if tuple(w) == tuple(v):
            out.append(tuple(v))
    return sorted(out, key=lambda v: tuple(x.to_int() for x in v))
