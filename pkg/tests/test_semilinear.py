import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_fixed_vectors
from fsing.errors import BoundExhaustedError, BudgetExceededError, PreconditionError, SingularMatrixError
from fsing.field import FiniteField, prime_field
from fsing.linalg import det_generic, twist
from fsing.semilinear import (
    SemilinearMap,
    TwistedDomain,
    characteristic_polynomial,
    companion_change_matrix,
    companion_matrix,
    companion_sequence,
    counterexample_search,
    degree_obstruction,
    extend_map,
    f_fixed_basis,
    fixed_space,
    fixed_vectors,
    gaussian_binomial,
    is_irreducible_over,
    matrix_text,
    stable_subspaces,
    surviving_degrees,
)
from fsing.univariate import RatFunc, UPoly, roots_in_field

F3 = prime_field(3)
F5 = prime_field(5)
F9 = FiniteField(3, 2)
D3 = TwistedDomain(F3)


def companion(K, e):
    D = TwistedDomain(K)
    return SemilinearMap(companion_matrix(D), e, D), D


def upoly(K, coeffs, var="x"):
    return UPoly(K, {i: K(c) for i, c in enumerate(coeffs) if c}, var)


def fmap(K, rows, e=1):
    return SemilinearMap(tuple(tuple(K(c) for c in row) for row in rows), e, K)


def test_apply_companion():
    F, D = companion(F3, 1)
    x = D.x()
    assert F.apply((D.one, x)) == (x**3, D.one + x**4)


def test_a2_text():
    F, _ = companion(F3, 1)
    assert matrix_text(F.iterate_matrix(2)) == "[1, x^3; x, x^4+1]"


@pytest.mark.parametrize("K, e", [(F3, 1), (F9, 2)])
def test_a2_matches_closed_form(K, e):
    F, D = companion(K, e)
    q = K.p**e
    x = D.x()
    assert F.iterate_matrix(2) == ((D.one, x**q), (x, x ** (q + 1) + D.one))


@pytest.mark.parametrize("K, e", [(F3, 1), (F9, 2)])
def test_companion_recursion_degree_and_det(K, e):
    F, D = companion(K, e)
    q = K.p**e
    a = companion_sequence(D, q, 6)
    x = D.x()
    for r in range(1, 7):
        # a[k + 1] holds a_k
        assert a[r + 1] == a[r - 1] + a[r] * x ** (q ** (r - 1))
        assert a[r + 1].degree() == sum(q**i for i in range(r))
    for r in range(1, 5 if q == 3 else 4):
        assert det_generic(F.iterate_matrix(r)) == D.const((-1) ** r)


@pytest.mark.parametrize("K, e, rmax", [(F3, 1, 5), (F9, 2, 3)])
def test_companion_base_change(K, e, rmax):
    F, D = companion(K, e)
    q = K.p**e
    a = companion_sequence(D, q, rmax)
    ak = lambda k: a[k + 1]
    for r in range(1, rmax + 1):
        B = F.iterate(r).base_change(companion_change_matrix(a, q, r)).A
        assert B[0][0] == 0 and B[1][0] == 1
        assert B[0][1] == ak(r - 1) ** (q**r - 1) * (-1) ** (r - 1)
        assert B[1][1] == ak(r - 2) ** (q ** (r + 1)) + ak(r) * ak(r - 1) ** (q**r - 1)


def test_iterate_rejects_r_zero():
    F, _ = companion(F3, 1)
    with pytest.raises(PreconditionError):
        F.iterate_matrix(0)


def test_non_square_rejected():
    with pytest.raises(PreconditionError):
        SemilinearMap(((F3(1), F3(0)),), 1, F3)


small_upoly = st.lists(st.integers(0, 2), max_size=3).map(lambda cs: upoly(F3, cs))


@settings(max_examples=40, deadline=None)
@given(st.lists(small_upoly, min_size=4, max_size=4), small_upoly, small_upoly)
def test_iterate_is_composition(entries, v0, v1):
    A = ((entries[0], entries[1]), (entries[2], entries[3]))
    F = SemilinearMap(A, 1, D3)
    v = (v0, v1)
    assert F.iterate(2).apply(v) == F.apply(F.apply(v))
    assert F.iterate(3).apply(v) == F.apply(F.apply(F.apply(v)))


@settings(max_examples=40, deadline=None)
@given(st.lists(small_upoly, min_size=4, max_size=4))
def test_det_of_iterate(entries):
    A = ((entries[0], entries[1]), (entries[2], entries[3]))
    F = SemilinearMap(A, 1, D3)
    d = F.determinant()
    assert det_generic(F.iterate_matrix(3)) == d * d.frob(1) * d.frob(2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=8, max_size=8), st.lists(small_upoly, min_size=2, max_size=2))
def test_base_change_coherence(codes, v):
    # F' = C^-1 A C^[q] acts on coordinates w with v = C w
    A = fmap(F3, [codes[:2], codes[2:4]]).A
    C = fmap(F3, [codes[4:6], codes[6:8]]).A
    if det_generic(C).is_zero():
        return
    lift = lambda M: tuple(tuple(D3.const(c) for c in row) for row in M)
    F = SemilinearMap(lift(A), 1, D3)
    G = F.base_change(lift(C))
    w = tuple(v)
    Cw = tuple(sum((D3.const(C[i][j]) * w[j] for j in range(2)), D3.zero) for i in range(2))
    lhs = F.apply(Cw)
    rhs = G.apply(w)
    assert lhs == tuple(sum((D3.const(C[i][j]) * rhs[j] for j in range(2)), D3.zero) for i in range(2))


def test_base_change_with_non_unit_determinant_stays_exact():
    F, D = companion(F3, 1)
    x = D.x()
    C = ((D.one, D.zero), (D.zero, x))
    B = F.base_change(C).A
    assert isinstance(B[0][1], RatFunc)
    # (C^-1 A C^[3]) [0][1] = x^3 and [1][0] = 1/x
    assert B[0][1] == RatFunc(x**3)
    assert B[1][0] * x == 1


def test_singular_base_change():
    F, D = companion(F3, 1)
    with pytest.raises(SingularMatrixError):
        F.base_change(((D.one, D.one), (D.one, D.one)))


def _brute(F):
    K = F.domain
    return brute_fixed_vectors(F.A, lambda a: a.frob(F.e), K, F.n)


@pytest.mark.parametrize("K, rows, e", [
    (F3, [[0, 1], [1, 1]], 1),
    (F5, [[1, 0], [0, 1]], 1),
    (F5, [[2, 0], [0, 1]], 1),
    (F9, [[1, 0], [0, 1]], 1),
    (F9, [[1, 0], [0, 1]], 2),
])
def test_fixed_vectors_examples(K, rows, e):
    F = fmap(K, rows, e)
    assert fixed_vectors(F) == _brute(F)


def test_scalar_map_over_f9_has_81_fixed_vectors():
    # lambda * v with lambda in F_9 and q = 9 is linear: 0 or all of F_9^2
    F = SemilinearMap(((F9.one, F9.zero), (F9.zero, F9.one)), 2, F9)
    assert len(fixed_vectors(F)) == 81
    F = SemilinearMap(((F9.gen, F9.zero), (F9.zero, F9.gen)), 2, F9)
    assert fixed_vectors(F) == [(F9.zero, F9.zero)]


def test_fixed_set_closed_under_fq():
    F = fmap(F9, [[1, 0], [0, 1]], 1)
    vecs = set(fixed_vectors(F))
    assert len(vecs) == 9
    for v in vecs:
        for c in range(3):
            assert tuple(x * F9(c) for x in v) in vecs


def test_f3_companion_has_no_fixed_vectors():
    F = fmap(F3, [[0, 1], [1, 1]])
    assert fixed_space(F).dimension == 0


def test_fixed_space_needs_field():
    F, _ = companion(F3, 1)
    with pytest.raises(PreconditionError):
        fixed_space(F)


def test_fixed_vector_budget():
    F = fmap(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(BudgetExceededError):
        fixed_vectors(F, budget=100)


def test_fixed_basis_identity():
    F = fmap(F5, [[1, 0], [0, 1]])
    fb = f_fixed_basis(F)
    assert fb.extension_degree == 1 and fb.verify(F)


def test_fixed_basis_needs_extension():
    # 2 * v^5 = v forces v^4 = 3, of order 4, so v has order 16 and lives in F_625
    F = fmap(F5, [[2, 0], [0, 1]])
    fb = f_fixed_basis(F)
    assert fb.extension_degree == 4
    assert fb.verify(extend_map(F, 4))


def test_fixed_basis_f3_companion():
    F = fmap(F3, [[0, 1], [1, 1]])
    fb = f_fixed_basis(F)
    assert fb.extension_degree == 8
    assert fb.verify(extend_map(F, 8))


def test_fixed_basis_errors():
    with pytest.raises(SingularMatrixError):
        f_fixed_basis(fmap(F3, [[1, 1], [1, 1]]))
    with pytest.raises(BoundExhaustedError):
        f_fixed_basis(fmap(F3, [[0, 1], [1, 1]]), max_ext=4)


def test_characteristic_polynomial_f3_example():
    g = characteristic_polynomial(fmap(F3, [[0, 1], [1, 1]]).A, F3)
    assert g == upoly(F3, [2, 2, 1], "t")  # t^2 - t - 1
    assert is_irreducible_over(g)
    assert roots_in_field(g) == []
    assert not is_irreducible_over(upoly(F3, [1, 2, 1], "t"))  # t^2 - t + 1 = (t + 1)^2


def test_stable_subspaces_f3_example():
    F = fmap(F3, [[0, 1], [1, 1]])
    levels = stable_subspaces(F, 4)
    assert [lv.simple for lv in levels] == [True, True, True, False]
    assert len(levels[3].stable_lines) == 4
    minus = tuple(tuple(F3(-1) if i == j else F3(0) for j in range(2)) for i in range(2))
    assert F.iterate_matrix(4) == minus


def test_stable_subspaces_diagonal():
    levels = stable_subspaces(fmap(F5, [[1, 0], [0, 2]]), 1)
    assert len(levels[0].stable_lines) == 2 and not levels[0].simple


def test_identity_is_never_simple():
    for lv in stable_subspaces(fmap(F3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 2):
        assert not lv.simple
        assert lv.stable_total == 2 * gaussian_binomial(3, 1, 3)


def test_subspace_limit():
    with pytest.raises(BudgetExceededError):
        stable_subspaces(fmap(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 1, limit=10)


def test_gaussian_binomial():
    assert gaussian_binomial(2, 1, 3) == 4
    assert gaussian_binomial(4, 2, 2) == 35


def test_surviving_degrees():
    # alpha^4 + x*alpha - 1 at depth 0: 4n = n + 1 has no solution
    assert surviving_degrees({4: 0, 1: 1, 0: 0}, 10) == []
    assert surviving_degrees({4: 0, 1: 3, 0: 0}, 10) == [1]


def test_counterexample_small_bound():
    cert = counterexample_search(3, 2, 12)
    assert not cert.found
    assert [d.surviving_degrees for d in cert.depths] == [(), (1,), (3,)]
    assert cert.to_dict()["degree_obstruction"]["depth_zero_solvable"] is False


def test_search_finds_planted_roots():
    x = UPoly.monomial(F3, 1, 1, "x")
    one = UPoly.constant(F3, 1, "x")
    cert = counterexample_search(3, 0, 3, equation={3: one, 1: -one})
    assert cert.solutions == ["0", "1", "2"]
    # alpha^3 - x has the root u = x^(1/3), so depth 1 is needed
    cert = counterexample_search(3, 1, 2, equation={3: one, 0: -x})
    assert cert.depths[0].solutions == ()
    assert cert.depths[1].solutions == ("u",)


def test_search_budget():
    with pytest.raises(BudgetExceededError):
        counterexample_search(3, 2, 30, budget=10)


def test_degree_obstruction_rows():
    obs = degree_obstruction(3, 2)
    assert [row["integer_solution"] for row in obs["by_depth"]] == [None, 1, 3]


def test_twist_is_entrywise_frobenius():
    A = ((F9.gen, F9.one), (F9.zero, F9.gen * 2))
    assert twist(A, 1) == tuple(tuple(a**3 for a in row) for row in A)


def test_brute_oracle_self_check():
    # every vector is fixed by the identity over F_3 with any twist
    F = fmap(F3, [[1, 0], [0, 1]])
    assert len(_brute(F)) == 9 == len(list(itertools.product(range(3), repeat=2)))


def _scan_extension_degree(F, bound):
    """Reference: the first k whose fixed space spans, found by solving every kernel."""
    from fsing.semilinear import independent_subset

    for k in range(1, bound + 1):
        if len(independent_subset(list(fixed_space(extend_map(F, k)).basis), F.n)) == F.n:
            return k
    return None


@pytest.mark.parametrize("seed", range(12))
def test_minimal_extension_degree_matches_kernel_scan(seed):
    import random

    from fsing.semilinear import is_injective, minimal_extension_degree

    rng = random.Random(seed)
    K, e = [(F3, 1), (F5, 1), (F9, 1), (F9, 2)][seed % 4]
    n = rng.randint(1, 2)
    while True:
        F = SemilinearMap(tuple(tuple(K.random_element(rng) for _ in range(n)) for _ in range(n)), e, K)
        if is_injective(F):
            break
    found = minimal_extension_degree(F, 6)
    assert found == _scan_extension_degree(F, 6)


def test_exhausted_bound_names_the_needed_degree():
    with pytest.raises(BoundExhaustedError, match="degree 8"):
        f_fixed_basis(fmap(F3, [[0, 1], [1, 1]]), max_ext=4)
