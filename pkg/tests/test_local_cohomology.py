import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from oracles import fermat_formula, fermat_frobenius_matrix
from fsing.errors import NotMonicError, PreconditionError
from fsing.frobenius_ideals import fedder_is_fpure
from fsing.groebner import Ideal
from fsing.local_cohomology import (
    INCONCLUSIVE,
    NOT_SIMPLE,
    SIMPLE,
    CechClass,
    GradedHypersurface,
    basis_exponents,
    d_simplicity_verdict,
    degree_zero_basis,
    degree_zero_dimension_formula,
    dual_square_check,
    fermat_frobenius_coefficient,
    frobenius_matrix_degree_zero,
    frobenius_on_class,
    is_frobenius_stable,
    nilpotency_of,
    socle_line_data,
    star_zero_analysis,
)
from fsing.polynomial import PolyRing


def fermat(p, d, n=3):
    names = ["x", "y", "z", "w"][:n]
    R = PolyRing(p, names)
    text = "+".join(f"{v}^{d}" for v in names[:-1]) + f"-{names[-1]}^{d}"
    return GradedHypersurface(R.parse(text))


def test_quartic_basis_text():
    H = fermat(5, 4)
    assert [str(b) for b in degree_zero_basis(H)] == ["z^3 / x^2*y", "z^3 / x*y^2", "z^2 / x*y"]
    assert [basis_exponents(b) for b in degree_zero_basis(H)] == [(2, 1, 1), (1, 2, 1), (1, 1, 2)]


@pytest.mark.parametrize("d, n", [(3, 3), (4, 3), (5, 3), (2, 3), (4, 4), (5, 4), (3, 2)])
def test_basis_count(d, n):
    H = fermat(7, d, n)
    assert len(degree_zero_basis(H)) == degree_zero_dimension_formula(d, n)
    assert degree_zero_dimension_formula(d, n) == (comb(d - 1, n - 1) if d >= n else 0)


def test_basis_classes_have_degree_zero():
    H = fermat(7, 5)
    assert all(b.degree == 0 for b in degree_zero_basis(H))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
@pytest.mark.parametrize("d", [3, 4, 5])
def test_matrix_against_expansion_oracle(p, d):
    H = fermat(p, d)
    exps = [basis_exponents(b) for b in degree_zero_basis(H)]
    assert [list(r) for r in frobenius_matrix_degree_zero(H)] == fermat_frobenius_matrix(d, 3, p, exps)


@pytest.mark.parametrize("p", [3, 5])
def test_matrix_against_oracle_four_variables(p):
    H = fermat(p, 4, 4)
    exps = [basis_exponents(b) for b in degree_zero_basis(H)]
    assert [list(r) for r in frobenius_matrix_degree_zero(H)] == fermat_frobenius_matrix(4, 4, p, exps)


@pytest.mark.parametrize("d, p", [(3, 7), (3, 13), (4, 5), (4, 13), (5, 11)])
def test_diagonal_formula(d, p):
    H = fermat(p, d)
    M = frobenius_matrix_degree_zero(H)
    for j, b in enumerate(degree_zero_basis(H)):
        i = basis_exponents(b)
        assert M[j][j] == fermat_frobenius_coefficient(d, p, i) == fermat_formula(d, p, i)
        assert all(M[k][j] == 0 for k in range(len(M)) if k != j)


def test_formula_needs_congruence():
    with pytest.raises(PreconditionError):
        fermat_frobenius_coefficient(4, 7, (1, 1, 2))


def test_cech_reduction_uses_the_equation():
    H = fermat(5, 4)
    R = H.ring
    # z^4 = x^4 + y^4 and both fractions have numerator exponent >= denominator
    assert H.cech_class(R.parse("z^4"), (2, 3)).is_zero()
    # x / x*y vanishes, z^3 / x*y survives
    assert H.cech_class(R.parse("x"), (1, 1)).is_zero()
    c = H.cech_class(R.parse("z^3"), (1, 1))
    assert str(c) == "z^3 / x*y" and c.degree == 1


def test_cech_class_rejects_bad_denominator():
    H = fermat(5, 4)
    with pytest.raises(PreconditionError):
        H.cech_class(H.ring.parse("z"), (0, 1))


def test_positive_degree_classes_die():
    H = fermat(5, 4)
    c = H.cech_class(H.ring.parse("z^3"), (1, 1))
    assert frobenius_on_class(H, c).is_zero()


def test_not_monic_rejected():
    R = PolyRing(5, ["x", "y", "z"])
    with pytest.raises(NotMonicError):
        GradedHypersurface(R.parse("x*z^3 + y^4"))
    with pytest.raises(PreconditionError):
        GradedHypersurface(R.parse("x^4 + z"))


def test_weighted_grading_rejected():
    R = PolyRing(5, ["x", "y", "z"], weights=[1, 1, 2])
    with pytest.raises(PreconditionError):
        GradedHypersurface(R.parse("x^2 + z"))


def _random_class(H, rng, k):
    basis = degree_zero_basis(H)
    c = CechClass(H, ())
    for _ in range(k):
        c = c + rng.choice(basis).scale(rng.randrange(1, H.p))
    return c


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_frobenius_is_additive_and_p_linear(seed, c):
    H = fermat(7, 4)
    rng = random.Random(seed)
    a, b = _random_class(H, rng, 3), _random_class(H, rng, 2)
    F = lambda x: frobenius_on_class(H, x)
    assert F(a + b) == F(a) + F(b)
    # scalars in F_p are fixed by x -> x^p
    assert F(a.scale(c)) == F(a).scale(c)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_frobenius_composes(seed):
    H = fermat(5, 4)
    c = _random_class(H, random.Random(seed), 3)
    twice = frobenius_on_class(H, frobenius_on_class(H, c))
    assert frobenius_on_class(H, c, 2) == twice


@pytest.mark.parametrize("p, expected", [(5, 2), (7, 1), (11, 1), (13, 1)])
def test_fedder_matches_verdict_for_cubic(p, expected):
    # zero a-invariant: F-pure exactly when the degree-zero Frobenius is nonzero
    H = fermat(p, 3)
    verdict = d_simplicity_verdict(H, with_socle=False).verdict
    pure = fedder_is_fpure(Ideal(H.ring, [H.f]))
    assert pure == (verdict == NOT_SIMPLE) == (p % 3 == 1)


def test_nilpotency_orders():
    assert nilpotency_of(((0, 1), (0, 0)), 3).order == 2
    assert nilpotency_of(((0,),), 3).order == 1
    rec = nilpotency_of(((1, 0), (0, 0)), 3)
    assert rec.kind == "mixed" and rec.f_reduced_dimension == 1
    assert nilpotency_of(((2, 0), (0, 1)), 3).kind == "injective"


@pytest.mark.parametrize("p", [3, 13])
def test_quintic_square_zero(p):
    rec = star_zero_analysis(fermat(p, 5))
    assert rec.nilpotent and rec.order == 2


def test_quartic_p5_socle_lines():
    H = fermat(5, 4)
    lines = socle_line_data(H)
    assert [line.eigencoefficient for line in lines] == [3, 3, 2]
    assert [line.to_dict()["annihilator"] for line in lines] == [["x^2", "y", "z"], ["y^2", "x", "z"], ["z^2", "x", "y"]]
    for line in lines:
        assert line.annihilator_verified and line.rf_submodule
        assert dual_square_check(H, line)
        assert is_frobenius_stable(H, line.cls)


def test_dual_square_fails_with_wrong_coefficient():
    from dataclasses import replace

    H = fermat(5, 4)
    line = socle_line_data(H)[0]
    assert not dual_square_check(H, replace(line, eigencoefficient=1))


def test_verdicts():
    assert d_simplicity_verdict(fermat(3, 4)).verdict == SIMPLE
    assert d_simplicity_verdict(fermat(7, 3)).verdict == NOT_SIMPLE
    # (x + y - z)^5 is not an isolated singularity
    R = PolyRing(5, ["x", "y", "z"])
    H = GradedHypersurface(R.parse("x^5+y^5-z^5"))
    report = d_simplicity_verdict(H)
    assert not report.isolated_singularity and report.verdict == INCONCLUSIVE


def test_low_degree_is_simple():
    report = d_simplicity_verdict(fermat(5, 2))
    assert report.degree_zero_dimension == 0 and report.verdict == SIMPLE


def test_report_dict_keys_are_stable():
    keys = list(d_simplicity_verdict(fermat(5, 4)).to_dict())
    assert keys == ["f", "p", "n", "d", "a_invariant", "degree_zero_dimension", "basis",
                    "frobenius_matrix", "nilpotency", "verdict", "hypotheses", "socle_lines"]
