"""Frobenius operations on ideals: bracket powers, Fedder's test, colon modules."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CyclicityError, PreconditionError, RegularSequenceError
from .groebner import Ideal, ideal_quotient
from .polynomial import Polynomial, PolyRing, product


def bracket_power(I: Ideal, e: int) -> Ideal:
    """I^[p^e], generated by the p^e-th powers of the given generators."""
    if e < 1:
        raise PreconditionError(f"Frobenius exponent must be >= 1, got {e}")
    return Ideal(I.ring, [g.frobenius(e) for g in I.generators], I.budget)


def maximal_ideal(ring: PolyRing) -> Ideal:
    """The irrelevant ideal generated by all variables."""
    return Ideal(ring, ring.gens())


def _fits_below(exp, bound) -> bool:
    return all(a <= bound for a in exp)


def fedder_fast_path(f: Polynomial) -> bool:
    """Principal case: f^(p-1) has a monomial with every exponent <= p-1."""
    p = f.ring.p
    return any(_fits_below(e, p - 1) for e in (f ** (p - 1)).terms)


def fedder_is_fpure(I: Ideal, method: str = "colon") -> bool:
    """Fedder's criterion at the irrelevant ideal: (I^[p] : I) is not inside m^[p].

    ``method="colon"`` runs the general Groebner colon computation;
    ``method="coefficient"`` uses the principal fast path and requires I = (f).
    """
    if I.is_unit():
        raise PreconditionError("Fedder's criterion needs a proper ideal")
    if method == "coefficient":
        if len(I.generators) != 1:
            raise PreconditionError("the coefficient fast path needs a principal ideal")
        return fedder_fast_path(I.generators[0])
    if method != "colon":
        raise PreconditionError(f"unknown method {method!r}")
    ring = I.ring
    if I.is_zero():
        return True
    colon = ideal_quotient(bracket_power(I, 1), I)
    m_p = bracket_power(maximal_ideal(ring), 1)
    return any(not m_p.contains(g) for g in colon.generators)


@dataclass(frozen=True)
class CIColon:
    generator: Polynomial
    bracket: Ideal
    colon: Ideal
    verified: bool


def ci_colon_generator(sequence, e: int, verify: bool = True) -> CIColon:
    """(x_1 ... x_c)^(p^e - 1) for a caller-declared regular sequence.

    The identity (y) + I^[q] = I^[q] : I is checked by Groebner bases; a
    mismatch means the sequence was not regular and raises
    :class:`RegularSequenceError`.
    """
    sequence = list(sequence)
    if not sequence:
        raise PreconditionError("empty sequence")
    ring = sequence[0].ring
    q = ring.p**e
    y = product(sequence, ring) ** (q - 1)
    I = Ideal(ring, sequence)
    bracket = bracket_power(I, e)
    colon = ideal_quotient(bracket, I)
    ok = True
    if verify:
        ok = (Ideal(ring, [y]) + bracket).equals(colon)
        if not ok:
            raise RegularSequenceError(
                f"({', '.join(map(str, sequence))}) fails the colon identity; not a regular sequence")
    return CIColon(y, bracket, colon, ok)


@dataclass(frozen=True)
class EStructureModule:
    ideal: Ideal
    e: int
    bracket: Ideal
    colon: Ideal
    coset_generators: tuple

    def check_invariants(self) -> bool:
        """I^[q] is inside the colon and colon * I is inside I^[q]."""
        return self.colon.contains_ideal(self.bracket) and self.bracket.contains_ideal(self.colon * self.ideal)


def e_structure_module(I: Ideal, e: int) -> EStructureModule:
    """(I^[q] : I) / I^[q]: the Frobenius structures on the injective hull of R/I.

    For principal I = (f) the module must be cyclic on f^(q-1); a failure is
    a hard error.
    """
    if I.is_unit():
        raise PreconditionError("E-structures need a proper ideal")
    bracket = bracket_power(I, e)
    colon = ideal_quotient(bracket, I)
    gb = bracket.groebner()
    cosets = []
    for g in colon.groebner().elements:
        r = gb.reduce(g)
        if not r.is_zero() and r not in cosets:
            cosets.append(r)
    if len(I.generators) == 1:
        f = I.generators[0]
        q = I.ring.p**e
        if not (Ideal(I.ring, [f ** (q - 1)]) + bracket).equals(colon):
            raise CyclicityError(f"(({f})^[{q}] : ({f})) is not generated by ({f})^{q - 1}")
    return EStructureModule(I, e, bracket, colon, tuple(cosets))


def is_rf_submodule(tau: Ideal, I: Ideal, e: int = 1) -> bool:
    """Colon criterion (I^[q] : I) subset of (tau^[q] : tau), as colon(I) * tau inside tau^[q].

    ``tau`` is the pullback to R of the annihilator of a submodule of the top
    local cohomology of R/I, so it must contain I.
    """
    if not tau.contains_ideal(I):
        raise PreconditionError("tau must contain I")
    if tau.is_unit():
        return True
    colon = ideal_quotient(bracket_power(I, e), I)
    target = bracket_power(tau, e)
    return all(target.contains(a * b) for a in colon.generators for b in tau.generators)
