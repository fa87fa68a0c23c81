"""Buchberger's algorithm and the ideal operations built on it.

Pairs are selected by the normal strategy (smallest lcm, ties broken by
index) after the Gebauer-Moeller update, which applies Buchberger's
coprimality and chain criteria.  Everything is deterministic.  Resource caps
raise :class:`GroebnerBudgetExceeded`; no partial basis is ever returned.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GroebnerBudgetExceeded, PreconditionError, RingMismatchError
from .polynomial import MonomialOrder, Polynomial, PolyRing


@dataclass(frozen=True)
class Budget:
    max_basis_size: int = 5_000
    max_steps: int = 20_000_000


DEFAULT_BUDGET = Budget()


class _Counter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget: Budget):
        self.steps = 0
        self.budget = budget

    def tick(self, n=1):
        self.steps += n
        if self.steps > self.budget.max_steps:
            raise GroebnerBudgetExceeded(f"more than {self.budget.max_steps} reduction steps")


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


class _Element:
    """Monic polynomial prepared for reduction: leading exponent plus tail."""

    __slots__ = ("lead", "tail", "terms")

    def __init__(self, terms: dict, key, p):
        lead = max(terms, key=key)
        inv = pow(terms[lead], -1, p)
        if inv != 1:
            terms = {e: c * inv % p for e, c in terms.items()}
        self.lead = lead
        self.terms = terms
        self.tail = [(e, c) for e, c in terms.items() if e != lead]


def _reduce(terms: dict, divisors: Sequence[_Element], key, p, counter: _Counter | None,
            quotients: list | None = None) -> dict:
    """Full reduction of ``terms`` by ``divisors``; returns the remainder.

    If ``quotients`` is a list of dicts (one per divisor) the cofactors are
    accumulated there.
    """
    f = dict(terms)

    def nkey(e):
        return tuple(-k for k in key(e))

    heap = [(nkey(e), e) for e in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = f.pop(e, None)
        if c is None:
            continue
        for idx, g in enumerate(divisors):
            if _divides(g.lead, e):
                shift = tuple(a - b for a, b in zip(e, g.lead))
                for te, tc in g.tail:
                    ne = tuple(a + b for a, b in zip(te, shift))
                    old = f.get(ne)
                    nv = ((old or 0) - c * tc) % p
                    if nv:
                        if old is None:
                            heapq.heappush(heap, (nkey(ne), ne))
                        f[ne] = nv
                    elif old is not None:
                        del f[ne]
                if quotients is not None:
                    q = quotients[idx]
                    q[shift] = (q.get(shift, 0) + c) % p
                if counter is not None:
                    counter.tick(1 + len(g.tail))
                break
        else:
            rem[e] = c
    return rem


class GroebnerBasis:
    """A reduced Groebner basis: monic elements sorted by decreasing leading monomial."""

    def __init__(self, ring: PolyRing, order: MonomialOrder, elements: Sequence[Polynomial]):
        self.ring = ring
        self.order = order
        self.elements = tuple(elements)
        key = order.key
        self._prepared = [_Element(dict(g.terms), key, ring.p) for g in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroebnerBasis([{', '.join(map(str, self.elements))}], {self.order!r})"

    def leading_monomials(self) -> list[tuple]:
        return [g.lead for g in self._prepared]

    def is_unit(self) -> bool:
        return any(not any(e) for e in self.leading_monomials())

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatchError(f"{f.ring} vs {self.ring}")
        rem = _reduce(f.terms, self._prepared, self.order.key, self.ring.p, None)
        return Polynomial._raw(self.ring, rem)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def satisfies_buchberger_criterion(self) -> bool:
        """Every S-polynomial reduces to zero (checked, not assumed)."""
        for i in range(len(self.elements)):
            for j in range(i + 1, len(self.elements)):
                if not self.reduce(s_polynomial(self.elements[i], self.elements[j], self.order)).is_zero():
                    return False
        return True

    def is_reduced(self) -> bool:
        p = self.ring.p
        for i, g in enumerate(self._prepared):
            if self.elements[i].terms[g.lead] != 1:
                return False
            for j, h in enumerate(self._prepared):
                if i != j and any(_divides(h.lead, e) for e in g.terms):
                    return False
        return p > 0


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    order = order or f.ring.order
    (ef, cf), (eg, cg) = f.leading_term(order), g.leading_term(order)
    L = _lcm(ef, eg)
    p = f.ring.p
    a = f.shift(tuple(x - y for x, y in zip(L, ef)), pow(cf, -1, p))
    b = g.shift(tuple(x - y for x, y in zip(L, eg)), pow(cg, -1, p))
    return a - b


def buchberger(generators: Iterable[Polynomial], order: MonomialOrder | None = None,
               budget: Budget = DEFAULT_BUDGET, ring: PolyRing | None = None) -> GroebnerBasis:
    gens = [g for g in generators if not g.is_zero()]
    if ring is None:
        if not gens:
            raise PreconditionError("cannot infer the ring of an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatchError(f"{g.ring} vs {ring}")
    order = order or ring.order
    key = order.key
    p = ring.p
    counter = _Counter(budget)
    if not gens:
        return GroebnerBasis(ring, order, [])
    if any(g.is_constant() for g in gens):
        return GroebnerBasis(ring, order, [ring.one()])

    elems: list[_Element] = []
    active: list[int] = []
    pairs: list[tuple[int, int]] = []

    def update(h_idx: int):
        nonlocal active, pairs
        h = elems[h_idx].lead
        cands = list(active)
        # Chain criterion among new pairs.
        keep = []
        for pos, i in enumerate(cands):
            li = _lcm(elems[i].lead, h)
            if _coprime(elems[i].lead, h):
                keep.append(i)
                continue
            others = cands[pos + 1:] + keep
            if not any(_divides(_lcm(elems[j].lead, h), li) for j in others):
                keep.append(i)
        new_pairs = [(i, h_idx) for i in keep if not _coprime(elems[i].lead, h)]
        # Drop old pairs whose lcm is strictly divisible via h.
        kept_old = []
        for (i, j) in pairs:
            lij = _lcm(elems[i].lead, elems[j].lead)
            if (_divides(h, lij) and _lcm(elems[i].lead, h) != lij and _lcm(elems[j].lead, h) != lij):
                continue
            kept_old.append((i, j))
        pairs = kept_old + new_pairs
        active = [i for i in active if not _divides(h, elems[i].lead)] + [h_idx]
        if len(active) > budget.max_basis_size:
            raise GroebnerBudgetExceeded(f"basis grew beyond {budget.max_basis_size} elements")

    for g in gens:
        elems.append(_Element(dict(g.terms), key, p))
        update(len(elems) - 1)

    while pairs:
        best = min(range(len(pairs)),
                   key=lambda k: (key(_lcm(elems[pairs[k][0]].lead, elems[pairs[k][1]].lead)), pairs[k]))
        i, j = pairs.pop(best)
        s = _spoly_terms(elems[i], elems[j], p)
        h = _reduce(s, [elems[k] for k in active], key, p, counter)
        if h:
            if all(not any(e) for e in h):
                return GroebnerBasis(ring, order, [ring.one()])
            elems.append(_Element(h, key, p))
            update(len(elems) - 1)

    # Minimalize (input generators may be dominated by earlier ones), then inter-reduce.
    active = [i for i in active
              if not any(k != i and _divides(elems[k].lead, elems[i].lead)
                         and (elems[k].lead != elems[i].lead or k < i) for k in active)]
    final = []
    for i in active:
        others = [elems[k] for k in active if k != i]
        tail = _reduce(dict(elems[i].tail), others, key, p, counter)
        tail[elems[i].lead] = 1
        final.append(Polynomial._raw(ring, tail))
    final.sort(key=lambda g: key(g.leading_term(order)[0]), reverse=True)
    return GroebnerBasis(ring, order, final)


def _spoly_terms(f: _Element, g: _Element, p: int) -> dict:
    L = _lcm(f.lead, g.lead)
    sf = tuple(a - b for a, b in zip(L, f.lead))
    sg = tuple(a - b for a, b in zip(L, g.lead))
    out: dict = {}
    for e, c in f.tail:
        ne = tuple(a + b for a, b in zip(e, sf))
        out[ne] = (out.get(ne, 0) + c) % p
    for e, c in g.tail:
        ne = tuple(a + b for a, b in zip(e, sg))
        out[ne] = (out.get(ne, 0) - c) % p
    return {e: c for e, c in out.items() if c}


def divide(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder | None = None
           ) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division: f = sum(q_i * g_i) + r, r with no term divisible by any lead."""
    ring = f.ring
    order = order or ring.order
    p = ring.p
    prepared = []
    scales = []
    for g in divisors:
        e, c = g.leading_term(order)
        prepared.append(_Element(dict(g.terms), order.key, p))
        scales.append(pow(c, -1, p))
    quotients = [dict() for _ in divisors]
    rem = _reduce(f.terms, prepared, order.key, p, None, quotients)
    qs = [Polynomial(ring, {e: c * s for e, c in q.items()}) for q, s in zip(quotients, scales)]
    return qs, Polynomial._raw(ring, rem)


def exact_quotient(f: Polynomial, g: Polynomial) -> Polynomial:
    (q,), r = divide(f, [g])
    if not r.is_zero():
        raise PreconditionError(f"{g} does not divide {f}")
    return q


class Ideal:
    """An ideal of a polynomial ring, given by generators, with cached Groebner bases."""

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = (),
                 budget: Budget = DEFAULT_BUDGET):
        gens = []
        for g in generators:
            g = ring(g)
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self.budget = budget
        self._gb: dict = {}

    @classmethod
    def parse(cls, ring: PolyRing, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    def groebner(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        order = order or self.ring.order
        gb = self._gb.get(order)
        if gb is None:
            gb = buchberger(self.generators, order, self.budget, ring=self.ring)
            self._gb[order] = gb
        return gb

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.groebner().reduce(f)

    def contains(self, f: Polynomial) -> bool:
        return self.groebner().contains(self.ring(f))

    __contains__ = contains

    def contains_ideal(self, other: "Ideal") -> bool:
        _same_ring(self, other)
        gb = self.groebner()
        return all(gb.contains(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        _same_ring(self, other)
        return self.groebner().elements == other.groebner().elements

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def __add__(self, other: "Ideal") -> "Ideal":
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        _same_ring(self, other)
        return Ideal(self.ring, self.generators + other.generators, self.budget)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, [a * b for a in self.generators for b in other.generators], self.budget)

    def quotient(self, other) -> "Ideal":
        return ideal_quotient(self, other)

    def intersect(self, other: "Ideal") -> "Ideal":
        return intersect(self, other)

    def minimal_generators_text(self) -> list[str]:
        return [str(g) for g in self.groebner().elements]

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.reduce(f)


def ideal_membership(f: Polynomial, I: Ideal) -> bool:
    return I.contains(f)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True iff J is a subset of I."""
    return I.contains_ideal(J)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    return I.equals(J)


def _elimination_ring(ring: PolyRing) -> tuple[PolyRing, MonomialOrder]:
    name = "_t"
    while ring.has_var(name):
        name += "_"
    ext = PolyRing(ring.p, (name,) + ring.variables, (1,) + ring.weights)
    order = MonomialOrder("grevlex", block=1)
    return ext, order


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via t*I + (1-t)*J and elimination of t."""
    _same_ring(I, J)
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring, [], I.budget)
    ring = I.ring
    ext, order = _elimination_ring(ring)
    shift = list(range(1, ring.nvars + 1))
    t = ext.var(ext.variables[0])
    gens = [t * g.to_ring(ext, shift) for g in I.generators]
    gens += [(ext.one() - t) * g.to_ring(ext, shift) for g in J.generators]
    gb = buchberger(gens, order, I.budget, ring=ext)
    back = []
    for g in gb.elements:
        if all(e[0] == 0 for e in g.terms):
            back.append(Polynomial(ring, {e[1:]: c for e, c in g.terms.items()}))
    return Ideal(ring, back, I.budget)


def ideal_quotient(I: Ideal, g) -> Ideal:
    """I : g for a polynomial g, or I : J = intersection of I : g_j over generators of J."""
    if isinstance(g, Ideal):
        _same_ring(I, g)
        if g.is_zero():
            return Ideal(I.ring, [I.ring.one()], I.budget)
        result = None
        for h in g.generators:
            part = ideal_quotient(I, h)
            result = part if result is None else intersect(result, part)
        return result
    g = I.ring(g)
    if g.is_zero():
        raise PreconditionError("colon by the zero polynomial")
    if I.is_zero():
        return Ideal(I.ring, [], I.budget)
    if g.is_constant():
        return Ideal(I.ring, I.generators, I.budget)
    inter = intersect(I, Ideal(I.ring, [g], I.budget))
    return Ideal(I.ring, [exact_quotient(h, g) for h in inter.generators], I.budget)


def is_zero_dimensional(I: Ideal) -> bool:
    lms = I.groebner().leading_monomials()
    n = I.ring.nvars
    for i in range(n):
        if not any(all(e[k] == 0 for k in range(n) if k != i) for e in lms):
            return False
    return True
