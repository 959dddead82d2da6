"""Homogeneous ideals with cached Groebner bases and the usual operations."""
from __future__ import annotations

import threading

from .groebner import Budget, PackedBasis, groebner_basis_matrix
from .hilbert import HilbertData, monomial_hilbert
from .orders import MonomialOrder, elimination_matrix, grevlex_last_matrix
from .poly import Polynomial
from .ring import RingSpec

GREVLEX = MonomialOrder.grevlex()


class Ideal:
    """An ideal given by generators; reduced bases are cached per monomial order.

    The cache is guarded by a lock so concurrent readers see identical results.
    """

    def __init__(self, ring: RingSpec, generators, check_homogeneous: bool = True):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, (int,)):
                g = Polynomial.constant(ring, g)
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if check_homogeneous and not g.is_homogeneous():
                raise ValueError(f"generator {g} is not homogeneous")
            if g:
                gens.append(g)
        self.generators = tuple(gens)
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring):
        return cls(ring, [Polynomial.one(ring)])

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators)) or '0'})"

    # ---------------------------------------------------------- bases
    def _packed(self, key, matrix, budget) -> PackedBasis:
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        polys, _ = groebner_basis_matrix(self.generators, self.ring, matrix, budget)
        pb = PackedBasis(self.ring, matrix, polys)
        with self._lock:
            self._cache.setdefault(key, pb)
            return self._cache[key]

    def packed_basis(self, order: MonomialOrder = GREVLEX, budget: Budget | None = None) -> PackedBasis:
        return self._packed(order, order.matrix(self.ring.nvars), budget)

    def groebner_basis(self, order: MonomialOrder = GREVLEX, budget: Budget | None = None) -> list:
        """Reduced Groebner basis for ``order`` (computed once, then cached)."""
        return list(self.packed_basis(order, budget).polys)

    def normal_form(self, f: Polynomial, order: MonomialOrder = GREVLEX, budget=None) -> Polynomial:
        return self.packed_basis(order, budget).normal_form(f)

    def contains(self, f: Polynomial, budget=None) -> bool:
        return self.packed_basis(GREVLEX, budget).reduces_to_zero(f)

    def __contains__(self, f):
        return self.contains(f)

    def is_unit(self, budget=None) -> bool:
        if any(g.is_constant() for g in self.generators):
            return True
        return self.packed_basis(GREVLEX, budget).is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def contains_ideal(self, other: "Ideal", budget=None) -> bool:
        pb = self.packed_basis(GREVLEX, budget)
        return all(pb.reduces_to_zero(g) for g in other.generators)

    def equals(self, other: "Ideal", budget=None) -> bool:
        return ideal_equal(self, other, budget)

    # ---------------------------------------------------------- arithmetic
    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal"):
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def intersect(self, other: "Ideal", budget=None) -> "Ideal":
        return intersect(self, other, budget)

    def quotient(self, f, budget=None) -> "Ideal":
        return quotient(self, f, budget)

    def saturation(self, f, budget=None) -> "Ideal":
        return saturation(self, f, budget)

    def eliminate(self, drop, budget=None, ambient: bool = False) -> "Ideal":
        return eliminate(self, drop, budget, ambient)

    def hilbert(self, budget=None) -> HilbertData:
        return hilbert(self, budget)

    def minimal_generators_by_degree(self, budget=None) -> list:
        """Reduced grevlex basis elements (a generating set) sorted by degree."""
        return sorted(self.groebner_basis(GREVLEX, budget), key=lambda g: g.total_degree())


def ideal_equal(I: Ideal, J: Ideal, budget: Budget | None = None) -> bool:
    """True iff each generator of I reduces to 0 modulo J's basis and vice versa."""
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")
    return I.contains_ideal(J, budget) and J.contains_ideal(I, budget)


def _with_extra_var(ring: RingSpec, name="_t"):
    while name in ring.variable_names:
        name = "_" + name
    return ring.extended((name,))


def _eliminate_gens(gens, ring, drop, budget):
    matrix = elimination_matrix(ring.nvars, drop)
    polys, _ = groebner_basis_matrix(gens, ring, matrix, budget)
    drop = set(drop)
    return [g for g in polys if not (g.variables() & drop)]


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I cap J via (t*I + (1-t)*J) cap k[x]."""
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    big = _with_extra_var(ring)
    n = ring.nvars
    emb = list(range(n))
    t = Polynomial.var(big, n)
    one = Polynomial.one(big)
    gens = [t * g.map_to(big, emb) for g in I.generators]
    gens += [(one - t) * g.map_to(big, emb) for g in J.generators]
    kept = _eliminate_gens(gens, big, [n], budget)
    back = list(range(n)) + [None]
    return Ideal(ring, [g.map_to(ring, back) for g in kept])


def quotient(I: Ideal, f: Polynomial, budget: Budget | None = None) -> Ideal:
    """The ideal quotient I : f."""
    if not f:
        raise ValueError("quotient by the zero polynomial")
    if not f.is_homogeneous():
        raise ValueError("quotient by a non-homogeneous polynomial")
    if f.is_constant():
        return Ideal(I.ring, I.generators)
    meet = intersect(I, Ideal(I.ring, [f]), budget)
    return Ideal(I.ring, [g.divide_exact(f) for g in meet.generators])


def _saturate_by_variable(I: Ideal, i: int, budget) -> Ideal:
    # In grevlex with x_i smallest, x_i divides a basis element exactly when it
    # divides its leading term, so stripping x_i-powers from a basis of I gives
    # a basis of I : x_i^infinity.
    ring = I.ring
    matrix = grevlex_last_matrix(ring.nvars, i)
    polys, _ = groebner_basis_matrix(I.generators, ring, matrix, budget)
    out = []
    for g in polys:
        k = min(e[i] for e in g.coeffs)
        if k:
            g = Polynomial(ring, {e[:i] + (e[i] - k,) + e[i + 1:]: c for e, c in g.coeffs.items()}, True)
        out.append(g)
    return Ideal(ring, out)


def saturation(I: Ideal, f: Polynomial, budget: Budget | None = None) -> Ideal:
    """I : f^infinity.

    Monomial f: successive variable saturations.  Otherwise the Rabinowitsch
    elimination (I + (1 - t f)) cap k[x].
    """
    if not f:
        raise ValueError("saturation by the zero polynomial")
    if not f.is_homogeneous():
        raise ValueError("saturation by a non-homogeneous polynomial")
    ring = I.ring
    if f.is_constant():
        return Ideal(ring, I.generators)
    if len(f.coeffs) == 1:
        (e,) = f.coeffs
        J = I
        for i, k in enumerate(e):
            if k:
                J = _saturate_by_variable(J, i, budget)
        return J
    big = _with_extra_var(ring)
    n = ring.nvars
    emb = list(range(n))
    t = Polynomial.var(big, n)
    gens = [g.map_to(big, emb) for g in I.generators]
    gens.append(Polynomial.one(big) - t * f.map_to(big, emb))
    kept = _eliminate_gens(gens, big, [n], budget)
    back = list(range(n)) + [None]
    return Ideal(ring, [g.map_to(ring, back) for g in kept])


def eliminate(I: Ideal, drop, budget: Budget | None = None, ambient: bool = False) -> Ideal:
    """I cap k[kept variables].

    Returns an ideal of the subring on the kept variables (in their original
    order), or of the ambient ring when ``ambient`` is set.
    """
    ring = I.ring
    drop = sorted(set(drop))
    if not drop:
        return Ideal(ring, I.generators)
    kept_polys = _eliminate_gens(I.generators, ring, drop, budget)
    if ambient:
        return Ideal(ring, kept_polys)
    keep = [i for i in range(ring.nvars) if i not in drop]
    sub = ring.subring(keep)
    index = [None] * ring.nvars
    for new, old in enumerate(keep):
        index[old] = new
    return Ideal(sub, [g.map_to(sub, index) for g in kept_polys])


def hilbert(I: Ideal, budget: Budget | None = None) -> HilbertData:
    """Hilbert data of R/I from the lead-term ideal of the grevlex basis.

    Uses the total degree, so every variable must have total degree 1.
    """
    ring = I.ring
    if any(sum(g) != 1 for g in ring.grading):
        raise ValueError("hilbert needs every variable in total degree 1")
    pb = I.packed_basis(GREVLEX, budget)
    return monomial_hilbert(pb.leading_exponents(), ring.nvars)
