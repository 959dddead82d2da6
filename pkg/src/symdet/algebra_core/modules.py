"""Graded free modules, submodule Groebner bases (position over term), syzygies, lifting."""
from __future__ import annotations

from dataclasses import dataclass

from .groebner import (FIELD_BITS, Budget, GroebnerEngine, Packer, _entry, _normalize,
                       reduce_packed)
from .orders import MonomialOrder
from .poly import Polynomial
from .ring import RingSpec


@dataclass(frozen=True)
class GradedFreeModule:
    """The direct sum of A(t) over the twist list t.

    The basis vector of A(t) sits in degree -t, so an entry of a map
    A(s) -> A(t) has degree t - s.
    """

    ring: RingSpec
    twists: tuple

    def __post_init__(self):
        tw = tuple(self.twists)
        if not tw:
            raise ValueError("a graded free module needs at least one summand")
        object.__setattr__(self, "twists", tw)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __len__(self):
        return len(self.twists)

    def dual_shift(self, shift: int = -5) -> "GradedFreeModule":
        """F*(shift): twists t become shift - t."""
        return GradedFreeModule(self.ring, tuple(_sub(shift, t) for t in self.twists))

    def sub(self, indices) -> "GradedFreeModule":
        return GradedFreeModule(self.ring, tuple(self.twists[i] for i in indices))


def _sub(a, b):
    if isinstance(b, tuple):
        if isinstance(a, tuple):
            return tuple(x - y for x, y in zip(a, b))
        return tuple(a - y for y in b)
    return a - b


class FreeModuleElement:
    """An element of a graded free module given by its component polynomials."""

    __slots__ = ("module", "components")

    def __init__(self, module: GradedFreeModule, components):
        comps = tuple(components)
        if len(comps) != module.rank:
            raise ValueError("component count differs from module rank")
        for c in comps:
            if c.ring != module.ring:
                raise ValueError("component from a different ring")
        self.module = module
        self.components = comps

    @classmethod
    def basis(cls, module, i, coeff=None):
        R = module.ring
        comps = [Polynomial.zero(R)] * module.rank
        comps[i] = coeff if coeff is not None else Polynomial.one(R)
        return cls(module, comps)

    def is_zero(self) -> bool:
        return not any(self.components)

    def degree(self):
        """Common degree deg(f_i) - t_i, or None for zero; raises if inhomogeneous."""
        degs = set()
        for f, t in zip(self.components, self.module.twists):
            if f:
                if not f.is_homogeneous():
                    raise ValueError("inhomogeneous component")
                degs.add(_sub(f.degree, t))
        if len(degs) > 1:
            raise ValueError("components have inconsistent degrees")
        return degs.pop() if degs else None

    def is_homogeneous(self) -> bool:
        try:
            self.degree()
            return True
        except ValueError:
            return False

    def __add__(self, other):
        return FreeModuleElement(self.module, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return FreeModuleElement(self.module, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, f: Polynomial):
        return FreeModuleElement(self.module, [f * a for a in self.components])

    def __eq__(self, other):
        return isinstance(other, FreeModuleElement) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class ModulePacker(Packer):
    """Packer with a component field above the order key (position over term).

    Component 0 is the largest position.
    """

    def __init__(self, n, matrix, rank):
        super().__init__(n, matrix)
        self.rank = rank
        self.cshift = self.ebits + FIELD_BITS * self.m

    def pack_term(self, comp, exp):
        return ((self.rank - 1 - comp) << self.cshift) | self.pack(exp)

    def comp(self, K):
        return self.rank - 1 - (K >> self.cshift)

    def divides(self, a, b):
        if (a >> self.cshift) != (b >> self.cshift):
            return False
        g = self.guard
        return (((b & self.emask) | g) - (a & self.emask)) & g == g

    def lcm(self, a, b):
        if (a >> self.cshift) != (b >> self.cshift):
            return None
        top = (a >> self.cshift) << self.cshift
        return top | super().lcm(a, b)

    def degree(self, K):
        return super().degree(K & ((1 << self.cshift) - 1))


class ModuleEngine(GroebnerEngine):
    """Buchberger for submodules; no coprime criterion (it fails for modules)."""

    def __init__(self, ring, matrix, rank, budget=None):
        super().__init__(ring, matrix, budget)
        self.packer = ModulePacker(ring.nvars, matrix, rank)

    def pack_vector(self, comps) -> dict:
        d = {}
        for i, f in enumerate(comps):
            for e, c in f.coeffs.items():
                d[self.packer.pack_term(i, e)] = c
        return d

    def unpack_vector(self, d, rank) -> list:
        parts = [dict() for _ in range(rank)]
        for K, c in d.items():
            parts[self.packer.comp(K)][self.packer.exps(K)] = c
        return [Polynomial(self.ring, part, True) for part in parts]

    def run_vectors(self, vectors) -> list[dict]:
        P = self.packer
        p = self.p
        items = []
        for v in vectors:
            d = self.pack_vector(v)
            if d:
                items.append((max(P.degree(k) for k in d), max(d), d))
        items.sort(key=lambda t: (t[0], -t[1]))
        G, pairs, red = [], [], []
        import heapq
        for deg, _, d in items:
            d = reduce_packed(d, red, P, p)
            if not d:
                continue
            d = _normalize(d, p)
            idx = self._add(d, deg)
            red.append(_entry(d))
            G, pairs = self._update(G, pairs, idx)
        while pairs:
            s, lcm, i, j = heapq.heappop(pairs)
            self.stats["pairs"] += 1
            b = self.budget
            if b.max_pairs is not None and self.stats["pairs"] > b.max_pairs:
                from .groebner import BudgetExceeded
                raise BudgetExceeded("pairs", b.max_pairs, self.stats["pairs"])
            h = reduce_packed(self._spoly(i, j, lcm), red, P, p)
            if not h:
                continue
            h = _normalize(h, p)
            idx = self._add(h, s)
            red.append(_entry(h))
            G, pairs = self._update(G, pairs, idx)
        return self._reduce_basis(G)

    def _update(self, G, pairs, h):
        import heapq
        P = self.packer
        lms = self.lms
        lh = lms[h]
        C = []
        for g in G:
            l = P.lcm(lms[g], lh)
            if l is not None:
                C.append((l, g))
        D = []
        for idx, (l1, g1) in enumerate(C):
            dominated = any(jdx != idx and P.divides(l2, l1) and (l2 != l1 or jdx < idx)
                            for jdx, (l2, _) in enumerate(C))
            if not dominated:
                D.append((l1, g1))
        kept = []
        for pr in pairs:
            s, l, i, j = pr
            if P.divides(lh, l):
                li, lj = P.lcm(lms[i], lh), P.lcm(lms[j], lh)
                if li != l and lj != l:
                    continue
            kept.append(pr)
        for l, g in D:
            s = max(self.sugar[g] + P.degree(l) - P.degree(lms[g]),
                    self.sugar[h] + P.degree(l) - P.degree(lh))
            kept.append((s, l, g, h))
        heapq.heapify(kept)
        G2 = [g for g in G if not P.divides(lh, lms[g])]
        G2.append(h)
        return G2, kept


def _vec_degree(v, twists):
    for f, t in zip(v, twists):
        if f:
            return f.total_degree() - (t if isinstance(t, int) else sum(t))
    return 0


class SubmoduleBasis:
    """Groebner basis of the submodule spanned by vectors, with lifting data.

    Internally works with the augmented vectors (g_j, e_j) so that the
    syzygies and lift coordinates come out of one computation.
    """

    def __init__(self, ring: RingSpec, rank: int, generators, order: MonomialOrder | None = None,
                 budget: Budget | None = None):
        order = order or MonomialOrder.grevlex()
        self.ring = ring
        self.rank = rank
        self.generators = [list(g) for g in generators]
        m = len(self.generators)
        self.m = m
        zero = Polynomial.zero(ring)
        one = Polynomial.one(ring)
        aug = []
        for j, g in enumerate(self.generators):
            if len(g) != rank:
                raise ValueError("generator of the wrong length")
            tail = [zero] * m
            tail[j] = one
            aug.append(list(g) + tail)
        self.engine = ModuleEngine(ring, order.matrix(ring.nvars), rank + m, budget)
        self.basis = self.engine.run_vectors(aug) if aug else []
        self.entries = sorted((_entry(d) for d in self.basis), key=lambda t: t[0])

    def _first_zero(self, d) -> bool:
        P = self.engine.packer
        return all(P.comp(K) >= self.rank for K in d)

    def syzygies(self) -> list[list[Polynomial]]:
        """Generators of {s : sum s_j g_j = 0}."""
        out = []
        for d in self.basis:
            if self._first_zero(d):
                vec = self.engine.unpack_vector(d, self.rank + self.m)
                out.append(vec[self.rank:])
        return out

    def lift(self, target) -> list[Polynomial] | None:
        """Coordinates a with sum a_j g_j = target, or None when target is not in the span."""
        if len(target) != self.rank:
            raise ValueError("target of the wrong length")
        zero = Polynomial.zero(self.ring)
        d = self.engine.pack_vector(list(target) + [zero] * self.m)
        r = reduce_packed(d, self.entries, self.engine.packer, self.engine.p)
        if not self._first_zero(r):
            return None
        vec = self.engine.unpack_vector(r, self.rank + self.m)
        return [-c for c in vec[self.rank:]]

    def contains(self, target) -> bool:
        return self.lift(target) is not None


def module_syzygies(elements, budget: Budget | None = None) -> list[FreeModuleElement]:
    """Generators of the syzygy module of homogeneous elements of one free module.

    The result lives in the free module with one summand per element, twisted
    so that each syzygy is homogeneous.
    """
    if not elements:
        return []
    module = elements[0].module
    ring = module.ring
    twists = []
    for el in elements:
        if el.module != module:
            raise ValueError("elements from different modules")
        d = el.degree()
        twists.append(_neg(d) if d is not None else 0)
    syz_module = GradedFreeModule(ring, tuple(twists))
    sb = SubmoduleBasis(ring, module.rank, [el.components for el in elements], budget=budget)
    return [FreeModuleElement(syz_module, s) for s in sb.syzygies()]


def _neg(d):
    return tuple(-x for x in d) if isinstance(d, tuple) else -d


def module_lift(target: FreeModuleElement, generators, budget: Budget | None = None):
    """Coordinates (Polynomials) expressing target in the generators, or None."""
    if not generators:
        return None if not target.is_zero() else []
    sb = SubmoduleBasis(target.module.ring, target.module.rank,
                        [g.components for g in generators], budget=budget)
    return sb.lift(target.components)
