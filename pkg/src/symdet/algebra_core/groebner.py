"""Buchberger's algorithm on packed monomials.

A monomial is stored as one Python int: the order key M*e in the high
fields followed by the raw exponents in the low fields.  Comparing ints
compares monomials, adding ints multiplies monomials, and a guard bit per
exponent field turns divisibility into a single subtraction and mask.
Pairs are handled with the Gebauer-Moeller criteria (which include the
coprime-leading-term and chain criteria) under the sugar strategy.
"""
from __future__ import annotations

import heapq
import os
import time
from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial

FIELD_BITS = 16
_FMASK = (1 << FIELD_BITS) - 1
_MAX_EXP = (1 << (FIELD_BITS - 1)) - 1


class BudgetExceeded(RuntimeError):
    """A resource cap was hit; the computation was abandoned, not truncated."""

    def __init__(self, cap: str, limit, reached):
        self.cap = cap
        self.limit = limit
        self.reached = reached
        super().__init__(f"budget exceeded: {cap} limit {limit} (reached {reached})")


@dataclass(frozen=True)
class Budget:
    """Caps for one Groebner computation.  ``None`` disables a cap."""

    max_basis: int | None = 20000
    max_degree: int | None = 200
    max_pairs: int | None = 2_000_000
    max_seconds: float | None = None

    @classmethod
    def from_env(cls, env=None) -> "Budget":
        """Read caps from SYMDET_BUDGET, e.g. ``basis=500,degree=40,pairs=1e5,seconds=60``."""
        env = os.environ if env is None else env
        text = env.get("SYMDET_BUDGET", "").strip()
        if not text:
            return cls()
        return cls.parse(text)

    @classmethod
    def parse(cls, text: str) -> "Budget":
        fields = {"basis": "max_basis", "degree": "max_degree", "pairs": "max_pairs",
                  "seconds": "max_seconds"}
        kw = {}
        for part in text.split(","):
            if not part.strip():
                continue
            name, _, val = part.partition("=")
            name = name.strip()
            if name not in fields:
                raise ValueError(f"unknown budget cap {name!r}")
            val = val.strip()
            if val.lower() in ("none", "inf", ""):
                kw[fields[name]] = None
            elif name == "seconds":
                kw[fields[name]] = float(val)
            else:
                kw[fields[name]] = int(float(val))
        return cls(**kw)

    def as_dict(self) -> dict:
        return {"basis": self.max_basis, "degree": self.max_degree,
                "pairs": self.max_pairs, "seconds": self.max_seconds}


DEFAULT_BUDGET = Budget()


class Packer:
    """Conversion between exponent tuples and packed ints for one (n, order matrix)."""

    def __init__(self, n: int, matrix):
        self.n = n
        self.rows = [[(i, c) for i, c in enumerate(r) if c] for r in matrix]
        self.m = len(self.rows)
        self.ebits = FIELD_BITS * n
        self.emask = (1 << self.ebits) - 1
        self.guard = 0
        for i in range(n):
            self.guard |= 1 << (FIELD_BITS * (n - 1 - i) + FIELD_BITS - 1)
        self.shifts = [FIELD_BITS * (n - 1 - i) for i in range(n)]
        self.kshifts = [self.ebits + FIELD_BITS * (self.m - 1 - r) for r in range(self.m)]

    def pack(self, exp) -> int:
        v = 0
        for i, x in enumerate(exp):
            if x > _MAX_EXP:
                raise BudgetExceeded("exponent", _MAX_EXP, x)
            v |= x << self.shifts[i]
        for r, row in enumerate(self.rows):
            k = 0
            for i, c in row:
                k += c * exp[i]
            if k > _FMASK:
                raise BudgetExceeded("order-key", _FMASK, k)
            v |= k << self.kshifts[r]
        return v

    def exps(self, K: int) -> tuple:
        return tuple((K >> s) & _FMASK for s in self.shifts)

    def degree(self, K: int) -> int:
        return sum((K >> s) & _FMASK for s in self.shifts)

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return (((b & self.emask) | g) - (a & self.emask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.exps(a), self.exps(b)
        return self.pack(tuple(x if x > y else y for x, y in zip(ea, eb)))

    def to_packed(self, f: Polynomial) -> dict:
        return {self.pack(e): c for e, c in f.coeffs.items()}

    def to_poly(self, ring, d: dict) -> Polynomial:
        return Polynomial(ring, {self.exps(K): c for K, c in d.items()}, True)


def _normalize(d: dict, p: int) -> dict:
    lm = max(d)
    lc = d[lm]
    if p:
        if lc == 1:
            return d
        inv = pow(lc, -1, p)
        return {k: c * inv % p for k, c in d.items()}
    if lc == 1:
        return d
    return {k: c / lc for k, c in d.items()}


def reduce_packed(f: dict, basis, packer: Packer, p: int, full: bool = True) -> dict:
    """Normal form of ``f`` modulo monic packed polynomials.

    ``basis`` is a list of (leading key, tail items) with monic leading term.
    """
    d = dict(f)
    if not d:
        return d
    heap = [-k for k in d]
    heapq.heapify(heap)
    out = {}
    divides = packer.divides
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        K = -pop(heap)
        c = d.pop(K, None)
        if c is None:
            continue
        for lm, tail in basis:
            if divides(lm, K):
                shift = K - lm
                if p:
                    for tk, tc in tail:
                        t = tk + shift
                        v = d.get(t)
                        if v is None:
                            d[t] = (-c * tc) % p
                            push(heap, -t)
                        else:
                            v = (v - c * tc) % p
                            if v:
                                d[t] = v
                            else:
                                del d[t]
                else:
                    for tk, tc in tail:
                        t = tk + shift
                        v = d.get(t)
                        if v is None:
                            d[t] = -c * tc
                            push(heap, -t)
                        else:
                            v = v - c * tc
                            if v:
                                d[t] = v
                            else:
                                del d[t]
                break
        else:
            out[K] = c
            if not full:
                out.update(d)
                return out
    return out


def _entry(d: dict):
    lm = max(d)
    return lm, sorted(((k, c) for k, c in d.items() if k != lm), reverse=True)


class GroebnerEngine:
    """One Buchberger run; see :func:`groebner_basis` for the public entry point."""

    def __init__(self, ring, matrix, budget: Budget | None = None):
        self.ring = ring
        self.packer = Packer(ring.nvars, matrix)
        self.p = ring.field.p
        self.budget = budget or DEFAULT_BUDGET
        self.polys: list[dict] = []
        self.lms: list[int] = []
        self.sugar: list[int] = []
        self.stats = {"pairs": 0, "reductions_to_zero": 0, "criteria_skips": 0}

    def _check_time(self, start):
        cap = self.budget.max_seconds
        if cap is not None and time.monotonic() - start > cap:
            raise BudgetExceeded("seconds", cap, round(time.monotonic() - start, 2))

    def run(self, gens) -> list[dict]:
        P = self.packer
        p = self.p
        start = time.monotonic()
        budget = self.budget
        # start from the generators, sorted by degree, reduced against each other lazily
        items = []
        for g in gens:
            if g:
                d = P.to_packed(g)
                items.append((g.total_degree(), max(d), d))
        items.sort(key=lambda t: (t[0], t[1]))
        G: list[int] = []           # indices of active basis elements
        pairs: list = []            # heap of (sugar, lcm, i, j)
        active_red: list = []       # reducers (lm, tail) of all polys found so far
        for deg, _, d in items:
            d = reduce_packed(d, active_red, P, p)
            if not d:
                continue
            d = _normalize(d, p)
            idx = self._add(d, deg)
            active_red.append(_entry(d))
            G, pairs = self._update(G, pairs, idx)
        while pairs:
            self._check_time(start)
            s, lcm, i, j = heapq.heappop(pairs)
            self.stats["pairs"] += 1
            if budget.max_pairs is not None and self.stats["pairs"] > budget.max_pairs:
                raise BudgetExceeded("pairs", budget.max_pairs, self.stats["pairs"])
            if budget.max_degree is not None and P.degree(lcm) > budget.max_degree:
                raise BudgetExceeded("degree", budget.max_degree, P.degree(lcm))
            sp = self._spoly(i, j, lcm)
            h = reduce_packed(sp, active_red, P, p)
            if not h:
                self.stats["reductions_to_zero"] += 1
                continue
            h = _normalize(h, p)
            idx = self._add(h, s)
            if budget.max_basis is not None and len(self.polys) > budget.max_basis:
                raise BudgetExceeded("basis", budget.max_basis, len(self.polys))
            active_red.append(_entry(h))
            G, pairs = self._update(G, pairs, idx)
        return self._reduce_basis(G)

    def _add(self, d, sugar) -> int:
        self.polys.append(d)
        self.lms.append(max(d))
        self.sugar.append(max(sugar, self.packer.degree(max(d))))
        return len(self.polys) - 1

    def _spoly(self, i, j, lcm) -> dict:
        p = self.p
        fi, fj = self.polys[i], self.polys[j]
        si, sj = lcm - self.lms[i], lcm - self.lms[j]
        out = {}
        for k, c in fi.items():
            out[k + si] = c
        get = out.get
        for k, c in fj.items():
            t = k + sj
            v = get(t)
            if v is None:
                out[t] = (-c) % p if p else -c
            else:
                v = (v - c) % p if p else v - c
                if v:
                    out[t] = v
                else:
                    del out[t]
        return out

    def _update(self, G, pairs, h):
        """Gebauer-Moeller installation of the new element h."""
        P = self.packer
        lms = self.lms
        lh = lms[h]
        divides = P.divides
        # candidate new pairs
        C = []
        for g in G:
            C.append((P.lcm(lms[g], lh), g))
        D = []
        for idx, (l1, g1) in enumerate(C):
            coprime = l1 == lms[g1] + lh
            if coprime:
                D.append((l1, g1, True))
                continue
            dominated = False
            for jdx, (l2, g2) in enumerate(C):
                if jdx != idx and divides(l2, l1) and (l2 != l1 or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                for l2, g2, _ in D:
                    if divides(l2, l1):
                        dominated = True
                        break
            if not dominated:
                D.append((l1, g1, False))
            else:
                self.stats["criteria_skips"] += 1
        new_pairs = []
        for l, g, coprime in D:
            if coprime:
                self.stats["criteria_skips"] += 1
                continue
            s = max(self.sugar[g] + P.degree(l - lms[g]), self.sugar[h] + P.degree(l - lh))
            new_pairs.append((s, l, g, h))
        kept = []
        for pr in pairs:
            s, l, i, j = pr
            if divides(lh, l) and P.lcm(lms[i], lh) != l and P.lcm(lms[j], lh) != l:
                self.stats["criteria_skips"] += 1
                continue
            kept.append(pr)
        kept.extend(new_pairs)
        heapq.heapify(kept)
        G2 = [g for g in G if not divides(lh, lms[g])]
        G2.append(h)
        return G2, kept

    def _reduce_basis(self, G) -> list[dict]:
        P = self.packer
        p = self.p
        lms = self.lms
        # minimal: drop elements whose leading term is divisible by another's
        G = sorted(set(G), key=lambda i: lms[i])
        minimal = []
        for i in G:
            if any(P.divides(lms[j], lms[i]) for j in minimal):
                continue
            minimal = [j for j in minimal if not P.divides(lms[i], lms[j])]
            minimal.append(i)
        minimal.sort(key=lambda i: lms[i])
        reducers = [_entry(self.polys[i]) for i in minimal]
        out = []
        for k, i in enumerate(minimal):
            d = self.polys[i]
            lm = lms[i]
            tail = {t: c for t, c in d.items() if t != lm}
            others = reducers[:k] + reducers[k + 1:]
            tail = reduce_packed(tail, others, P, p)
            tail[lm] = d[lm]
            out.append(_normalize(tail, p))
        out.sort(key=max)
        return out


def groebner_basis_matrix(gens, ring, matrix, budget: Budget | None = None):
    """Reduced Groebner basis (as Polynomials) under the order given by ``matrix``.

    Over QQ the returned polynomials are primitive integer polynomials with
    positive leading coefficient; over GF(p) they are monic.
    """
    eng = GroebnerEngine(ring, matrix, budget)
    packed = eng.run(gens)
    out = []
    for d in packed:
        f = eng.packer.to_poly(ring, d)
        if not ring.field.p:
            f = _primitive_by_key(f, d, eng.packer)
        out.append(f)
    return out, eng


def _primitive_by_key(f: Polynomial, d: dict, packer: Packer) -> Polynomial:
    from math import gcd, lcm
    den = 1
    for c in f.coeffs.values():
        den = lcm(den, c.denominator)
    num = 0
    for c in f.coeffs.values():
        num = gcd(num, (c * den).numerator)
    s = Fraction(den, num)
    if d[max(d)] < 0:
        s = -s
    return Polynomial(f.ring, {e: c * s for e, c in f.coeffs.items()}, True)


class PackedBasis:
    """A reduced basis kept in packed form for repeated normal forms."""

    def __init__(self, ring, matrix, polys):
        self.ring = ring
        self.matrix = matrix
        self.packer = Packer(ring.nvars, matrix)
        self.p = ring.field.p
        self.polys = list(polys)
        self.entries = []
        for f in self.polys:
            if f:
                d = _normalize(self.packer.to_packed(f), self.p)
                self.entries.append(_entry(d))
        self.entries.sort(key=lambda t: t[0])

    def leading_exponents(self):
        return [self.packer.exps(lm) for lm, _ in self.entries]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if not f:
            return f
        d = reduce_packed(self.packer.to_packed(f), self.entries, self.packer, self.p)
        return self.packer.to_poly(self.ring, d)

    def reduces_to_zero(self, f: Polynomial) -> bool:
        if not f:
            return True
        return not reduce_packed(self.packer.to_packed(f), self.entries, self.packer, self.p)

    def is_unit(self) -> bool:
        return any(lm & self.packer.emask == 0 for lm, _ in self.entries)
