"""Hilbert series of monomial ideals by recursive pivot splitting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


def _padd(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _shift(a, k):
    return [0] * k + list(a)


def minimalize(gens):
    """Minimal generators of the monomial ideal spanned by exponent tuples."""
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for e in gens:
        if not any(all(a <= b for a, b in zip(m, e)) for m in out):
            out.append(e)
    return out


def hilbert_numerator(gens, n: int) -> list[int]:
    """K(t) with HS(A/I) = K(t)/(1-t)^n, for I generated by the given monomials."""
    return _numer(minimalize(gens), n)


def _numer(gens, n):
    if not gens:
        return [1]
    if any(not any(e) for e in gens):
        return [0]
    # all generators pairwise coprime: product of (1 - t^deg)
    support = [frozenset(i for i, x in enumerate(e) if x) for e in gens]
    used = set()
    coprime = True
    for s in support:
        if used & s:
            coprime = False
            break
        used |= s
    if coprime:
        out = [1]
        for e in gens:
            d = sum(e)
            out = _pmul(out, [1] + [0] * (d - 1) + [-1])
        return out
    # pivot on the variable occurring in the most non-coprime generators
    counts = [0] * n
    for e in gens:
        if sum(1 for x in e if x) > 1:
            for i, x in enumerate(e):
                if x:
                    counts[i] += 1
    i = max(range(n), key=lambda j: counts[j])
    exps = sorted(e[i] for e in gens if e[i] and sum(1 for x in e if x) > 1)
    k = exps[len(exps) // 2]
    pivot = tuple(k if j == i else 0 for j in range(n))
    # I + (pivot)
    plus = minimalize(list(gens) + [pivot])
    # I : pivot
    colon = minimalize([tuple(max(a - b, 0) for a, b in zip(e, pivot)) for e in gens])
    return _padd(_numer(plus, n), _shift(_numer(colon, n), k))


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series numerator/(1-t)^n plus derived invariants.

    ``dimension`` is the projective dimension (Krull dimension minus one);
    the unit ideal has dimension -1 and degree 0.
    """

    numerator: tuple[int, ...]
    nvars: int
    krull_dimension: int
    degree: int
    hilbert_polynomial: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return self.krull_dimension - 1

    @property
    def codimension(self) -> int:
        return self.nvars - self.krull_dimension

    def hilbert_function(self, d: int) -> int:
        n = self.nvars
        return sum(c * comb(d - j + n - 1, n - 1) for j, c in enumerate(self.numerator) if d - j >= 0)

    def polynomial_value(self, s) -> Fraction:
        return sum((c * Fraction(s) ** k for k, c in enumerate(self.hilbert_polynomial)), Fraction(0))

    def as_dict(self) -> dict:
        return {
            "numerator": list(self.numerator),
            "dimension": self.dimension,
            "degree": self.degree,
            "hilbert_polynomial": [str(c) for c in self.hilbert_polynomial],
        }


def _binom_poly(shift: int, k: int) -> list[Fraction]:
    """Coefficients (in s) of binomial(s + shift, k) as a polynomial."""
    out = [Fraction(1)]
    for i in range(k):
        # multiply by (s + shift - i) / (i + 1)
        a = Fraction(shift - i, i + 1)
        b = Fraction(1, i + 1)
        new = [Fraction(0)] * (len(out) + 1)
        for j, c in enumerate(out):
            new[j] += c * a
            new[j + 1] += c * b
        out = new
    return out


def hilbert_data_from_numerator(numer, n: int) -> HilbertData:
    numer = list(numer)
    while len(numer) > 1 and numer[-1] == 0:
        numer.pop()
    if not any(numer):
        return HilbertData(tuple(numer), n, 0, 0, ())
    # divide by (1 - t) as long as t = 1 is a root
    m = list(numer)
    k = 0
    while sum(m) == 0:
        # synthetic division by (1 - t): m(t) = (1 - t) q(t)
        q = []
        acc = 0
        for c in m[:-1]:
            acc += c
            q.append(acc)
        m = q
        k += 1
    d = n - k
    degree = sum(m)
    hp = [Fraction(0)] * max(d, 1)
    if d > 0:
        for j, c in enumerate(m):
            for idx, v in enumerate(_binom_poly(d - 1 - j, d - 1)):
                hp[idx] += c * v
    while len(hp) > 1 and hp[-1] == 0:
        hp.pop()
    return HilbertData(tuple(numer), n, d, degree, tuple(hp))


def monomial_hilbert(lead_exponents, n: int) -> HilbertData:
    return hilbert_data_from_numerator(hilbert_numerator(lead_exponents, n), n)
