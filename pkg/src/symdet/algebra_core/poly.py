"""Sparse polynomials over an exact field, plus the text parser."""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from math import gcd, lcm

from .field import CoefficientError
from .ring import RingSpec


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


class Polynomial:
    """Immutable sparse polynomial: a dict from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: RingSpec, coeffs=None, _clean: bool = False):
        self.ring = ring
        if coeffs is None:
            coeffs = {}
        if not _clean:
            F = ring.field
            n = ring.nvars
            clean = {}
            for e, c in coeffs.items():
                e = tuple(e)
                if len(e) != n or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent {e} for {n} variables")
                clean[e] = F.add(clean.get(e, F.zero()), F(c))
            coeffs = {e: c for e, c in clean.items() if c}
        self.coeffs = coeffs
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, ring):
        return cls(ring, {}, True)

    @classmethod
    def constant(cls, ring, c):
        c = ring.field(c)
        return cls(ring, {(0,) * ring.nvars: c} if c else {}, True)

    @classmethod
    def one(cls, ring):
        return cls.constant(ring, 1)

    @classmethod
    def var(cls, ring, which):
        i = ring.index(which) if isinstance(which, str) else which
        e = [0] * ring.nvars
        e[i] = 1
        return cls(ring, {tuple(e): ring.field.one()}, True)

    @classmethod
    def monomial(cls, ring, exp, c=1):
        c = ring.field(c)
        return cls(ring, {tuple(exp): c} if c else {}, True)

    @classmethod
    def gens(cls, ring):
        return [cls.var(ring, i) for i in range(ring.nvars)]

    # basic queries
    @property
    def field(self):
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    @property
    def terms(self) -> list:
        """(exponent, coefficient) pairs, largest first in graded reverse lex."""
        return sorted(self.coeffs.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def multidegrees(self) -> set:
        md = self.ring.multidegree
        return {md(e) for e in self.coeffs}

    def is_homogeneous(self, d=None) -> bool:
        degs = self.multidegrees()
        if not degs:
            return True
        if len(degs) > 1:
            return False
        if d is None:
            return True
        if isinstance(d, int):
            d = (d,)
        return next(iter(degs)) == tuple(d)

    @property
    def degree(self):
        """Multidegree of a nonzero homogeneous polynomial (an int for Z-gradings)."""
        degs = self.multidegrees()
        if len(degs) != 1:
            raise ValueError("degree is defined for nonzero homogeneous polynomials only")
        d = next(iter(degs))
        return d[0] if len(d) == 1 else d

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.coeffs)

    def constant_value(self):
        return self.coeffs.get((0,) * self.ring.nvars, self.field.zero())

    def variables(self) -> set:
        return {i for e in self.coeffs for i, x in enumerate(e) if x}

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.coeffs), default=-1)

    def homogeneous_components(self) -> dict:
        out = {}
        md = self.ring.multidegree
        for e, c in self.coeffs.items():
            out.setdefault(md(e), {})[e] = c
        return {d: Polynomial(self.ring, cs, True) for d, cs in out.items()}

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c if not p else (v + c) % p
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out, True)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        if p:
            return Polynomial(self.ring, {e: p - c for e, c in self.coeffs.items()}, True)
        return Polynomial(self.ring, {e: -c for e, c in self.coeffs.items()}, True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        F = self.field
        c = F(c)
        if not c:
            return Polynomial.zero(self.ring)
        if F.p:
            return Polynomial(self.ring, {e: v * c % F.p for e, v in self.coeffs.items()}, True)
        return Polynomial(self.ring, {e: v * c for e, v in self.coeffs.items()}, True)

    def mul_term(self, exp, c):
        """Multiply by the single term c * x^exp."""
        F = self.field
        if not c:
            return Polynomial.zero(self.ring)
        if F.p:
            p = F.p
            return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c % p
                                          for e, v in self.coeffs.items()}, True)
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(e, exp)): v * c
                                      for e, v in self.coeffs.items()}, True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        p = self.field.p
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out, True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = Polynomial.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variable_names, frozenset(self.coeffs.items())))
        return self._hash

    # orders and normalization
    def leading_exponent(self, order=None):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading term")
        key = order.key if order is not None else _grevlex_key
        return max(self.coeffs, key=key)

    def leading_coefficient(self, order=None):
        return self.coeffs[self.leading_exponent(order)]

    def monic(self, order=None):
        if not self.coeffs:
            return self
        return self.scale(self.field.inv(self.leading_coefficient(order)))

    def primitive(self, order=None):
        """Canonical scalar normalization.

        Over QQ: integer coefficients with gcd 1 and positive leading
        coefficient. Over GF(p): monic.
        """
        if not self.coeffs:
            return self
        if self.field.p:
            return self.monic(order)
        den = 1
        for c in self.coeffs.values():
            den = lcm(den, c.denominator)
        num = 0
        for c in self.coeffs.values():
            num = gcd(num, (c * den).numerator)
        s = Fraction(den, num)
        if self.leading_coefficient(order) < 0:
            s = -s
        return Polynomial(self.ring, {e: c * s for e, c in self.coeffs.items()}, True)

    # evaluation and substitution
    def evaluate(self, point):
        """Value at a point (sequence of field elements)."""
        F = self.field
        p = F.p
        pt = [F(x) for x in point]
        total = F.zero()
        for e, c in self.coeffs.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * (x ** k if not p else pow(x, k, p))
                    if p:
                        v %= p
            total = total + v if not p else (total + v) % p
        return total

    def substitute(self, images, ring: RingSpec | None = None):
        """Ring map sending variable i to images[i] (Polynomials in ``ring``)."""
        ring = ring or (images[0].ring if images else self.ring)
        out = Polynomial.zero(ring)
        powers: dict = {}
        for e, c in self.coeffs.items():
            term = Polynomial.constant(ring, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = images[i] ** k
                    term = term * powers[key]
            out = out + term
        return out

    def map_to(self, ring: RingSpec, index_map) -> "Polynomial":
        """Re-embed into ``ring``; variable i goes to variable index_map[i]."""
        n = ring.nvars
        out = {}
        for e, c in self.coeffs.items():
            new = [0] * n
            for i, k in enumerate(e):
                if k:
                    if index_map[i] is None:
                        raise ValueError("polynomial uses a dropped variable")
                    new[index_map[i]] += k
            out[tuple(new)] = c
        if ring.field != self.ring.field:
            return Polynomial(ring, out)
        return Polynomial(ring, out, True)

    def derivative(self, i: int):
        F = self.field
        out = {}
        for e, c in self.coeffs.items():
            if e[i]:
                v = F.mul(c, F(e[i]))
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return Polynomial(self.ring, out, True)

    def divide_exact(self, other: "Polynomial") -> "Polynomial":
        """Quotient when ``other`` divides self; raises ArithmeticError otherwise."""
        q, r = divmod_poly(self, other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    # display
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def divmod_poly(f: Polynomial, g: Polynomial):
    """Multivariate division of f by a single g under graded reverse lex."""
    if not g.coeffs:
        raise ZeroDivisionError("division by zero polynomial")
    F = f.field
    p = F.p
    lg = g.leading_exponent()
    inv = F.inv(g.coeffs[lg])
    rem = dict(f.coeffs)
    heap = [tuple(-x for x in _grevlex_key(e)) + (e,) for e in rem]
    heapq.heapify(heap)
    quo = {}
    rest = {}
    gitems = list(g.coeffs.items())
    while heap:
        e = heapq.heappop(heap)[-1]
        c = rem.pop(e, None)
        if c is None:
            continue
        while heap and heap[0][-1] == e:
            heapq.heappop(heap)
        if all(a >= b for a, b in zip(e, lg)):
            m = tuple(a - b for a, b in zip(e, lg))
            q = c * inv % p if p else c * inv
            quo[m] = q
            for ge, gc in gitems:
                t = tuple(a + b for a, b in zip(ge, m))
                if t == e:
                    continue
                v = rem.get(t)
                if v is None:
                    v = -q * gc
                    heapq.heappush(heap, tuple(-x for x in _grevlex_key(t)) + (t,))
                else:
                    v = v - q * gc
                if p:
                    v %= p
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        else:
            rest[e] = c
    return Polynomial(f.ring, quo, True), Polynomial(f.ring, rest, True)


def format_polynomial(f: Polynomial) -> str:
    if not f.coeffs:
        return "0"
    F = f.field
    names = f.ring.variable_names
    parts = []
    for e, c in f.terms:
        c = F.balanced(c)
        neg = c < 0
        a = -c if neg else c
        mono = "*".join(names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
        if isinstance(a, Fraction) and a.denominator != 1:
            coef = f"{a.numerator}/{a.denominator}"
        else:
            coef = str(int(a))
        if mono:
            body = mono if coef == "1" else f"{coef}*{mono}"
        else:
            body = coef
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    """Syntax error in a polynomial or CMF text, with a character position."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.message = message
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"column {position + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnknownVariableError(ParseError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor (('*'|'/') factor)*     ('/' only by a nonzero constant)
    # factor := atom ('^' integer)?
    # atom   := integer | variable | '(' expr ')'

    def __init__(self, text, ring):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        f = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return f

    def expr(self):
        sign = 1
        t = self.peek()
        if t == ("op", "-", t[2]) or t == ("op", "+", t[2]):
            self.take()
            sign = -1 if t[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if t[1] == "+" else f - g
            else:
                return f

    def term(self):
        f = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                f = f * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                g = self.factor()
                if not g.is_constant():
                    raise ParseError("division only by a constant", t[2])
                if not g:
                    raise ParseError("coefficient not in field: division by zero", t[2])
                f = f.scale(self.ring.field.inv(g.constant_value()))
            else:
                return f

    def factor(self):
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            k = self.take()
            if k[0] != "num":
                raise ParseError("exponent must be a nonnegative integer", k[2])
            return base ** int(k[1])
        return base

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            nxt = self.peek()
            if nxt[0] == "name" and nxt[2] == pos + len(val) and nxt[1][:1].isalpha():
                raise ParseError("missing '*' between number and variable", nxt[2])
            try:
                return Polynomial.constant(self.ring, int(val))
            except CoefficientError as exc:
                raise ParseError(str(exc), pos) from None
        if kind == "name":
            try:
                return Polynomial.var(self.ring, val)
            except KeyError:
                raise UnknownVariableError(f"unknown variable {val!r}", pos) from None
        if kind == "op" and val == "(":
            f = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                raise ParseError("expected ')'", close[2])
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_polynomial(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``text`` such as ``"y0^2+y2^2-4*y1*y3"`` into a polynomial of ``ring``.

    Raises ParseError (with position), UnknownVariableError, or ParseError for
    constants that are not in the field (e.g. 1/p over GF(p)).
    """
    if "." in text:
        raise ParseError("decimal constants are not exact", text.index("."))
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------- monomial bases

def exponents_of_total_degree(n: int, d: int):
    """All exponent tuples of n variables with total degree d (lex descending)."""
    if d < 0:
        return []
    if n == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in exponents_of_total_degree(n - 1, d - a):
            out.append((a,) + rest)
    return out


def monomials_of_degree(ring: RingSpec, d) -> list[tuple]:
    """Exponent tuples of (multi)degree d under the ring's grading."""
    if isinstance(d, int):
        d = (d,)
    d = tuple(d)
    if ring.grading_rank != len(d):
        raise ValueError("degree has the wrong length for this grading")
    if ring.is_standard:
        return exponents_of_total_degree(ring.nvars, d[0])
    # generic: the grading vectors are nonnegative, enumerate by bounded search
    if any(x < 0 for g in ring.grading for x in g):
        raise ValueError("negative gradings are not supported for enumeration")
    out = []
    n = ring.nvars

    def rec(i, remaining, acc):
        if i == n:
            if all(x == 0 for x in remaining):
                out.append(tuple(acc))
            return
        g = ring.grading[i]
        if not any(g):
            raise ValueError("degree-zero variable makes graded pieces infinite")
        k = 0
        while all(r - k * x >= 0 for r, x in zip(remaining, g)):
            acc.append(k)
            rec(i + 1, tuple(r - k * x for r, x in zip(remaining, g)), acc)
            acc.pop()
            k += 1
    rec(0, d, [])
    return out


def random_form(ring: RingSpec, d, rng, density: float = 1.0) -> Polynomial:
    """Seeded random homogeneous form of degree d (zero if d < 0 or the piece is empty)."""
    if isinstance(d, int) and d < 0:
        return Polynomial.zero(ring)
    if isinstance(d, tuple) and any(x < 0 for x in d):
        return Polynomial.zero(ring)
    F = ring.field
    coeffs = {}
    for e in monomials_of_degree(ring, d):
        if density >= 1.0 or rng.random() < density:
            c = F.random(rng)
            if c:
                coeffs[e] = c
    return Polynomial(ring, coeffs, True)
