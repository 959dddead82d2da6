"""Exact coefficient fields: the rationals and prime fields."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 31991

_WORD = 2**63


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class CoefficientError(ValueError):
    """A constant that does not live in the chosen field."""


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (characteristic 0) or Z/p for a word-sized prime p.

    Elements are ``Fraction`` over the rationals and plain ints in [0, p)
    over a prime field.
    """

    kind: str = "rationals"
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == "rationals":
            if self.characteristic != 0:
                raise ValueError("the rationals have characteristic 0")
        elif self.kind == "prime_field":
            p = self.characteristic
            if not (0 < p < _WORD) or not is_prime(p):
                raise ValueError(f"{p} is not a word-sized prime")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls("prime_field", p)

    @property
    def p(self) -> int:
        return self.characteristic

    def __str__(self) -> str:
        return "QQ" if self.p == 0 else f"GF({self.p})"

    # element handling
    def __call__(self, x) -> int | Fraction:
        """Coerce an int, Fraction or decimal-free string into the field."""
        if isinstance(x, str):
            x = _parse_constant(x)
        if self.p == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise CoefficientError(f"{x} is not defined modulo {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, int):
            return x % self.p
        raise CoefficientError(f"cannot coerce {x!r} into {self}")

    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng, nonzero: bool = False, bound: int = 20):
        """A seeded random element; small integers over QQ, uniform over GF(p)."""
        while True:
            if self.p == 0:
                x = Fraction(rng.randint(-bound, bound))
            else:
                x = rng.randrange(self.p)
            if x or not nonzero:
                return x

    def balanced(self, a) -> int | Fraction:
        """Representative in (-p/2, p/2] for display; identity over QQ."""
        if self.p == 0:
            return a
        return a - self.p if a > self.p // 2 else a

    def to_text(self, a) -> str:
        a = self.balanced(a)
        if isinstance(a, Fraction) and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))

    def cmf_header(self) -> str:
        return "field q" if self.p == 0 else f"field fp {self.p}"


_CONST = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def _parse_constant(text: str) -> Fraction:
    m = _CONST.match(text)
    if not m:
        raise CoefficientError(f"not an exact constant: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise CoefficientError("zero denominator")
    return Fraction(num, den)
