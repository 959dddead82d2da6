"""Monomial orders, each realized by a nonnegative integer weight matrix.

Every supported order compares exponent vectors e by the tuple M*e for a
square-or-taller matrix M with nonnegative entries.  The key is linear in
e, which the Groebner engine exploits: monomial multiplication becomes
addition of packed keys.
"""
from __future__ import annotations

from dataclasses import dataclass


def _grevlex_rows(n: int, offset: int, total: int):
    # (deg, e0+..+e_{n-2}, ..., e0): degree first, then reverse lex.
    rows = [[0] * total for _ in range(n)]
    for j in range(n):
        rows[0][offset + j] = 1
    for r in range(1, n):
        upto = n - 1 - r
        for j in range(upto + 1):
            rows[r][offset + j] = 1
    return rows


_KEY_CACHE: dict = {}


def key_from_matrix(matrix):
    rows = [[(i, c) for i, c in enumerate(r) if c] for r in matrix]

    def key(exp):
        return tuple(sum(c * exp[i] for i, c in r) for r in rows)
    return key


def elimination_matrix(n: int, drop) -> list[list[int]]:
    """Block order: grevlex on the variables in ``drop``, then grevlex on the rest."""
    drop = sorted(set(drop))
    keep = [i for i in range(n) if i not in drop]
    rows = []
    for block in (drop, keep):
        if not block:
            continue
        sub = _grevlex_rows(len(block), 0, len(block))
        for r in sub:
            full = [0] * n
            for j, c in enumerate(r):
                full[block[j]] = c
            rows.append(full)
    return rows


def grevlex_last_matrix(n: int, last: int) -> list[list[int]]:
    """grevlex in which variable ``last`` is the smallest variable."""
    perm = [i for i in range(n) if i != last] + [last]
    rows = []
    for r in _grevlex_rows(n, 0, n):
        full = [0] * n
        for j, c in enumerate(r):
            full[perm[j]] = c
        rows.append(full)
    return rows


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, block_elimination(split) or weighted(weights).

    ``block_elimination(split)`` compares the first ``split`` variables by
    grevlex first and breaks ties with grevlex on the rest, so it eliminates
    the first block.  ``weighted`` compares by the weight vector then grevlex.
    """

    kind: str = "grevlex"
    split: int = 0
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block_elimination", "weighted"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "weighted":
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
            if not self.weights or any(w < 0 for w in self.weights):
                raise ValueError("weights must be a nonempty list of nonnegative integers")

    @classmethod
    def grevlex(cls):
        return cls("grevlex")

    @classmethod
    def lex(cls):
        return cls("lex")

    @classmethod
    def block(cls, split: int):
        return cls("block_elimination", split=split)

    @classmethod
    def weighted(cls, weights):
        return cls("weighted", weights=tuple(weights))

    @classmethod
    def from_text(cls, text: str) -> "MonomialOrder":
        text = text.strip()
        if text in ("grevlex", "lex"):
            return cls(text)
        if text.startswith("block:"):
            return cls.block(int(text.split(":", 1)[1]))
        if text.startswith("weighted:"):
            return cls.weighted(int(w) for w in text.split(":", 1)[1].split(","))
        raise ValueError(f"unknown monomial order {text!r}")

    def __str__(self):
        if self.kind == "block_elimination":
            return f"block:{self.split}"
        if self.kind == "weighted":
            return "weighted:" + ",".join(map(str, self.weights))
        return self.kind

    def matrix(self, n: int) -> list[list[int]]:
        if self.kind == "grevlex":
            return _grevlex_rows(n, 0, n)
        if self.kind == "lex":
            return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        if self.kind == "block_elimination":
            k = self.split
            if not 0 <= k <= n:
                raise ValueError("block split out of range")
            rows = []
            if k:
                rows += _grevlex_rows(k, 0, n)
            if n - k:
                rows += _grevlex_rows(n - k, k, n)
            return rows
        if len(self.weights) != n:
            raise ValueError("weight vector length must equal the variable count")
        return [list(self.weights)] + _grevlex_rows(n, 0, n)

    def key(self, exp):
        """Sort key: larger key means larger monomial."""
        return self.key_function(len(exp))(exp)

    def key_function(self, n: int):
        fn = _KEY_CACHE.get((self, n))
        if fn is None:
            fn = key_from_matrix(self.matrix(n))
            _KEY_CACHE[(self, n)] = fn
        return fn

    def is_graded(self) -> bool:
        """True when the first key row is the standard total degree."""
        return self.kind in ("grevlex",) or (self.kind == "block_elimination" and self.split == 0)
