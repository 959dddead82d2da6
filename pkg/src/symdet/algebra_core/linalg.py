"""Sparse exact linear algebra over a FieldSpec (rows are dicts col -> value)."""
from __future__ import annotations

from .field import FieldSpec


def _dense_to_sparse(row):
    if isinstance(row, dict):
        return {k: v for k, v in row.items() if v}
    return {i: v for i, v in enumerate(row) if v}


class Echelon:
    """Incrementally built row-echelon form; each pivot row is monic."""

    def __init__(self, field: FieldSpec):
        self.F = field
        self.p = field.p
        self.pivots: dict[int, dict] = {}

    def reduce(self, row: dict) -> dict:
        p = self.p
        row = dict(row)
        while row:
            # eliminate against pivots in increasing column order
            hit = None
            for c in sorted(row):
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                return row
            f = row[hit]
            for c, v in self.pivots[hit].items():
                w = row.get(c, 0) - f * v
                if p:
                    w %= p
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
        return row

    def add(self, row) -> bool:
        """Insert a row; True if it was independent of the previous ones."""
        r = self.reduce(_dense_to_sparse(row))
        if not r:
            return False
        c = min(r)
        inv = self.F.inv(r[c])
        p = self.p
        self.pivots[c] = {k: (v * inv % p if p else v * inv) for k, v in r.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows, field: FieldSpec) -> int:
    E = Echelon(field)
    for r in rows:
        E.add(r)
    return E.rank


def rref(rows, field: FieldSpec):
    """Fully reduced row echelon form: dict pivot column -> sparse row."""
    E = Echelon(field)
    for r in rows:
        E.add(r)
    p = field.p
    piv = E.pivots
    for c in sorted(piv, reverse=True):
        row = piv[c]
        for c2 in sorted(piv):
            if c2 >= c:
                break
            other = piv[c2]
            f = other.get(c)
            if f:
                for k, v in row.items():
                    w = other.get(k, 0) - f * v
                    if p:
                        w %= p
                    if w:
                        other[k] = w
                    else:
                        other.pop(k, None)
    return piv


def nullspace(rows, ncols: int, field: FieldSpec) -> list[list]:
    """Basis of {x : A x = 0} for A given by its rows."""
    piv = rref(rows, field)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fcol in free:
        x = [field.zero()] * ncols
        x[fcol] = field.one()
        for pc, row in piv.items():
            v = row.get(fcol)
            if v:
                x[pc] = field.neg(v)
        basis.append(x)
    return basis


def solve(rows, rhs, ncols: int, field: FieldSpec):
    """One solution of A x = rhs, or None if inconsistent."""
    aug = []
    for r, b in zip(rows, rhs):
        r = _dense_to_sparse(r)
        if b:
            r[ncols] = b
        aug.append(r)
    piv = rref(aug, field)
    if ncols in piv:
        return None
    x = [field.zero()] * ncols
    for pc, row in piv.items():
        x[pc] = row.get(ncols, field.zero())
    return x


def matrix_rank_dense(mat, field: FieldSpec) -> int:
    return rank(mat, field)
