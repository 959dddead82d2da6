"""Degree-by-degree linear algebra for maps of graded free modules (standard grading)."""
from __future__ import annotations

from .linalg import Echelon, nullspace
from .poly import exponents_of_total_degree


def piece_basis(module, d: int) -> list[tuple]:
    """Basis (summand index, exponent) of the degree-d piece of a free module.

    Summand A(t) contributes the monomials of degree d + t.
    """
    n = module.ring.nvars
    out = []
    for i, t in enumerate(module.twists):
        for e in exponents_of_total_degree(n, d + t):
            out.append((i, e))
    return out


def apply_map(entries, vec: dict, field) -> dict:
    """Image of a sparse vector {(j, exp): c} under a matrix of polynomials."""
    p = field.p
    out: dict = {}
    for (j, e), c in vec.items():
        for i, row in enumerate(entries):
            f = row[j]
            if not f:
                continue
            for fe, fc in f.coeffs.items():
                key = (i, tuple(a + b for a, b in zip(e, fe)))
                v = out.get(key, 0) + c * fc
                if p:
                    v %= p
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def image_vectors(phi, d: int) -> list[dict]:
    """Images of the degree-d basis of phi's source, as sparse vectors in the target."""
    F = phi.ring.field
    return [apply_map(phi.entries, {b: F.one()}, F) for b in piece_basis(phi.source, d)]


def piece_rank(phi, d: int) -> int:
    """Rank of phi restricted to degree d."""
    tgt = {b: k for k, b in enumerate(piece_basis(phi.target, d))}
    E = Echelon(phi.ring.field)
    for v in image_vectors(phi, d):
        E.add({tgt[k]: c for k, c in v.items()})
    return E.rank


def coker_dim(phi, d: int) -> int:
    """dim_k of the degree-d piece of coker(phi)."""
    return len(piece_basis(phi.target, d)) - piece_rank(phi, d)


def kernel_piece(phi, d: int) -> list[dict]:
    """Basis of the degree-d piece of ker(phi) as sparse vectors {(j, exp): c}."""
    src = piece_basis(phi.source, d)
    tgt = {}
    rows: dict = {}
    F = phi.ring.field
    for col, b in enumerate(src):
        for k, c in apply_map(phi.entries, {b: F.one()}, F).items():
            r = tgt.setdefault(k, len(tgt))
            rows.setdefault(r, {})[col] = c
    null = nullspace(list(rows.values()), len(src), F)
    return [{src[i]: v for i, v in enumerate(x) if v} for x in null]


class GradedCokernel:
    """The graded pieces of coker(phi) with their multiplication maps.

    Each piece gets the basis of target monomials that are not pivots of the
    reduced image, so a vector's coordinates are its normal form there.
    """

    def __init__(self, phi):
        self.phi = phi
        self.field = phi.ring.field
        self._cache: dict = {}

    def _piece(self, d):
        hit = self._cache.get(d)
        if hit is not None:
            return hit
        tbasis = piece_basis(self.phi.target, d)
        index = {b: k for k, b in enumerate(tbasis)}
        E = Echelon(self.field)
        for v in image_vectors(self.phi, d):
            E.add({index[k]: c for k, c in v.items()})
        free = [k for k in range(len(tbasis)) if k not in E.pivots]
        hit = (tbasis, index, E, free)
        self._cache[d] = hit
        return hit

    def dim(self, d: int) -> int:
        return len(self._piece(d)[3])

    def basis(self, d: int) -> list[tuple]:
        tbasis, _, _, free = self._piece(d)
        return [tbasis[k] for k in free]

    def coordinates(self, vec: dict, d: int) -> list:
        """Coordinates in the piece basis of the class of a target vector of degree d."""
        _, index, E, free = self._piece(d)
        r = E.reduce({index[k]: c for k, c in vec.items() if c})
        return [r.get(k, self.field.zero()) for k in free]

    def multiplication(self, j: int, d: int) -> list[list]:
        """Matrix of multiplication by variable j from piece d to piece d + 1."""
        n = self.phi.ring.nvars
        step = tuple(1 if i == j else 0 for i in range(n))
        cols = []
        for (i, e) in self.basis(d):
            e2 = tuple(a + b for a, b in zip(e, step))
            cols.append(self.coordinates({(i, e2): self.field.one()}, d + 1))
        rows = self.dim(d + 1)
        return [[cols[c][r] for c in range(len(cols))] for r in range(rows)]
