"""Beilinson layer on P^3: bundle summands, Hom spaces, Koszul models and block monads.

Omega^p(t) is modelled inside the Koszul complex of A = k[y0..y3]:
K_k(t) = Lambda^k V* (x) A(t - k) with d(e_S) = sum_{i in S} (-1)^pos(i) y_i e_{S - i}.
Its module of sections is ker(K_p(t) -> K_(p-1)(t)) = im(K_(p+1)(t) -> K_p(t)),
so it is generated by K_(p+1)(t) with relations from K_(p+2)(t).
"""
from __future__ import annotations

import random as _random
import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .algebra_core.field import FieldSpec
from .algebra_core.linalg import Echelon, nullspace, solve
from .algebra_core.modules import GradedFreeModule, SubmoduleBasis
from .algebra_core.pieces import GradedCokernel, coker_dim, piece_basis
from .algebra_core.poly import Polynomial, exponents_of_total_degree
from .algebra_core.ring import RingSpec
from .formmatrix import FormMatrix, cofactor_adjoint, determinant

P3_VARIABLES = ("y0", "y1", "y2", "y3")


def p3_ring(field: FieldSpec | None = None) -> RingSpec:
    return RingSpec.standard(P3_VARIABLES, field or FieldSpec.rationals())


class ShapeError(ValueError):
    """Summand lists or block shapes do not fit together."""


class LiftingError(ValueError):
    """A block does not land in the sections of its target summand."""


# ------------------------------------------------------------------ summands

@dataclass(frozen=True, order=True)
class SummandKind:
    """Omega^p(t) on P^3; p = 0 is the line bundle O(t)."""

    p: int
    t: int

    def __post_init__(self):
        if not 0 <= self.p <= 3:
            raise ValueError("Omega^p needs 0 <= p <= 3")

    @classmethod
    def line(cls, a: int) -> "SummandKind":
        return cls(0, a)

    @classmethod
    def cotangent(cls, p: int, t: int) -> "SummandKind":
        if not 1 <= p <= 3:
            raise ValueError("cotangent summands need 1 <= p <= 3")
        return cls(p, t)

    @property
    def is_line(self) -> bool:
        return self.p == 0

    @property
    def rank(self) -> int:
        return comb(3, self.p)

    def twist(self, k: int) -> "SummandKind":
        return SummandKind(self.p, self.t + k)

    def dual(self, shift: int = -5) -> "SummandKind":
        """S^dual(shift), using Omega^p dual = Omega^(3-p)(4)."""
        if self.p == 0:
            return SummandKind(0, shift - self.t)
        return SummandKind(3 - self.p, 4 - self.t + shift)

    def normalized(self) -> "SummandKind":
        """Omega^3(t) is O(t - 4)."""
        return SummandKind(0, self.t - 4) if self.p == 3 else self

    def label(self) -> str:
        return f"O({self.t})" if self.p == 0 else f"Omega^{self.p}({self.t})"

    __str__ = label

    @classmethod
    def from_text(cls, text: str) -> "SummandKind":
        s = text.replace(" ", "")
        m = re.fullmatch(r"O\((-?\d+)\)", s)
        if m:
            return cls.line(int(m.group(1)))
        m = re.fullmatch(r"Omega\^(\d)\((-?\d+)\)", s) or re.fullmatch(r"Omega\((\d),(-?\d+)\)", s)
        if m:
            return cls.cotangent(int(m.group(1)), int(m.group(2)))
        raise ValueError(f"cannot read summand {text!r}")


@dataclass(frozen=True)
class BundleSum:
    """An ordered direct sum of summands with multiplicities."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple((s, int(m)) for s, m in self.parts)
        if any(m < 0 for _, m in parts):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *items) -> "BundleSum":
        return cls(tuple(items))

    @classmethod
    def lines(cls, twists) -> "BundleSum":
        return cls(tuple((SummandKind.line(t), 1) for t in twists))

    def expand(self) -> list[SummandKind]:
        return [s for s, m in self.parts for _ in range(m)]

    @property
    def rank(self) -> int:
        return sum(s.rank * m for s, m in self.parts)

    @property
    def is_split(self) -> bool:
        return all(s.normalized().is_line for s, m in self.parts if m)

    def twist(self, k: int) -> "BundleSum":
        return BundleSum(tuple((s.twist(k), m) for s, m in self.parts))

    def dual(self, shift: int = -5) -> "BundleSum":
        return BundleSum(tuple((s.dual(shift), m) for s, m in self.parts))

    def h0(self, k: int = 0) -> int:
        return sum(m * bott_h0(s.p, s.t + k) for s, m in self.parts)

    def label(self) -> str:
        parts = [(s.label() if m == 1 else f"{m}{s.label()}") for s, m in self.parts if m]
        return " + ".join(parts) or "0"

    __str__ = label

    def to_cmf(self) -> list[str]:
        out = []
        for s, m in self.parts:
            body = f"O({s.t})" if s.p == 0 else f"Omega({s.p},{s.t})"
            out.append(f"summand {body} x{m}")
        return out


def expected_bundle_sum(pg: int, q: int, K2: int) -> BundleSum:
    """F = O + (K^2 - q + p_g - 9) O(-2) + q Omega^1(-1) + (p_g - 4) Omega^2."""
    a = K2 - q + pg - 9
    if a < 0 or pg < 4 or q < 0:
        raise ValueError(f"no expected bundle for (p_g, q, K^2) = ({pg}, {q}, {K2})")
    return BundleSum.of((SummandKind.line(0), 1), (SummandKind.line(-2), a),
                        (SummandKind.cotangent(1, -1), q), (SummandKind.cotangent(2, 0), pg - 4))


# ------------------------------------------------------------------ Bott numbers

def bott_h0(p: int, k: int) -> int:
    """h^0(P^3, Omega^p(k))."""
    if p == 0:
        return comb(k + 3, 3) if k >= 0 else 0
    if k <= p:
        return 0
    return comb(k + 3 - p, k) * comb(k - 1, p)


def hom_sheaf(src: SummandKind, tgt: SummandKind) -> SummandKind | None:
    """A summand isomorphic to Hom(src, tgt) when one of the two is a line bundle."""
    s, t = src.normalized(), tgt.normalized()
    if s.is_line:
        return SummandKind(t.p, t.t - s.t)
    if t.is_line:
        return SummandKind(3 - s.p, 4 - s.t + t.t)
    return None


def hom_space_dim(src: SummandKind, tgt: SummandKind, ring: RingSpec | None = None) -> int:
    """dim Hom(src, tgt) from Bott's formula; Koszul linear algebra for the rest."""
    s, t = src.normalized(), tgt.normalized()
    h = hom_sheaf(s, t)
    if h is not None:
        return bott_h0(h.p, h.t)
    if s.t - s.p == t.t - t.p:
        # Hom(Omega^j(j), Omega^i(i)) = Lambda^(j-i) V
        return comb(4, s.p - t.p) if s.p >= t.p else 0
    return len(hom_space_basis(src, tgt, ring))


def hom_tag(src: SummandKind, tgt: SummandKind) -> str:
    """Name of the abstract Hom space (the labels used for monad blocks)."""
    s, t = src.normalized(), tgt.normalized()
    if not s.is_line and not t.is_line:
        if s.t - s.p == t.t - t.p:
            k = s.p - t.p
            return "0" if k < 0 else _lambda_name(k)
        return f"Hom({s.label()},{t.label()})"
    h = hom_sheaf(s, t)
    if bott_h0(h.p, h.t) == 0:
        return "0"
    if h.p == 0:
        return f"S_{h.t}V*"
    if h.p == 2:
        j = h.t - 4
        return "V" if j == -1 else ("H0(T)" if j == 0 else f"H0(T({j}))")
    j = h.t - 4
    return "Lambda^2V" if j == -2 else ("H0(Lambda^2T)" if j == 0 else f"H0(Lambda^2T({j}))")


def _lambda_name(k: int) -> str:
    return {0: "k", 1: "V"}.get(k, f"Lambda^{k}V")


# ------------------------------------------------------------------ Koszul models

def subsets(k: int) -> list[tuple]:
    return list(combinations(range(4), k))


def koszul_differential(ring: RingSpec, k: int, t: int) -> FormMatrix:
    """K_k(t) -> K_(k-1)(t) for 1 <= k <= 4."""
    if not 1 <= k <= 4:
        raise ValueError("Koszul differentials exist for 1 <= k <= 4")
    src, tgt = subsets(k), subsets(k - 1)
    index = {T: i for i, T in enumerate(tgt)}
    R = ring
    rows = [[Polynomial.zero(R) for _ in src] for _ in tgt]
    for c, S in enumerate(src):
        for pos, i in enumerate(S):
            T = S[:pos] + S[pos + 1:]
            y = Polynomial.var(R, i)
            rows[index[T]][c] = y if pos % 2 == 0 else -y
    return FormMatrix(GradedFreeModule(R, (t - k,) * len(src)),
                      GradedFreeModule(R, (t - k + 1,) * len(tgt)), rows)


def contraction(k: int, j: int) -> list[list[int]]:
    """Integer matrix of e_S -> e_S _| e_j from Lambda^k to Lambda^(k-1)."""
    src, tgt = subsets(k), subsets(k - 1)
    index = {T: i for i, T in enumerate(tgt)}
    M = [[0] * len(src) for _ in tgt]
    for c, S in enumerate(src):
        if j in S:
            pos = S.index(j)
            M[index[S[:pos] + S[pos + 1:]]][c] = -1 if pos % 2 else 1
    return M


@dataclass(frozen=True)
class SummandModel:
    """Generators, relations and ambient free module of the sections of a summand."""

    summand: SummandKind
    generators: GradedFreeModule
    relations: FormMatrix | None
    ambient: GradedFreeModule
    to_ambient: FormMatrix
    condition: FormMatrix | None


def summand_model(s: SummandKind, ring: RingSpec) -> SummandModel:
    p, t = s.p, s.t
    if p == 0:
        M = GradedFreeModule(ring, (t,))
        return SummandModel(s, M, None, M, FormMatrix.identity(M), None)
    to_amb = koszul_differential(ring, p + 1, t)
    rel = koszul_differential(ring, p + 2, t) if p + 2 <= 4 else None
    return SummandModel(s, to_amb.source, rel, to_amb.target, to_amb, koszul_differential(ring, p, t))


def koszul_module(p: int, t: int, ring: RingSpec | None = None) -> FormMatrix:
    """Presentation of the graded module of sections of Omega^p(t)."""
    ring = ring or p3_ring()
    model = summand_model(SummandKind(p, t), ring)
    if model.relations is not None:
        return model.relations
    gens = model.generators
    return FormMatrix.zero(GradedFreeModule(ring, (gens.twists[0] - 1,)), gens)


def omega_section_dim(p: int, t: int, d: int, ring: RingSpec | None = None) -> int:
    """dim of the degree-d piece of the Koszul model of Omega^p(t)."""
    return coker_dim(koszul_module(p, t, ring), d)


# ------------------------------------------------------------------ Hom spaces

def hom_space_basis(src: SummandKind, tgt: SummandKind, ring: RingSpec | None = None) -> list[FormMatrix]:
    """Basis of Hom(src, tgt) as matrices generators(src) -> ambient(tgt).

    Solves psi o relations(src) = 0 and condition(tgt) o psi = 0 on the
    coefficients of a degree-0 map, so it is independent of Bott's formula.
    """
    ring = ring or p3_ring()
    F = ring.field
    S, T = summand_model(src, ring), summand_model(tgt, ring)
    n = ring.nvars
    G, Am = S.generators.twists, T.ambient.twists
    unknowns = []
    for i, a in enumerate(Am):
        for j, g in enumerate(G):
            for e in exponents_of_total_degree(n, a - g):
                unknowns.append((i, j, e))
    if not unknowns:
        return []
    eqs: dict = {}

    def add(key, u, c):
        row = eqs.setdefault(key, {})
        v = row.get(u, 0) + c
        if F.p:
            v %= F.p
        row[u] = v

    for u, (i, j, e) in enumerate(unknowns):
        if S.relations is not None:
            for r in range(S.relations.ncols):
                f = S.relations.entries[j][r]
                for fe, fc in f.coeffs.items():
                    add(("R", i, r, _addexp(e, fe)), u, fc)
        if T.condition is not None:
            for l in range(T.condition.nrows):
                f = T.condition.entries[l][i]
                for fe, fc in f.coeffs.items():
                    add(("K", l, j, _addexp(e, fe)), u, fc)
    null = nullspace(list(eqs.values()), len(unknowns), F)
    out = []
    for x in null:
        ent = [[Polynomial.zero(ring) for _ in G] for _ in Am]
        for u, c in enumerate(x):
            if c:
                i, j, e = unknowns[u]
                ent[i][j] = ent[i][j] + Polynomial.monomial(ring, e, c)
        out.append(FormMatrix(S.generators, T.ambient, ent))
    return out


def hom_space_dim_oracle(src: SummandKind, tgt: SummandKind, ring: RingSpec | None = None) -> int:
    return len(hom_space_basis(src, tgt, ring))


def _addexp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def lambda_basis(src: SummandKind, tgt: SummandKind, ring: RingSpec | None = None) -> list[FormMatrix]:
    """The maps Omega^j(j+k) -> Omega^i(i+k) given by contraction with e_S, |S| = j - i.

    Ordered like the subsets S, which is the Lambda-basis of Lambda^(j-i) V.
    """
    ring = ring or p3_ring()
    j, i = src.p, tgt.p
    if src.is_line or tgt.is_line or src.t - j != tgt.t - i or j < i:
        raise ShapeError("no Lambda-basis for this pair of summands")
    S = summand_model(src, ring)
    out = []
    for sub in subsets(j - i):
        C, k = _identity(comb(4, j)), j
        for a in sub:
            C, k = _matmul(contraction(k, a), C), k - 1
        const = FormMatrix(S.ambient, summand_model(tgt, ring).ambient,
                           [[Polynomial.constant(ring, c) for c in row] for row in C])
        out.append(const @ S.to_ambient)
    return out


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def coordinates_in(block: FormMatrix, basis: list[FormMatrix]):
    """Coefficients of block in a list of basis matrices, or None if it is not in their span."""
    F = block.ring.field
    keys: dict = {}
    cols = []
    for b in basis:
        cols.append(_flatten(b, keys))
    target = _flatten(block, keys)
    rows = [{c: col.get(k, 0) for c, col in enumerate(cols) if col.get(k)} for k in range(len(keys))]
    rhs = [target.get(k, 0) for k in range(len(keys))]
    if not basis:
        return [] if not any(rhs) else None
    return solve(rows, rhs, len(basis), F)


def _flatten(m: FormMatrix, keys: dict) -> dict:
    out = {}
    for i, row in enumerate(m.entries):
        for j, f in enumerate(row):
            for e, c in f.coeffs.items():
                out[keys.setdefault((i, j, e), len(keys))] = c
    return out


# ------------------------------------------------------------------ cohomology tables

def plurigenus(pg: int, q: int, K2: int, i: int) -> int:
    """h^0(iK) for a minimal surface of general type."""
    chi = 1 - q + pg
    if i < 0:
        return 0
    if i == 0:
        return 1
    if i == 1:
        return pg
    return chi + i * (i - 1) * K2 // 2


def surface_cohomology(pg: int, q: int, K2: int, qdeg: int, i: int) -> int:
    """h^qdeg(O_X(iK))."""
    if qdeg == 0:
        return plurigenus(pg, q, K2, i)
    if qdeg == 1:
        return q if i in (0, 1) else 0
    if qdeg == 2:
        return plurigenus(pg, q, K2, 1 - i)
    return 0


@dataclass(frozen=True)
class CohomologyTable:
    """h^q(F(m)(-p)) for F the direct image of O_X and p, q in 0..3.

    ``grid[q]`` lists the columns p = 3, 2, 1, 0 from left to right.
    """

    grid: tuple
    pg: int
    q: int
    K2: int
    m: int

    def entry(self, p: int, qdeg: int) -> int:
        return self.grid[qdeg][3 - p]

    def row(self, qdeg: int) -> tuple:
        return self.grid[qdeg]

    @property
    def bottom_row(self) -> tuple:
        return self.grid[0]

    def serre_reflection(self) -> "CohomologyTable":
        """(p, q) -> (3 - p, 2 - q): Serre duality h^q(iK) = h^(2-q)((1-i)K) for m = 2."""
        rows = []
        for qd in range(4):
            if qd == 3:
                rows.append(self.grid[3])
            else:
                rows.append(tuple(self.entry(3 - p, 2 - qd) for p in (3, 2, 1, 0)))
        return CohomologyTable(tuple(rows), self.pg, self.q, self.K2, self.m)

    def is_serre_symmetric(self) -> bool:
        return self.serre_reflection().grid == self.grid

    def vanishing_ok(self) -> bool:
        if any(self.grid[3]):
            return False
        for p in range(4):
            i = self.m - p
            if i >= 2 and self.entry(p, 2):
                return False
            if i not in (0, 1) and self.entry(p, 1):
                return False
        return all(x >= 0 for r in self.grid for x in r)

    def render(self) -> str:
        lines = []
        for qd in (3, 2, 1, 0):
            lines.append(" ".join(f"{x:>4}" for x in self.grid[qd]))
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"pg": self.pg, "q": self.q, "K2": self.K2, "m": self.m,
                "rows": {f"h{qd}": list(self.grid[qd]) for qd in range(4)}}


def beilinson_table(pg: int, q: int, K2: int, m: int = 3) -> CohomologyTable:
    """The Beilinson table of F(m) for F the direct image of O_X under the projection."""
    if m not in (2, 3):
        raise ValueError("tables are available for m = 2 and m = 3")
    if pg < 4 or q < 0 or K2 < 1:
        raise ValueError("need p_g >= 4, q >= 0 and K^2 >= 1")
    if 1 - q + pg <= 0:
        raise ValueError("chi(O_X) must be positive for a surface of general type")
    rows = tuple(tuple(surface_cohomology(pg, q, K2, qd, m - p) for p in (3, 2, 1, 0)) for qd in range(4))
    return CohomologyTable(rows, pg, q, K2, m)


# ------------------------------------------------------------------ contraction differential

@dataclass
class DifferentialBlock:
    """d1 on row q from column p to p - 1: sum_j mu_j (x) contraction_j.

    ``mu[j]`` is the matrix of multiplication by y_j from H^q(F(m-p)) to
    H^q(F(m-p+1)); ``known`` is False when no multiplication data was supplied
    and zero matrices stand in for it.
    """

    q: int
    p: int
    source_dim: int
    target_dim: int
    mu: list
    known: bool

    def concrete(self, field: FieldSpec) -> list[list]:
        """The constant matrix on H (x) Lambda^p -> H' (x) Lambda^(p-1) (Kronecker ordering)."""
        a, b = comb(4, self.p), comb(4, self.p - 1)
        out = [[field.zero()] * (self.source_dim * a) for _ in range(self.target_dim * b)]
        for j in range(4):
            C = contraction(self.p, j)
            mu = self.mu[j]
            for r in range(self.target_dim):
                for s in range(self.source_dim):
                    x = mu[r][s]
                    if not x:
                        continue
                    for T in range(b):
                        for S in range(a):
                            if C[T][S]:
                                out[r * b + T][s * a + S] = field.add(out[r * b + T][s * a + S],
                                                                      field.mul(x, field(C[T][S])))
        return out


@dataclass
class BeilinsonSkeleton:
    """The terms H^q(F(m-p)) (x) Omega^p(p) and the differentials d1 of a table."""

    table: CohomologyTable
    field: FieldSpec
    dims: dict
    blocks: dict = field(default_factory=dict)

    def block(self, q: int, p: int) -> DifferentialBlock:
        return self.blocks[(q, p)]

    def concrete(self, q: int, p: int) -> list[list]:
        return self.blocks[(q, p)].concrete(self.field)

    def composition_vanishes(self) -> bool:
        """d1 o d1 = 0 on every row."""
        F = self.field
        for q in range(4):
            for p in (3, 2):
                A = self.concrete(q, p - 1)
                B = self.concrete(q, p)
                if not A or not B or not A[0] or not B[0]:
                    continue
                for i in range(len(A)):
                    for j in range(len(B[0])):
                        acc = F.zero()
                        for k in range(len(B)):
                            if A[i][k] and B[k][j]:
                                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
                        if acc:
                            return False
        return True


def apply_tensor(mu_x: list[list], k: int, p: int, s: list, S: tuple) -> dict:
    """(x (x) e_k)(s (x) e_S) = (x s) (x) (e_S _| e_k) as {(row, subset): coefficient}."""
    if k not in S:
        return {}
    pos = S.index(k)
    sign = -1 if pos % 2 else 1
    T = S[:pos] + S[pos + 1:]
    out = {}
    for r, row in enumerate(mu_x):
        v = sum(row[c] * s[c] for c in range(len(s)))
        if v:
            out[(r, T)] = sign * v
    return out


def contraction_differential(table: CohomologyTable, module: FormMatrix | None = None,
                             field: FieldSpec | None = None) -> BeilinsonSkeleton:
    """d1 = sum_j y_j (x) y_j^* on the Beilinson table of F(m).

    With ``module`` (a presentation of the section module of F) the bottom
    row uses its multiplication maps and the H^2 row their transposes.
    Without it, the H^2 row for m = 3 uses the Serre dual of
    H^0(O_X) -> H^0(K) = V* + W, which is canonical; the remaining
    multiplications are unknown and represented by zero matrices.
    """
    field = field or (module.ring.field if module is not None else FieldSpec.rationals())
    m = table.m
    dims = {(qd, p): table.entry(p, qd) for qd in range(4) for p in range(4)}
    coker = GradedCokernel(module) if module is not None else None
    if coker is not None:
        for p in range(4):
            dims[(0, p)] = coker.dim(m - p)
            dims[(2, p)] = coker.dim(1 - (m - p)) if 1 - (m - p) >= 0 else 0
    skel = BeilinsonSkeleton(table, field, dims)
    for qd in range(4):
        for p in (3, 2, 1):
            sd, td = dims[(qd, p)], dims[(qd, p - 1)]
            mu, known = None, False
            i = m - p
            if coker is not None and qd == 0 and sd and td:
                mu = [coker.multiplication(j, i) for j in range(4)]
                known = True
            elif coker is not None and qd == 2 and sd and td:
                # transpose of multiplication H^0(-iK) -> H^0((1-i)K)
                mu = [_transpose(coker.multiplication(j, -i)) for j in range(4)]
                known = True
            elif qd == 2 and m == 3 and p == 3 and sd == table.pg and td == 1:
                mu = [[[field.one() if c == j else field.zero() for c in range(sd)]] for j in range(4)]
                known = True
            if mu is None:
                mu = [[[field.zero()] * sd for _ in range(td)] for _ in range(4)]
                known = not (sd and td)
            skel.blocks[(qd, p)] = DifferentialBlock(qd, p, sd, td, mu, known)
    return skel


def _transpose(M):
    return [list(col) for col in zip(*M)]


def section_map_rank(skel: BeilinsonSkeleton, q: int, p: int, d: int, ring: RingSpec | None = None):
    """(source dim, rank) of the q-row d1 from column p on sections in degree d.

    The source is H (x) H^0(Omega^p(p + d)), spanned by images of the Koszul
    generators, and d1 acts as the constant matrix on the Lambda-coordinates.
    """
    ring = ring or p3_ring(skel.field)
    F = skel.field
    blk = skel.block(q, p)
    K = koszul_differential(ring, p + 1, p)
    gens = piece_basis(K.source, d)
    a = comb(4, p)
    D = blk.concrete(F)
    src_span = Echelon(F)
    img = Echelon(F)
    index: dict = {}
    index2: dict = {}
    for h in range(blk.source_dim):
        for (g, e) in gens:
            # section of Omega^p(p) in degree d: K applied to e_g * monomial
            vec = {}
            for S in range(a):
                f = K.entries[S][g]
                for fe, fc in f.coeffs.items():
                    key = (h * a + S, _addexp(e, fe))
                    vec[key] = F.add(vec.get(key, F.zero()), F(fc))
            vec = {k: v for k, v in vec.items() if v}
            src_span.add({index.setdefault(k, len(index)): v for k, v in vec.items()})
            out = {}
            for (col, ex), c in vec.items():
                for r in range(len(D)):
                    x = D[r][col]
                    if x:
                        key = (r, ex)
                        out[key] = F.add(out.get(key, F.zero()), F.mul(x, c))
            img.add({index2.setdefault(k, len(index2)): v for k, v in out.items() if v})
    return src_span.rank, img.rank


# ------------------------------------------------------------------ block matrices

@dataclass
class Block:
    matrix: FormMatrix
    tag: str


class BlockMatrix:
    """A map source -> target of bundle sums, one concrete block per summand pair.

    Block (i, j) maps the generators of source summand j into the ambient
    free module of target summand i; missing blocks are zero.
    """

    def __init__(self, source: BundleSum, target: BundleSum, ring: RingSpec, blocks=None):
        self.source = source
        self.target = target
        self.ring = ring
        self.src = source.expand()
        self.tgt = target.expand()
        if not self.src or not self.tgt:
            raise ShapeError("block matrices need nonempty source and target")
        self.blocks: dict = {}
        for (i, j), m in (blocks or {}).items():
            self.set_block(i, j, m)

    def model(self, s: SummandKind) -> SummandModel:
        return summand_model(s, self.ring)

    def set_block(self, i: int, j: int, m: FormMatrix):
        S, T = self.model(self.src[j]), self.model(self.tgt[i])
        if m.source.twists != S.generators.twists or m.target.twists != T.ambient.twists:
            raise ShapeError(f"block ({i + 1},{j + 1}) has the wrong shape for "
                             f"{self.src[j].label()} -> {self.tgt[i].label()}")
        self.blocks[(i, j)] = Block(m, hom_tag(self.src[j], self.tgt[i]))

    def block(self, i: int, j: int) -> FormMatrix:
        b = self.blocks.get((i, j))
        if b is not None:
            return b.matrix
        S, T = self.model(self.src[j]), self.model(self.tgt[i])
        return FormMatrix.zero(S.generators, T.ambient)

    def is_zero_block(self, i, j) -> bool:
        return all(not f for row in self.block(i, j).entries for f in row)

    @classmethod
    def from_form_matrix(cls, alpha: FormMatrix) -> "BlockMatrix":
        """Reinterpret a matrix of forms as a map of sums of line bundles."""
        src = BundleSum.lines(alpha.source.twists)
        tgt = BundleSum.lines(alpha.target.twists)
        bm = cls(src, tgt, alpha.ring)
        R = alpha.ring
        for i in range(alpha.nrows):
            for j in range(alpha.ncols):
                f = alpha.entries[i][j]
                if f:
                    bm.set_block(i, j, FormMatrix(GradedFreeModule(R, (alpha.source.twists[j],)),
                                                  GradedFreeModule(R, (alpha.target.twists[i],)), [[f]]))
        return bm


def monad_to_presentation(alpha: BlockMatrix) -> FormMatrix:
    """A matrix of forms whose cokernel is the section module of coker(alpha).

    Target: generators of the target summands.  Source: their Koszul
    relations followed by the generators of the source summands, whose
    images are lifted from the ambient modules to the generators.
    """
    R = alpha.ring
    tmodels = [alpha.model(s) for s in alpha.tgt]
    smodels = [alpha.model(s) for s in alpha.src]
    gen_twists = [t for M in tmodels for t in M.generators.twists]
    offsets = []
    off = 0
    for M in tmodels:
        offsets.append(off)
        off += M.generators.rank
    columns = []
    col_twists = []
    for k, M in enumerate(tmodels):
        if M.relations is None:
            continue
        for c in range(M.relations.ncols):
            col = [Polynomial.zero(R)] * len(gen_twists)
            for r in range(M.relations.nrows):
                col[offsets[k] + r] = M.relations.entries[r][c]
            columns.append(col)
            col_twists.append(M.relations.source.twists[c])
    lifters = {}
    for j, S in enumerate(smodels):
        for c, tw in enumerate(S.generators.twists):
            col = [Polynomial.zero(R)] * len(gen_twists)
            for i, T in enumerate(tmodels):
                blk = alpha.block(i, j)
                v = [blk.entries[r][c] for r in range(blk.nrows)]
                if not any(v):
                    continue
                if T.summand.p == 0:
                    lifted = v
                else:
                    if i not in lifters:
                        D = T.to_ambient
                        lifters[i] = SubmoduleBasis(R, D.nrows, [[D.entries[r][g] for r in range(D.nrows)]
                                                                 for g in range(D.ncols)])
                    lifted = lifters[i].lift(v)
                    if lifted is None:
                        raise LiftingError(f"block ({i + 1},{j + 1}) {alpha.src[j].label()} -> "
                                           f"{alpha.tgt[i].label()} does not land in the sections")
                for r, f in enumerate(lifted):
                    col[offsets[i] + r] = col[offsets[i] + r] + f
            columns.append(col)
            col_twists.append(tw)
    entries = [[columns[c][r] for c in range(len(columns))] for r in range(len(gen_twists))]
    return FormMatrix(GradedFreeModule(R, tuple(col_twists)), GradedFreeModule(R, tuple(gen_twists)), entries)


def cokernel_dims(presentation: FormMatrix, degrees) -> list[int]:
    return [coker_dim(presentation, d) for d in degrees]


# ------------------------------------------------------------------ block structure of the monad

@dataclass
class BlockReport:
    ok: bool
    issues: list
    tags: dict

    def as_dict(self) -> dict:
        return {"ok": self.ok, "issues": list(self.issues),
                "tags": {f"{i + 1},{j + 1}": t for (i, j), t in sorted(self.tags.items())}}


def _forced_zero(src: SummandKind, tgt: SummandKind) -> bool:
    """Positions the structure of the monad forces to vanish although Hom is nonzero."""
    return not src.is_line and src == tgt


def expected_monad_shape(pg: int, q: int, K2: int) -> tuple[BundleSum, BundleSum]:
    F = expected_bundle_sum(pg, q, K2)
    return F.dual(-5), F


def validate_blocks(alpha: BlockMatrix, pg: int, q: int, K2: int) -> BlockReport:
    """Check each block against its Hom space, the forced zeros and the skew block."""
    src, tgt = expected_monad_shape(pg, q, K2)
    if alpha.src != src.expand() or alpha.tgt != tgt.expand():
        raise ShapeError("alpha is not shaped for the expected bundle of these invariants")
    issues = []
    tags = {}
    bases: dict = {}
    R = alpha.ring
    for i, t in enumerate(alpha.tgt):
        for j, s in enumerate(alpha.src):
            tags[(i, j)] = hom_tag(s, t)
            if alpha.is_zero_block(i, j):
                continue
            if _forced_zero(s, t):
                issues.append(f"block ({i + 1},{j + 1}) {s.label()} -> {t.label()} must be zero")
                continue
            key = (s, t)
            if key not in bases:
                bases[key] = hom_space_basis(s, t, R)
            if coordinates_in(alpha.block(i, j), bases[key]) is None:
                issues.append(f"block ({i + 1},{j + 1}) is not in Hom({s.label()}, {t.label()})")
    # skew block: q copies of Omega^2(0) in the source, q copies of Omega^1(-1) in the target
    a = K2 - q + pg - 9
    rows = [1 + a + k for k in range(q)]
    cols = [1 + a + k for k in range(q)]
    if q:
        basis = lambda_basis(alpha.src[cols[0]], alpha.tgt[rows[0]], R)
        coeff = {}
        for x, i in enumerate(rows):
            for y, j in enumerate(cols):
                c = coordinates_in(alpha.block(i, j), basis)
                coeff[(x, y)] = c if c is not None else [0] * len(basis)
        F = R.field
        for k in range(len(basis)):
            for x in range(q):
                for y in range(q):
                    if F.add(coeff[(x, y)][k], coeff[(y, x)][k]):
                        issues.append(f"the H^(0,1) x H^(2,1) block is not skew in Lambda-coordinate {k + 1}")
                        break
                else:
                    continue
                break
    return BlockReport(not issues, issues, tags)


def random_block_matrix(pg: int, q: int, K2: int, seed: int, ring: RingSpec | None = None,
                        bound: int = 5) -> BlockMatrix:
    """A seeded map of the expected monad shape satisfying the block structure.

    Line-bundle blocks are mirrored so that part is symmetric; blocks touching
    Omega summands are drawn independently from their Hom spaces and the
    H^(0,1) x H^(2,1) block is skew in the Lambda-basis.
    """
    ring = ring or p3_ring()
    rng = _random.Random(seed)
    F = ring.field
    src, tgt = expected_monad_shape(pg, q, K2)
    alpha = BlockMatrix(src, tgt, ring)
    a = K2 - q + pg - 9
    skew = set(range(1 + a, 1 + a + q))
    bases: dict = {}

    def draw(s, t):
        key = (s, t)
        if key not in bases:
            bases[key] = hom_space_basis(s, t, ring)
        B = bases[key]
        if not B:
            return None
        acc = None
        for b in B:
            c = F(rng.randint(-bound, bound))
            if c:
                acc = b.scale(c) if acc is None else acc + b.scale(c)
        return acc

    n = len(alpha.tgt)
    for i in range(n):
        for j in range(n):
            s, t = alpha.src[j], alpha.tgt[i]
            if _forced_zero(s, t):
                continue
            if i in skew and j in skew:
                continue
            if s.is_line and t.is_line and j < i:
                continue
            m = draw(s, t)
            if m is not None:
                alpha.set_block(i, j, m)
                if s.is_line and t.is_line and i != j:
                    f = m.entries[0][0]
                    alpha.set_block(j, i, FormMatrix(GradedFreeModule(ring, (alpha.src[i].t,)),
                                                     GradedFreeModule(ring, (alpha.tgt[j].t,)), [[f]]))
    if q >= 2:
        idx = sorted(skew)
        basis = lambda_basis(alpha.src[idx[0]], alpha.tgt[idx[0]], ring)
        for x in range(q):
            for y in range(x + 1, q):
                acc = None
                for b in basis:
                    c = F(rng.randint(-bound, bound))
                    if c:
                        acc = b.scale(c) if acc is None else acc + b.scale(c)
                if acc is not None:
                    alpha.set_block(idx[x], idx[y], acc)
                    alpha.set_block(idx[y], idx[x], acc.scale(-1))
    return alpha


# ------------------------------------------------------------------ double covers

@dataclass
class SplitDatum:
    case: str
    plus_rows: list
    minus_rows: list
    alpha_plus: FormMatrix | None
    alpha_minus: FormMatrix | None

    @property
    def minus_is_trivial(self) -> bool:
        return self.alpha_minus is None


def split_double_cover(alpha: FormMatrix, case: str, signs) -> SplitDatum:
    """Split a symmetric resolution over O + E along an involution.

    ``signs`` gives '+' or '-' for each summand of E (rows 2..n).  Case a
    keeps (O + E+) and E- on separate diagonal blocks; case b pairs them
    off-diagonally, with alpha_- the transpose of alpha_+.
    """
    n = alpha.nrows
    if alpha.ncols != n:
        raise ShapeError("the resolution matrix must be square")
    signs = list(signs)
    if len(signs) != n - 1 or any(s not in "+-" for s in signs):
        raise ShapeError(f"need one sign per summand of E ({n - 1}), got {len(signs)}")
    if case not in ("a", "b"):
        raise ShapeError("case must be 'a' or 'b'")
    plus = [0] + [k + 1 for k, s in enumerate(signs) if s == "+"]
    minus = [k + 1 for k, s in enumerate(signs) if s == "-"]

    def zero(rows, cols):
        return all(not alpha.entries[i][j] for i in rows for j in cols)

    if case == "a":
        if not (zero(plus, minus) and zero(minus, plus)):
            raise ShapeError("the matrix does not split into invariant and anti-invariant blocks")
        ap = alpha.submatrix(plus, plus)
        am = alpha.submatrix(minus, minus) if minus else None
        return SplitDatum("a", plus, minus, ap, am)
    if not minus:
        raise ShapeError("case b needs a nonempty anti-invariant part")
    if not (zero(plus, plus) and zero(minus, minus)):
        raise ShapeError("the matrix does not have the anti-invariant block shape")
    ap = alpha.submatrix(plus, minus)
    am = alpha.submatrix(minus, plus)
    if any(am.entries[i][j] != ap.entries[j][i] for i in range(am.nrows) for j in range(am.ncols)):
        raise ShapeError("alpha_- is not the transpose of alpha_+")
    return SplitDatum("b", plus, minus, ap, am)


@dataclass
class AdjointPairing:
    """E- x E- -> O given by the adjoint matrix, with det(alpha_-) alongside."""

    matrix: FormMatrix
    determinant: Polynomial


def adjoint_pairing(alpha_minus: FormMatrix) -> AdjointPairing:
    if alpha_minus.nrows != alpha_minus.ncols:
        raise ShapeError("alpha_- must be square")
    return AdjointPairing(cofactor_adjoint(alpha_minus), determinant(alpha_minus))


__all__ = [
    "AdjointPairing", "BeilinsonSkeleton", "Block", "BlockMatrix", "BlockReport", "BundleSum",
    "CohomologyTable", "LiftingError", "ShapeError", "SplitDatum", "SummandKind",
    "adjoint_pairing", "apply_tensor", "beilinson_table", "bott_h0", "cokernel_dims",
    "contraction", "contraction_differential", "expected_bundle_sum", "hom_space_basis",
    "hom_space_dim", "hom_space_dim_oracle", "hom_tag", "koszul_differential", "koszul_module",
    "lambda_basis", "monad_to_presentation", "p3_ring", "random_block_matrix",
    "section_map_rank", "split_double_cover", "validate_blocks",
]
