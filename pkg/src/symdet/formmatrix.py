"""Homogeneous matrices of forms between graded free modules."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .algebra_core.groebner import Budget, BudgetExceeded
from .algebra_core.ideal import Ideal
from .algebra_core.modules import GradedFreeModule, _sub
from .algebra_core.poly import Polynomial, random_form
from .algebra_core.ring import RingSpec

SYMMETRIC_SHIFT = -5


class LayoutError(ValueError):
    """The matrix does not have the shape an operation requires."""


@dataclass(frozen=True)
class Violation:
    row: int
    col: int
    expected_degree: object
    found: str

    def __str__(self):
        return f"entry ({self.row + 1},{self.col + 1}): expected degree {self.expected_degree}, found {self.found}"


class FormMatrix:
    """A map source -> target of graded free modules, stored as a dense array.

    Entry (i, j) maps summand j of the source to summand i of the target and
    should be 0 or a form of degree target.twists[i] - source.twists[j].
    """

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, entries):
        rows = [list(r) for r in entries]
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise LayoutError(f"entries must be {target.rank} x {source.rank}")
        if source.ring != target.ring:
            raise LayoutError("source and target over different rings")
        self.source = source
        self.target = target
        self.entries = rows

    # construction
    @classmethod
    def symmetric_layout(cls, ring: RingSpec, twists, entries, shift: int = SYMMETRIC_SHIFT):
        """Target twists t, source twists shift - t (the layout F*(shift) -> F)."""
        target = GradedFreeModule(ring, tuple(twists))
        return cls(target.dual_shift(shift), target, entries)

    @classmethod
    def identity(cls, module: GradedFreeModule):
        R = module.ring
        n = module.rank
        return cls(module, module, [[Polynomial.one(R) if i == j else Polynomial.zero(R)
                                     for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, source, target):
        R = source.ring
        return cls(source, target, [[Polynomial.zero(R)] * source.rank for _ in range(target.rank)])

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    @property
    def nrows(self) -> int:
        return self.target.rank

    @property
    def ncols(self) -> int:
        return self.source.rank

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def expected_degree(self, i, j):
        return _sub(self.target.twists[i], self.source.twists[j])

    def __eq__(self, other):
        return (isinstance(other, FormMatrix) and self.entries == other.entries
                and self.source == other.source and self.target == other.target)

    def same_entries(self, other) -> bool:
        return self.entries == other.entries

    def __repr__(self):
        rows = ["[" + ", ".join(str(e) for e in r) + "]" for r in self.entries]
        return "FormMatrix([" + ", ".join(rows) + f"], target={self.target.twists}, source={self.source.twists})"

    # algebra
    def __matmul__(self, other: "FormMatrix") -> "FormMatrix":
        if self.ncols != other.nrows:
            raise LayoutError("inner dimensions differ")
        R = self.ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = Polynomial.zero(R)
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return FormMatrix(other.source, self.target, out)

    def transpose(self, shift: int = SYMMETRIC_SHIFT) -> "FormMatrix":
        """The dual map twisted by ``shift``: target*(shift) -> source*(shift)."""
        ent = [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return FormMatrix(self.target.dual_shift(shift), self.source.dual_shift(shift), ent)

    def scale(self, c) -> "FormMatrix":
        return FormMatrix(self.source, self.target, [[e.scale(c) for e in r] for r in self.entries])

    def map_entries(self, fn) -> "FormMatrix":
        return FormMatrix(self.source, self.target, [[fn(e) for e in r] for r in self.entries])

    def __add__(self, other):
        return FormMatrix(self.source, self.target,
                          [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return FormMatrix(self.source, self.target,
                          [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def submatrix(self, rows, cols) -> "FormMatrix":
        rows, cols = list(rows), list(cols)
        return FormMatrix(self.source.sub(cols), self.target.sub(rows),
                          [[self.entries[i][j] for j in cols] for i in rows])

    def is_scalar_identity_multiple(self, f: Polynomial) -> bool:
        for i in range(self.nrows):
            for j in range(self.ncols):
                want = f if i == j else Polynomial.zero(self.ring)
                if self.entries[i][j] != want:
                    return False
        return True


# ------------------------------------------------------------------ checks

def validate(m: FormMatrix) -> list[Violation]:
    """Every entry violating homogeneity or the degree dictated by the twists."""
    out = []
    for i, row in enumerate(m.entries):
        for j, f in enumerate(row):
            if not f:
                continue
            want = m.expected_degree(i, j)
            if not f.is_homogeneous():
                out.append(Violation(i, j, want, "inhomogeneous"))
                continue
            got = f.degree
            if got != want:
                out.append(Violation(i, j, want, f"degree {got}"))
    return out


def _det_budget(m: FormMatrix, budget: Budget | None):
    if budget is None or budget.max_degree is None:
        return
    n = m.nrows
    deg = max((f.total_degree() for r in m.entries for f in r if f), default=0)
    if n * deg > budget.max_degree:
        raise BudgetExceeded("degree", budget.max_degree, n * deg)


def determinant_bareiss(m: FormMatrix) -> Polynomial:
    """Fraction-free Gaussian elimination; every division is exact."""
    n = m.nrows
    if n != m.ncols:
        raise LayoutError("determinant of a non-square matrix")
    R = m.ring
    if n == 0:
        return Polynomial.one(R)
    A = [list(r) for r in m.entries]
    sign = 1
    prev = Polynomial.one(R)
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return Polynomial.zero(R)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * piv - A[i][k] * A[k][j]
                A[i][j] = num.divide_exact(prev) if k else num
            A[i][k] = Polynomial.zero(R)
        prev = piv
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def determinant_laplace(m: FormMatrix) -> Polynomial:
    """First-row cofactor expansion (exponential; meant for small cross-checks)."""
    n = m.nrows
    if n != m.ncols:
        raise LayoutError("determinant of a non-square matrix")
    return _laplace(m.entries, m.ring)


def _laplace(A, R):
    n = len(A)
    if n == 0:
        return Polynomial.one(R)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = Polynomial.zero(R)
    for j in range(n):
        if not A[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * _laplace(minor, R)
        total = total + term if j % 2 == 0 else total - term
    return total


def determinant(m: FormMatrix, budget: Budget | None = None, cross_check: bool = True) -> Polynomial:
    """Exact determinant; Bareiss, cross-checked by Laplace expansion up to size 4."""
    _det_budget(m, budget)
    d = determinant_bareiss(m)
    if cross_check and m.nrows <= 4:
        if d != determinant_laplace(m):
            raise ArithmeticError("Bareiss and Laplace determinants disagree")
    return d


def expected_det_degree(m: FormMatrix):
    return _sub(_sum(m.target.twists), _sum(m.source.twists))


def _sum(tw):
    if tw and isinstance(tw[0], tuple):
        return tuple(sum(x) for x in zip(*tw))
    return sum(tw)


def minors(m: FormMatrix, r: int, budget: Budget | None = None) -> list[Polynomial]:
    """All nonzero r x r minors, rows and columns in lexicographic subset order."""
    R = m.ring
    if r == 0:
        return [Polynomial.one(R)]
    if r > min(m.nrows, m.ncols):
        return []
    # early pruning: rows and columns that are identically zero never contribute
    live_rows = [i for i in range(m.nrows) if any(m.entries[i])]
    live_cols = [j for j in range(m.ncols) if any(m.entries[i][j] for i in range(m.nrows))]
    if budget is not None and budget.max_basis is not None:
        from math import comb
        count = comb(len(live_rows), r) * comb(len(live_cols), r)
        if count > budget.max_basis:
            raise BudgetExceeded("basis", budget.max_basis, count)
    out = []
    for rows in combinations(live_rows, r):
        for cols in combinations(live_cols, r):
            sub = [[m.entries[i][j] for j in cols] for i in rows]
            d = _laplace(sub, R) if r <= 3 else determinant_bareiss(m.submatrix(rows, cols))
            if d:
                out.append(d)
    return out


def minors_ideal(m: FormMatrix, r: int, budget: Budget | None = None) -> Ideal:
    """I_r(m); I_0 is the unit ideal and I_r is zero for r beyond the matrix size."""
    if r < 0:
        raise ValueError("minor size must be nonnegative")
    return Ideal(m.ring, minors(m, r, budget))


def cofactor_adjoint(m: FormMatrix, budget: Budget | None = None) -> FormMatrix:
    """The adjugate beta with m*beta = beta*m = det(m)*Id.

    beta maps the target of m to its source twisted by deg det(m).
    """
    n = m.nrows
    if n != m.ncols:
        raise LayoutError("adjoint of a non-square matrix")
    _det_budget(m, budget)
    R = m.ring
    D = expected_det_degree(m)
    ent = [[Polynomial.zero(R)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [k for k in range(n) if k != j]
            cols = [k for k in range(n) if k != i]
            sub = [[m.entries[a][b] for b in cols] for a in rows]
            c = _laplace(sub, R) if n <= 5 else determinant_bareiss(m.submatrix(rows, cols))
            ent[i][j] = c if (i + j) % 2 == 0 else -c
    if n == 1:
        ent = [[Polynomial.one(R)]]
    target = GradedFreeModule(R, tuple(_sub(s, _neg(D)) for s in m.source.twists))
    return FormMatrix(m.target, target, ent)


def _neg(d):
    return tuple(-x for x in d) if isinstance(d, tuple) else -d


def layout_shift(m: FormMatrix):
    """The constant c with source twist_j = c - target twist_j, or None."""
    if m.nrows != m.ncols:
        return None
    shifts = {_add(s, t) for s, t in zip(m.source.twists, m.target.twists)}
    return shifts.pop() if len(shifts) == 1 else None


def _add(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def is_symmetric(m: FormMatrix, require_layout: bool = True) -> bool:
    """Entry (i,j) equals entry (j,i) for all i, j.

    With ``require_layout`` the twists must have the shape F*(c) -> F,
    otherwise LayoutError is raised.
    """
    if m.nrows != m.ncols:
        raise LayoutError("symmetry needs a square matrix")
    if require_layout and layout_shift(m) is None:
        raise LayoutError("source twists are not a constant shift of the negated target twists")
    n = m.nrows
    return all(m.entries[i][j] == m.entries[j][i] for i in range(n) for j in range(i + 1, n))


def delete_first_row(m: FormMatrix) -> FormMatrix:
    """alpha': drop the row of the first target summand."""
    if m.nrows < 2:
        raise LayoutError("need at least two rows")
    return m.submatrix(range(1, m.nrows), range(m.ncols))


def drop_first_row_and_column(m: FormMatrix) -> FormMatrix:
    """alpha'': drop the first row and the first column."""
    if m.nrows < 2 or m.ncols < 2:
        raise LayoutError("need at least two rows and columns")
    return m.submatrix(range(1, m.nrows), range(1, m.ncols))


# ------------------------------------------------------------------ automorphisms

def graded_automorphism_random(module: GradedFreeModule, seed, rng=None) -> FormMatrix:
    """Upper-triangular automorphism: nonzero scalars on the diagonal, random
    forms of degree t_i - t_j above it (zero where that degree is negative)."""
    rng = rng or random.Random(seed)
    R = module.ring
    F = R.field
    n = module.rank
    ent = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(Polynomial.constant(R, F.random(rng, nonzero=True, bound=5)))
            elif i < j:
                d = _sub(module.twists[i], module.twists[j])
                if (isinstance(d, int) and d < 0) or (isinstance(d, tuple) and any(x < 0 for x in d)):
                    row.append(Polynomial.zero(R))
                else:
                    row.append(random_form(R, d, rng))
            else:
                row.append(Polynomial.zero(R))
        ent.append(row)
    return FormMatrix(module, module, ent)


def inverse_upper_triangular(u: FormMatrix) -> FormMatrix:
    """Inverse of an upper-triangular matrix with constant diagonal, by back-substitution."""
    n = u.nrows
    R = u.ring
    F = R.field
    for i in range(n):
        d = u.entries[i][i]
        if not d or not d.is_constant():
            raise LayoutError("diagonal must be nonzero constants")
        for j in range(i):
            if u.entries[i][j]:
                raise LayoutError("matrix is not upper triangular")
    inv = [[Polynomial.zero(R)] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            acc = Polynomial.one(R) if i == col else Polynomial.zero(R)
            for k in range(i + 1, n):
                if u.entries[i][k] and inv[k][col]:
                    acc = acc - u.entries[i][k] * inv[k][col]
            inv[i][col] = acc.scale(F.inv(u.entries[i][i].constant_value()))
    return FormMatrix(u.target, u.source, inv)


def random_symmetric_matrix(ring: RingSpec, twists, rng, shift: int = SYMMETRIC_SHIFT,
                            density: float = 1.0) -> FormMatrix:
    """Random symmetric matrix in the layout F*(shift) -> F with target twists ``twists``."""
    n = len(twists)
    ent = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            d = twists[i] + twists[j] - shift
            f = random_form(ring, d, rng, density)
            ent[i][j] = ent[j][i] = f
    return FormMatrix.symmetric_layout(ring, twists, ent, shift)
