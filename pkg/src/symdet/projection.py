"""Verification and analysis of a candidate symmetric matrix for a canonical projection."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra_core.groebner import Budget, BudgetExceeded
from .algebra_core.hilbert import HilbertData
from .algebra_core.ideal import Ideal
from .algebra_core.linalg import nullspace
from .algebra_core.modules import GradedFreeModule
from .algebra_core.pieces import coker_dim
from .algebra_core.poly import Polynomial, exponents_of_total_degree
from .algebra_core.ring import RingSpec
from .formmatrix import (FormMatrix, LayoutError, cofactor_adjoint, delete_first_row, determinant,
                         drop_first_row_and_column, is_symmetric, layout_shift, minors_ideal)
from .monad import BlockMatrix, BundleSum, expected_bundle_sum, monad_to_presentation, validate_blocks

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def expected_bundle(pg: int, q: int, K2: int) -> BundleSum:
    """O + E with E = (K^2 - q + p_g - 9) O(-2) + q Omega^1(-1) + (p_g - 4) Omega^2."""
    if K2 - q + pg - 9 < 0:
        raise ValueError(f"K^2 - q + p_g - 9 = {K2 - q + pg - 9} is negative: no bundle of the expected shape")
    return expected_bundle_sum(pg, q, K2)


def expected_line_twists(pg: int, q: int, K2: int) -> tuple | None:
    """Target twists of the line-bundle layout, or None when Omega summands occur."""
    F = expected_bundle(pg, q, K2)
    if not F.is_split:
        return None
    return tuple(s.normalized().t for s in F.expand())


@dataclass
class ProjectionDatum:
    """A matrix alpha: (O + E)*(-5) -> O + E with optional invariants (p_g, q, K^2)."""

    alpha: FormMatrix | BlockMatrix
    pg: int | None = None
    q: int | None = None
    K2: int | None = None
    seed: int = 0

    @property
    def is_block(self) -> bool:
        return isinstance(self.alpha, BlockMatrix)

    @property
    def size(self) -> int:
        a = self.alpha
        return len(a.tgt) if self.is_block else a.nrows

    @property
    def r(self) -> int:
        """rank E for a line-bundle datum (the number of rows after the first)."""
        return self.size - 1

    @property
    def chi(self) -> int | None:
        if self.pg is None or self.q is None:
            return None
        return 1 - self.q + self.pg

    def shape_issues(self) -> list[str]:
        out = []
        if self.is_block:
            return out
        a = self.alpha
        if a.nrows != a.ncols:
            out.append("alpha is not square")
        elif a.target.twists[0] != 0:
            out.append("the first target summand is not O")
        if None not in (self.pg, self.q, self.K2) and not out:
            want = expected_line_twists(self.pg, self.q, self.K2)
            if want is None:
                out.append("these invariants need Omega summands (use a block datum)")
            elif tuple(a.target.twists) != want:
                out.append(f"target twists {list(a.target.twists)} differ from the expected {list(want)}")
        return out


@dataclass
class CheckResult:
    status: str
    witness: object = None

    def as_dict(self) -> dict:
        return {"status": self.status, "witness": _plain(self.witness)}

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


@dataclass
class VerificationReport:
    checks: dict = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)

    def add(self, name: str, status: str, witness=None):
        self.checks[name] = CheckResult(status, witness)

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if v.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def budget_hits(self) -> list[str]:
        """Checks skipped because a budget cap was reached."""
        return [k for k, v in self.checks.items()
                if v.status == SKIPPED and isinstance(v.witness, str) and v.witness.startswith("budget:")]

    def as_dict(self) -> dict:
        return {"invariants": _plain(self.invariants), "ok": self.ok,
                "checks": {k: v.as_dict() for k, v in self.checks.items()}}


# ------------------------------------------------------------------ ideal helpers

def _inclusion_witness(big: Ideal, small: Ideal, budget):
    """A generator of ``small`` outside ``big``, or None."""
    pb = big.packed_basis(budget=budget)
    for g in small.generators:
        if not pb.reduces_to_zero(g):
            return g
    return None


def _equality(I: Ideal, J: Ideal, budget, names=("left", "right")):
    w = _inclusion_witness(I, J, budget)
    if w is not None:
        return CheckResult(FAIL, f"{w} lies in {names[1]} but not in {names[0]}")
    w = _inclusion_witness(J, I, budget)
    if w is not None:
        return CheckResult(FAIL, f"{w} lies in {names[0]} but not in {names[1]}")
    return CheckResult(PASS, None)


def _guard(fn):
    try:
        return fn()
    except BudgetExceeded as exc:
        return CheckResult(SKIPPED, f"budget: {exc}")


# ------------------------------------------------------------------ conditions

def symmetry_check(alpha: FormMatrix) -> CheckResult:
    try:
        sym = is_symmetric(alpha)
    except LayoutError as exc:
        return CheckResult(FAIL, f"layout: {exc}")
    if sym:
        return CheckResult(PASS, {"shift": layout_shift(alpha)})
    n = alpha.nrows
    for i in range(n):
        for j in range(i + 1, n):
            if alpha.entries[i][j] != alpha.entries[j][i]:
                return CheckResult(FAIL, f"entry ({i + 1},{j + 1}) = {alpha.entries[i][j]} but "
                                         f"entry ({j + 1},{i + 1}) = {alpha.entries[j][i]}")
    return CheckResult(FAIL, None)


def ring_condition(alpha: FormMatrix, budget: Budget | None = None) -> CheckResult:
    """I_r(alpha) = I_r(alpha') with r = rank E."""
    r = alpha.nrows - 1
    return _guard(lambda: _equality(minors_ideal(alpha, r, budget), minors_ideal(delete_first_row(alpha), r, budget),
                                    budget, (f"I_{r}(alpha)", f"I_{r}(alpha')")))


def further_rank_condition(alpha: FormMatrix, budget: Budget | None = None) -> CheckResult:
    """I_(r-1)(alpha') = I_(r-1)(alpha''); vacuous for r = 1."""
    if isinstance(alpha, ProjectionDatum):
        alpha = alpha.alpha
    r = alpha.nrows - 1
    if r <= 1:
        return CheckResult(PASS, "vacuous: I_0 = (1) on both sides")
    return _guard(lambda: _equality(minors_ideal(delete_first_row(alpha), r - 1, budget),
                                    minors_ideal(drop_first_row_and_column(alpha), r - 1, budget),
                                    budget, (f"I_{r - 1}(alpha')", f"I_{r - 1}(alpha'')")))


def squarefree_probe(det: Polynomial, seed: int = 0, lines: int = 3) -> CheckResult:
    """Restrict det to random lines; a repeated factor on every line is an obstruction.

    A pass means no obstruction was found; it does not prove irreducibility.
    """
    ring = det.ring
    F = ring.field
    rng = random.Random(seed)
    uring = RingSpec.standard(("u",), F)
    u = Polynomial.var(uring, 0)
    results = []
    for _ in range(lines):
        P = [F.random(rng, bound=50) for _ in range(ring.nvars)]
        Q = [F.random(rng, bound=50) for _ in range(ring.nvars)]
        images = [u.scale(b) + Polynomial.constant(uring, a) for a, b in zip(P, Q)]
        g = det.substitute(images, uring)
        if g.total_degree() < 1:
            results.append("degenerate line")
            continue
        sf = Ideal(uring, [g, g.derivative(0)], check_homogeneous=False).is_unit()
        results.append("squarefree" if sf else "repeated factor")
    if "repeated factor" in results and "squarefree" not in results:
        return CheckResult(FAIL, results)
    if "squarefree" not in results:
        return CheckResult(SKIPPED, results)
    return CheckResult(PASS, results)


def plurigenus_check(presentation: FormMatrix, chi: int, K2: int, degrees=range(2, 7)) -> CheckResult:
    got, want = [], []
    for m in degrees:
        got.append(coker_dim(presentation, m))
        want.append(chi + m * (m - 1) * K2 // 2)
    return CheckResult(PASS if got == want else FAIL, {"degrees": list(degrees), "computed": got, "expected": want})


def verify(datum: ProjectionDatum, budget: Budget | None = None) -> VerificationReport:
    """Run the checks in order and record each with a witness."""
    rep = VerificationReport()
    rep.invariants = {"pg": datum.pg, "q": datum.q, "K2": datum.K2, "seed": datum.seed}
    issues = datum.shape_issues()
    rep.add("shape", FAIL if issues else PASS, issues or None)
    if datum.is_block:
        return _verify_block(datum, rep)
    alpha = datum.alpha
    if alpha.nrows != alpha.ncols:
        return rep
    rep.invariants["r"] = datum.r
    rep.add("symmetric", *_unpack(symmetry_check(alpha)))
    try:
        det = determinant(alpha, budget)
    except BudgetExceeded as exc:
        rep.add("det_nonzero", SKIPPED, f"budget: {exc}")
        det = None
    if det is not None:
        rep.add("det_nonzero", PASS if det else FAIL, str(det) if det else "det = 0")
        if datum.K2 is None:
            rep.add("det_degree_equals_K2", SKIPPED, {"degree": det.total_degree() if det else None})
        elif det:
            d = det.total_degree()
            rep.add("det_degree_equals_K2", PASS if d == datum.K2 else FAIL, {"degree": d, "K2": datum.K2})
        else:
            rep.add("det_degree_equals_K2", FAIL, "det = 0")
    if not det:
        for name in ("det_ideal", "ring_condition", "codim_gamma", "squarefree_probe", "further_rank_condition"):
            rep.add(name, SKIPPED, "needs a nonzero determinant")
    else:
        n = alpha.nrows
        rep.add("det_ideal", *_unpack(_guard(lambda: _equality(
            Ideal(alpha.ring, [det]), minors_ideal(alpha, n, budget), budget, ("(det)", f"I_{n}(alpha)")))))
        rep.add("ring_condition", *_unpack(ring_condition(alpha, budget)))
        rep.add("codim_gamma", *_unpack(_guard(lambda: _codim_gamma(alpha, budget))))
        rep.add("squarefree_probe", *_unpack(squarefree_probe(det, datum.seed)))
        rep.add("further_rank_condition", *_unpack(further_rank_condition(alpha, budget)))
    if datum.chi is not None and datum.K2 is not None:
        rep.add("plurigenus", *_unpack(plurigenus_check(alpha, datum.chi, datum.K2)))
    rep.add("rdp_singularities", SKIPPED, "out of scope")
    return rep


def _unpack(c: CheckResult):
    return c.status, c.witness


def _codim_gamma(alpha: FormMatrix, budget) -> CheckResult:
    r = alpha.nrows - 1
    h = minors_ideal(delete_first_row(alpha), r, budget).hilbert(budget)
    return CheckResult(PASS if h.dimension <= 1 else FAIL,
                       {"projective_dimension": h.dimension, "codimension": 3 - h.dimension})


def _verify_block(datum: ProjectionDatum, rep: VerificationReport) -> VerificationReport:
    alpha = datum.alpha
    if None not in (datum.pg, datum.q, datum.K2):
        br = validate_blocks(alpha, datum.pg, datum.q, datum.K2)
        rep.add("block_structure", PASS if br.ok else FAIL, br.issues or None)
    pres = monad_to_presentation(alpha)
    if datum.chi is not None and datum.K2 is not None:
        rep.add("plurigenus", *_unpack(plurigenus_check(pres, datum.chi, datum.K2, range(2, 5))))
    for name in ("symmetric", "ring_condition", "further_rank_condition"):
        rep.add(name, SKIPPED, "block datum: Fitting ideals of Omega blocks are not computed")
    rep.add("rdp_singularities", SKIPPED, "out of scope")
    return rep


# ------------------------------------------------------------------ loci

def predicted_gamma_degree(d) -> Fraction:
    d = Fraction(d)
    return d * d / 2 - 5 * d / 2 + 1


def predicted_t_degree(d, q: int, pg: int) -> Fraction:
    d = Fraction(d)
    return d ** 3 / 6 - 5 * d * d / 2 + Fraction(37, 3) * d - 4 * (1 - q + pg)


def loci_predictions(d: int, q: int, pg: int) -> tuple[Fraction, Fraction]:
    return predicted_gamma_degree(d), predicted_t_degree(d, q, pg)


@dataclass
class LociResult:
    gamma_ideal: Ideal
    gamma_hilbert: HilbertData
    gamma_predicted: Fraction | None
    t_ideal: Ideal
    t_hilbert: HilbertData
    t_predicted: Fraction | None
    adjoint_surface: Polynomial
    adjoint_degree: int | None

    @property
    def gamma_dim(self):
        return self.gamma_hilbert.dimension

    @property
    def gamma_degree(self):
        return self.gamma_hilbert.degree

    @property
    def t_dim(self):
        return self.t_hilbert.dimension

    @property
    def t_degree(self):
        return self.t_hilbert.degree

    @property
    def t_is_empty(self) -> bool:
        return self.t_hilbert.dimension < 0

    def as_dict(self) -> dict:
        return {
            "gamma": {"generators": [str(g) for g in self.gamma_ideal.minimal_generators_by_degree()],
                      "dimension": self.gamma_dim, "degree": self.gamma_degree,
                      "predicted_degree": _plain(self.gamma_predicted),
                      "matches_prediction": (self.gamma_predicted == self.gamma_degree
                                             if self.gamma_predicted is not None else None)},
            "T": {"dimension": self.t_dim, "degree": self.t_degree, "empty": self.t_is_empty,
                  "predicted_degree": _plain(self.t_predicted)},
            "adjoint_surface": {"polynomial": str(self.adjoint_surface), "degree": self.adjoint_degree},
        }


def loci(datum: ProjectionDatum, budget: Budget | None = None) -> LociResult:
    """Gamma = V(I_r(alpha')), T = V(I_(r-1)(alpha'')) and the adjoint surface det(alpha'')."""
    alpha = datum.alpha
    if datum.is_block:
        raise ValueError("loci are computed for line-bundle data only")
    r = alpha.nrows - 1
    a1 = delete_first_row(alpha)
    a2 = drop_first_row_and_column(alpha)
    gamma = minors_ideal(a1, r, budget)
    T = minors_ideal(a2, r - 1, budget)
    adj = determinant(a2, budget)
    d = datum.K2
    if d is None:
        det = determinant(alpha, budget)
        d = det.total_degree() if det else None
    gp = predicted_gamma_degree(d) if d is not None else None
    tp = (predicted_t_degree(d, datum.q, datum.pg)
          if d is not None and datum.q is not None and datum.pg is not None else None)
    return LociResult(gamma, gamma.hilbert(budget), gp, T, T.hilbert(budget), tp,
                      adj, adj.total_degree() if adj else None)


@dataclass
class ConductorResult:
    ideal: Ideal
    reliable: bool
    note: str = ""


def conductor(datum: ProjectionDatum, budget: Budget | None = None) -> ConductorResult:
    """I_r(alpha') + (det alpha): the conductor of the normalization, read in the ambient ring."""
    alpha = datum.alpha if isinstance(datum, ProjectionDatum) else datum
    r = alpha.nrows - 1
    det = determinant(alpha, budget)
    I = minors_ideal(delete_first_row(alpha), r, budget) + Ideal(alpha.ring, [det])
    rc = ring_condition(alpha, budget)
    note = "" if rc.passed else "the ring condition fails, so this ideal need not be the conductor"
    return ConductorResult(I, rc.passed, note)


def matrix_factorization_check(alpha: FormMatrix, beta: FormMatrix | None = None,
                               budget: Budget | None = None) -> CheckResult:
    """alpha * beta = det * Id and beta * alpha = det * Id with beta the adjugate by default."""
    if isinstance(alpha, ProjectionDatum):
        alpha = alpha.alpha
    if alpha.nrows != alpha.ncols:
        raise LayoutError("matrix factorization needs a square matrix")
    det = determinant(alpha, budget)
    beta = beta if beta is not None else cofactor_adjoint(alpha, budget)
    for name, prod in (("alpha*beta", _entries_product(alpha, beta)), ("beta*alpha", _entries_product(beta, alpha))):
        n = len(prod)
        for i in range(n):
            for j in range(n):
                want = det if i == j else Polynomial.zero(alpha.ring)
                if prod[i][j] != want:
                    return CheckResult(FAIL, f"{name} differs from det*Id at ({i + 1},{j + 1})")
    return CheckResult(PASS, None)


def _entries_product(A: FormMatrix, B: FormMatrix):
    R = A.ring
    n, m, k = A.nrows, B.ncols, A.ncols
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = Polynomial.zero(R)
            for l in range(k):
                a, b = A.entries[i][l], B.entries[l][j]
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


# ------------------------------------------------------------------ symmetrization

class SymmetrizeError(ValueError):
    pass


@dataclass
class SymmetrizeResult:
    beta: FormMatrix
    f: FormMatrix
    g: FormMatrix
    sign: int
    attempts: int


def duality_pairs(alpha: FormMatrix) -> tuple[list, list, list]:
    """Basis of the pairs (f, g) of degree-0 maps with f * alpha = alpha^t * g.

    f maps the target F of alpha to G*(-5) and g maps the source G to
    F*(-5), where alpha^t: F*(-5) -> G*(-5).  Solved as linear algebra on
    the coefficients of f and g.
    """
    R = alpha.ring
    Fld = R.field
    n = R.nvars
    Ft, Gt = alpha.target.twists, alpha.source.twists
    Gd = tuple(-5 - t for t in Gt)
    Fd = tuple(-5 - t for t in Ft)
    unknowns = []
    for i, a in enumerate(Gd):
        for j, b in enumerate(Ft):
            for e in exponents_of_total_degree(n, a - b):
                unknowns.append(("f", i, j, e))
    for i, a in enumerate(Fd):
        for j, b in enumerate(Gt):
            for e in exponents_of_total_degree(n, a - b):
                unknowns.append(("g", i, j, e))
    eqs: dict = {}
    p = Fld.p

    def add(key, u, c):
        row = eqs.setdefault(key, {})
        v = row.get(u, 0) + c
        row[u] = v % p if p else v

    A = alpha.entries
    for u, (which, i, j, e) in enumerate(unknowns):
        if which == "f":
            # (f alpha)_{ik} = sum_j f_ij alpha_jk
            for k in range(alpha.ncols):
                for fe, fc in A[j][k].coeffs.items():
                    add((i, k, tuple(x + y for x, y in zip(e, fe))), u, fc)
        else:
            # (alpha^t g)_{ik} = sum_j alpha_ji g_jk, here g_ij so the entry is (j', k) = (i, j)
            for row in range(alpha.ncols):
                for fe, fc in A[i][row].coeffs.items():
                    add((row, j, tuple(x + y for x, y in zip(e, fe))), u, -fc)
    null = nullspace(list(eqs.values()), len(unknowns), Fld) if unknowns else []
    return unknowns, null, [Gd, Fd]


def _assemble(alpha, unknowns, vec, duals):
    R = alpha.ring
    Gd, Fd = duals
    f = [[Polynomial.zero(R) for _ in alpha.target.twists] for _ in Gd]
    g = [[Polynomial.zero(R) for _ in alpha.source.twists] for _ in Fd]
    for (which, i, j, e), c in zip(unknowns, vec):
        if c:
            M = f if which == "f" else g
            M[i][j] = M[i][j] + Polynomial.monomial(R, e, c)
    fm = FormMatrix(alpha.target, GradedFreeModule(R, Gd), f)
    gm = FormMatrix(alpha.source, GradedFreeModule(R, Fd), g)
    return fm, gm


def symmetrize(alpha: FormMatrix, seed: int = 0, attempts: int = 6) -> SymmetrizeResult:
    """A symmetric beta = h * alpha with h = (f + g^t)/2 invertible, so coker beta = coker alpha."""
    R = alpha.ring
    Fld = R.field
    if Fld.p == 2:
        raise SymmetrizeError("char 2 unsupported")
    if alpha.nrows != alpha.ncols:
        raise SymmetrizeError("no lift found: alpha is not square")
    try:
        if is_symmetric(alpha) and layout_shift(alpha) == -5:
            I = FormMatrix.identity(alpha.target)
            return SymmetrizeResult(alpha, I, FormMatrix.identity(alpha.source), 1, 0)
    except LayoutError:
        pass
    unknowns, null, duals = duality_pairs(alpha)
    if not null:
        raise SymmetrizeError("no lift found")
    rng = random.Random(seed)
    half = Fld.inv(Fld(2))
    skew_seen = False
    for attempt in range(1, attempts + 1):
        coeffs = [Fld.random(rng, bound=50) for _ in null]
        vec = [Fld.zero()] * len(unknowns)
        for c, b in zip(coeffs, null):
            if c:
                vec = [Fld.add(x, Fld.mul(c, y)) for x, y in zip(vec, b)]
        f, g = _assemble(alpha, unknowns, vec, duals)
        for sign in (1, -1):
            h_ent = [[(f.entries[i][j] + g.entries[j][i].scale(sign)).scale(half)
                      for j in range(f.ncols)] for i in range(f.nrows)]
            h = FormMatrix(f.source, f.target, h_ent)
            dh = determinant(h)
            if dh and dh.is_constant():
                if sign == -1:
                    skew_seen = True
                    continue
                beta = h @ alpha
                return SymmetrizeResult(beta, f, g, sign, attempt)
    if skew_seen:
        raise SymmetrizeError("only a skew-symmetric beta was found (lambda = -1)")
    raise SymmetrizeError("no lift found")


__all__ = [
    "CheckResult", "ConductorResult", "LociResult", "ProjectionDatum", "SymmetrizeError",
    "SymmetrizeResult", "VerificationReport", "conductor", "duality_pairs", "expected_bundle",
    "expected_line_twists", "further_rank_condition", "loci", "loci_predictions",
    "matrix_factorization_check", "plurigenus_check", "predicted_gamma_degree", "predicted_t_degree",
    "ring_condition", "squarefree_probe", "symmetrize", "symmetry_check", "verify",
]
