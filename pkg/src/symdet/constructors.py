"""Explicit constructions: the special sextic family, main-stream surfaces, the bidouble cover."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from .algebra_core.field import FieldSpec
from .algebra_core.groebner import Budget
from .algebra_core.ideal import Ideal, eliminate, saturation
from .algebra_core.linalg import nullspace, solve
from .algebra_core.poly import Polynomial, exponents_of_total_degree, monomials_of_degree, random_form
from .algebra_core.ring import RingSpec
from .formmatrix import FormMatrix, determinant

SEXTIC_VARIABLES = ("u0", "u1", "u2", "v")
CURVE_VARIABLES = ("x0", "x1", "x2", "y3", "y4", "w0", "w1", "w2", "z3", "z4")


class ConstructionError(ValueError):
    pass


class NotExpressible(ConstructionError):
    pass


# ------------------------------------------------------------------ small matrices

def _check_symmetric(m, name):
    if len(m) != 3 or any(len(r) != 3 for r in m):
        raise ConstructionError(f"{name} must be 3 x 3")
    for i in range(3):
        for j in range(3):
            if m[i][j] != m[j][i]:
                raise ConstructionError(f"{name} is not symmetric")


def compound2(m, F: FieldSpec):
    """Second compound matrix: entry (k, l) is the minor on the complements of k and l."""
    def comp(k):
        return [i for i in range(3) if i != k]
    out = []
    for k in range(3):
        row = []
        for l in range(3):
            (r0, r1), (c0, c1) = comp(k), comp(l)
            row.append(F.sub(F.mul(m[r0][c0], m[r1][c1]), F.mul(m[r0][c1], m[r1][c0])))
        out.append(row)
    return out


def _madd(A, B, F, s=1):
    return [[F.add(a, F.mul(F(s), b)) for a, b in zip(r, q)] for r, q in zip(A, B)]


def bilinear(m, xs, ws) -> Polynomial:
    """x^t m w for polynomial vectors xs, ws."""
    acc = None
    for i in range(3):
        for j in range(3):
            if m[i][j]:
                term = (xs[i] * ws[j]).scale(m[i][j])
                acc = term if acc is None else acc + term
    return acc if acc is not None else Polynomial.zero(xs[0].ring)


# ------------------------------------------------------------------ special sextic

@dataclass
class SexticInput:
    """Symmetric 3 x 3 matrices a, b, c of Q33, Q34, Q44 and a quartic B in u0, u1, u2."""

    a: list
    b: list
    c: list
    B_form: Polynomial | None = None
    field: FieldSpec = field(default_factory=FieldSpec.rationals)

    def __post_init__(self):
        F = self.field
        self.a = [[F(x) for x in r] for r in self.a]
        self.b = [[F(x) for x in r] for r in self.b]
        self.c = [[F(x) for x in r] for r in self.c]
        for m, name in ((self.a, "a"), (self.b, "b"), (self.c, "c")):
            _check_symmetric(m, name)
        if self.B_form is not None:
            B = self.B_form
            if B and (not B.is_homogeneous(4) or B.degree_in(3)):
                raise ConstructionError("B must be a quartic form in u0, u1, u2")

    @classmethod
    def random(cls, seed: int, field: FieldSpec | None = None, with_B: bool = True) -> "SexticInput":
        F = field or FieldSpec.prime()
        rng = random.Random(seed)

        def sym():
            m = [[None] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(i, 3):
                    m[i][j] = m[j][i] = F.random(rng, bound=30)
            return m
        a, b, c = sym(), sym(), sym()
        B = None
        if with_B:
            R = sextic_ring(F)
            U = RingSpec.standard(SEXTIC_VARIABLES[:3], F)
            B = random_form(U, 4, rng).map_to(R, [0, 1, 2])
        return cls(a, b, c, B, F)


def sextic_ring(field: FieldSpec | None = None) -> RingSpec:
    return RingSpec.standard(SEXTIC_VARIABLES, field or FieldSpec.rationals())


def curve_ring(field: FieldSpec | None = None) -> RingSpec:
    return RingSpec.standard(CURVE_VARIABLES, field or FieldSpec.rationals())


class InvariantExpresser:
    """Writes (Z/2)^2-invariant polynomials on C' x C' in u0, u1, u2, v.

    u0 = x1 w2 - x2 w1, u1 = x0 w2 - x2 w0, u2 = x0 w1 - x1 w0 and
    v = y3 z4 - y4 z3, computed modulo the two genus-5 curve ideals.
    """

    def __init__(self, inp: SexticInput, budget: Budget | None = None):
        F = inp.field
        self.input = inp
        self.field = F
        self.R = curve_ring(F)
        self.S = sextic_ring(F)
        g = Polynomial.gens(self.R)
        x0, x1, x2, y3, y4, w0, w1, w2, z3, z4 = g
        self.x, self.w = [x0, x1, x2], [w0, w1, w2]
        self.Q = {name: (bilinear(m, self.x, self.x), bilinear(m, self.w, self.w))
                  for name, m in (("33", inp.a), ("34", inp.b), ("44", inp.c))}
        rels = [y3 * y3 - self.Q["33"][0], y4 * y4 - self.Q["44"][0], y3 * y4 - self.Q["34"][0],
                z3 * z3 - self.Q["33"][1], z4 * z4 - self.Q["44"][1], z3 * z4 - self.Q["34"][1]]
        self.ideal = Ideal(self.R, rels)
        self.basis = self.ideal.packed_basis(budget=budget)
        self.images = [x1 * w2 - x2 * w1, x0 * w2 - x2 * w0, x0 * w1 - x1 * w0, y3 * z4 - y4 * z3]
        self._nf_cache: dict = {}

    def _image(self, e) -> Polynomial:
        hit = self._nf_cache.get(e)
        if hit is None:
            p = Polynomial.one(self.R)
            for img, k in zip(self.images, e):
                if k:
                    p = p * img ** k
            hit = self.basis.normal_form(p)
            self._nf_cache[e] = hit
        return hit

    def substitute(self, g: Polynomial) -> Polynomial:
        """g(u(x, w), v(y, z)) reduced modulo the curve ideals."""
        acc = Polynomial.zero(self.R)
        for e, c in g.coeffs.items():
            acc = acc + self._image(e).scale(c)
        return acc

    def express(self, f: Polynomial) -> Polynomial:
        if f.ring != self.R:
            raise ConstructionError("f must live in the ring of the curve product")
        if not f:
            return Polynomial.zero(self.S)
        if not f.is_homogeneous() or f.total_degree() % 2:
            raise NotExpressible("not expressible: f is not of even total degree")
        d = f.total_degree() // 2
        cands = exponents_of_total_degree(4, d)
        target = self.basis.normal_form(f)
        keys: dict = {}
        cols = []
        for e in cands:
            cols.append({keys.setdefault(m, len(keys)): c for m, c in self._image(e).coeffs.items()})
        tgt = {keys.setdefault(m, len(keys)): c for m, c in target.coeffs.items()}
        rows = [dict() for _ in range(len(keys))]
        for j, col in enumerate(cols):
            for k, c in col.items():
                rows[k][j] = c
        rhs = [tgt.get(k, 0) for k in range(len(keys))]
        sol = solve(rows, rhs, len(cands), self.field)
        if sol is None:
            raise NotExpressible("not expressible in u0, u1, u2, v")
        g = Polynomial(self.S, {e: c for e, c in zip(cands, sol) if c}, True)
        if self.substitute(g) != target:
            raise ArithmeticError("substitution check failed")
        return g


def express_in_invariants(f: Polynomial, inp: SexticInput) -> Polynomial:
    return InvariantExpresser(inp).express(f)


@dataclass
class SexticOutput:
    input: SexticInput
    quartic_curve: Polynomial
    genus5_quadrics: list
    A_form: Polynomial
    A_form_symmetrized: Polynomial
    B_form: Polynomial
    C_form: Polynomial
    alpha_plus: FormMatrix
    sextic: Polynomial
    C_bilinear: Polynomial = None


def a_form_matrix(inp: SexticInput, variant: str = "as_written"):
    """-2 L b + L(a + c) - L a - L b, or with -L c in the last place for ``symmetrized``."""
    if variant not in ("as_written", "symmetrized"):
        raise ValueError("variant must be 'as_written' or 'symmetrized'")
    F = inp.field
    L = lambda m: compound2(m, F)
    last = inp.b if variant == "as_written" else inp.c
    M = _madd(L(_madd(inp.a, inp.c, F)), L(inp.b), F, -2)
    M = _madd(M, L(inp.a), F, -1)
    return _madd(M, L(last), F, -1)


def quadratic_in_u(M, S: RingSpec) -> Polynomial:
    u = Polynomial.gens(S)[:3]
    return bilinear(M, u, u)


def build_sextic(inp: SexticInput, variant: str = "as_written") -> SexticOutput:
    """alpha+ = [[v^5 + A v^3 + B v, C], [C, v]] and its determinant."""
    ex = InvariantExpresser(inp)
    R, S = ex.R, ex.S
    x, w = ex.x, ex.w
    q33, q34, q44 = ex.Q["33"][0], ex.Q["34"][0], ex.Q["44"][0]
    quartic = q33 * q44 - q34 * q34
    if not quartic:
        raise ConstructionError("degenerate input: Q33 Q44 - Q34^2 vanishes identically")
    gens = Polynomial.gens(R)
    y3, y4 = gens[3], gens[4]
    quadrics = [y3 * y3 - q33, y4 * y4 - q44, y3 * y4 - q34]
    rows = []
    for m in (inp.a, inp.b, inp.c):
        rows.append([bilinear(m, x, x), bilinear(m, w, x), bilinear(m, w, w)])
    Cxw = _det3(rows)
    if not Cxw:
        raise ConstructionError("degenerate input: C vanishes identically")
    C = ex.express(Cxw)
    A = quadratic_in_u(a_form_matrix(inp, variant), S)
    A_sym = quadratic_in_u(a_form_matrix(inp, "symmetrized" if variant == "as_written" else "as_written"), S)
    B = inp.B_form if inp.B_form is not None else Polynomial.zero(S)
    if B and B.ring != S:
        B = B.map_to(S, list(range(4)))
    v = Polynomial.var(S, 3)
    top = v ** 5 + A * v ** 3 + B * v
    alpha = FormMatrix.symmetric_layout(S, (0, -2), [[top, C], [C, v]])
    det = determinant(alpha)
    return SexticOutput(inp, quartic, quadrics, A, A_sym, B, C, alpha, det, Cxw)


def _det3(m) -> Polynomial:
    a, b, c = m
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


# ------------------------------------------------------------------ main stream

MAINSTREAM_SEED = 20240607
MAINSTREAM_PRIME = 10007


@dataclass
class MainstreamOutput:
    ring: RingSpec
    lam: object
    seed: int
    heisenberg_quadrics: tuple
    incidence_form: Polynomial
    ideal_W: Ideal
    base_ideal: Ideal
    chosen_section: Polynomial
    ideal_X: Ideal
    sigma_ideal: Ideal
    certificate: dict


def mainstream_ring(field: FieldSpec) -> RingSpec:
    return RingSpec.bigraded(("x0", "x1", "x2", "x3", "h0", "h1", "h2", "h3"), 4, field)


def heisenberg_quadrics(R: RingSpec, lam):
    x0, x1, x2, x3 = Polynomial.gens(R)[:4]
    l2 = R.field.mul(lam, lam)
    return (x0 * x0 + x2 * x2 - (x1 * x3).scale(l2), x1 * x1 + x3 * x3 - (x0 * x2).scale(l2))


def elliptic_quartic_is_smooth(lam, field: FieldSpec, budget: Budget | None = None) -> bool:
    """The pencil cuts a smooth curve: Q, Q' and the 2 x 2 Jacobian minors have no common zero."""
    R = RingSpec.standard(("x0", "x1", "x2", "x3"), field)
    Q, Q2 = heisenberg_quadrics(R, lam)
    J = [[Q.derivative(i) for i in range(4)], [Q2.derivative(i) for i in range(4)]]
    minors = [J[0][i] * J[1][j] - J[0][j] * J[1][i] for i, j in combinations(range(4), 2)]
    h = Ideal(R, [Q, Q2] + [m for m in minors if m]).hilbert(budget)
    return h.dimension < 0


def build_mainstream(lam=2, seed: int = MAINSTREAM_SEED, field: FieldSpec | None = None,
                     budget: Budget | None = None, method: str = "elimination") -> MainstreamOutput:
    """A main-stream surface X in W = (A x P^3dual) cap I and its canonical image Sigma.

    X is the residual of the pull-back B of the planes x0 x1 x2 = 0 in a
    section g of bidegree (2, 4) vanishing on B, so X has class (-1, 4).
    """
    F = field or FieldSpec.prime(MAINSTREAM_PRIME)
    lam = F(lam)
    t0 = time.time()
    if not elliptic_quartic_is_smooth(lam, F, budget):
        raise ConstructionError(f"lambda = {lam} gives a singular quartic curve")
    R = mainstream_ring(F)
    g8 = Polynomial.gens(R)
    xs, hs = g8[:4], g8[4:]
    Q, Q2 = heisenberg_quadrics(R, lam)
    iota = xs[0] * hs[0] + xs[1] * hs[1] + xs[2] * hs[2] + xs[3] * hs[3]
    I_W = Ideal(R, [Q, Q2, iota])
    planes = xs[0] * xs[1] * xs[2]
    # the 12 points of A on the planes all have x3 != 0, so saturating by x3
    # removes exactly the component at x = 0
    J = saturation(I_W + planes, xs[3], budget)
    rng = random.Random(seed)
    pbW = I_W.packed_basis(budget=budget)
    g = Polynomial.zero(R)
    for _ in range(5):
        g = _sample_section(J, (2, 4), R, rng)
        g = pbW.normal_form(g)
        if g:
            break
    if not g:
        raise ConstructionError("sampling kept producing sections in I_W")
    t1 = time.time()
    X = saturation(I_W + g, planes, budget)
    t2 = time.time()
    if method == "elimination":
        sigma = eliminate(X, [0, 1, 2, 3], budget)
        gens = sigma.minimal_generators_by_degree(budget)
        sigma = Ideal(sigma.ring, gens)
        degrees = [p.total_degree() for p in gens]
        principal = len(gens) == 1
    else:
        sigma, degrees, principal = _sigma_by_linear_algebra(X, budget)
    t3 = time.time()
    cert = {
        "lambda": F.to_text(lam), "seed": seed, "field": str(F),
        "section_bidegree": [2, 4], "residual_class": [-1, 4],
        "J_generators": len(J.generators), "X_generators": len(X.generators),
        "sigma_generator_degrees": degrees, "sigma_principal": principal,
        "sigma_degree": degrees[0] if principal else None,
        "method": method,
        "seconds": {"setup": round(t1 - t0, 3), "saturation": round(t2 - t1, 3),
                    "elimination": round(t3 - t2, 3)},
    }
    return MainstreamOutput(R, lam, seed, (Q, Q2), iota, I_W, J, g, X, sigma, cert)


def _sample_section(J: Ideal, bideg, R: RingSpec, rng) -> Polynomial:
    F = R.field
    acc = Polynomial.zero(R)
    for gen in J.generators:
        (dx, dh), = gen.multidegrees() if len(gen.multidegrees()) == 1 else ((None, None),)
        if dx is None or dx > bideg[0] or dh > bideg[1]:
            continue
        for e in monomials_of_degree(R, (bideg[0] - dx, bideg[1] - dh)):
            c = F.random(rng, bound=10_000)
            if c:
                acc = acc + gen.mul_term(e, c)
    return acc


def _sigma_by_linear_algebra(X: Ideal, budget):
    """Lowest-degree relation among the h's modulo X, found from grevlex normal forms.

    Degree by degree, the h-monomials are reduced modulo X; the first degree
    with a dependency gives the generator, and the next degree is checked to
    contain only its multiples (4 relations).
    """
    R = X.ring
    F = R.field
    pb = X.packed_basis(budget=budget)
    S = RingSpec.standard(("h0", "h1", "h2", "h3"), F)
    found = None
    for d in range(1, 30):
        mons = exponents_of_total_degree(4, d)
        null = _relations(pb, R, mons, F)
        if null:
            if len(null) != 1:
                return Ideal(S, []), [d] * len(null), False
            found = Polynomial(S, {e: c for e, c in zip(mons, null[0]) if c}, True)
            nxt = _relations(pb, R, exponents_of_total_degree(4, d + 1), F)
            return Ideal(S, [found]), [d], len(nxt) == 4
    return Ideal(S, []), [], False


def _relations(pb, R, mons, F):
    keys: dict = {}
    cols = []
    for e in mons:
        nf = pb.normal_form(Polynomial.monomial(R, (0, 0, 0, 0) + tuple(e)))
        cols.append({keys.setdefault(m, len(keys)): c for m, c in nf.coeffs.items()})
    rows = [dict() for _ in range(len(keys))]
    for j, col in enumerate(cols):
        for k, c in col.items():
            rows[k][j] = c
    return nullspace(rows, len(mons), F)


# ------------------------------------------------------------------ bidouble cover

@dataclass
class CoverPresentation:
    ring: RingSpec
    relations: list
    generators: list
    eigenspace_dims: dict
    quadric_check: dict

    def as_dict(self) -> dict:
        return {"relations": [str(r) for r in self.relations],
                "generators": [{"name": n, "character": c} for n, c in self.generators],
                "eigenspace_dims_degree2": self.eigenspace_dims,
                "quadric_check": self.quadric_check}


def build_cover_presentation(field: FieldSpec | None = None) -> CoverPresentation:
    """w_i^2 = x_j x_k and w_i x_i = w_j w_k over the cyclic index choices, plus bookkeeping.

    Characters of (Z/2)^2 are named chi0 (trivial), chi1, chi2, chi3 with
    chi_i chi_j = chi_k.  omega spans the chi0 part of H^0(K) and omega_i the
    chi_i part.  In degree 2 the chi0 part is H^0(D) with D = 3 Theta and the
    chi_i part is H^0(D - L_i) = H^0(2 Theta); on a principally polarized
    abelian surface h^0(L) = L^2 / 2 with Theta^2 = 2.
    """
    F = field or FieldSpec.rationals()
    R = RingSpec.standard(("x1", "x2", "x3", "w1", "w2", "w3"), F)
    x = Polynomial.gens(R)[:3]
    w = Polynomial.gens(R)[3:]
    rels = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        rels.append(w[i] * w[i] - x[j] * x[k])
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        rels.append(w[i] * x[i] - w[j] * w[k])
    gens = [("omega", "chi0"), ("omega1", "chi1"), ("omega2", "chi2"), ("omega3", "chi3")]
    theta2 = 2
    h0 = lambda k: (k * k * theta2) // 2
    dims = {"chi0": h0(3), "chi1": h0(2), "chi2": h0(2), "chi3": h0(2)}
    # degree-2 monomials in the omegas sorted by character
    counts = {"chi0": 0, "chi1": 0, "chi2": 0, "chi3": 0}
    names = [c for _, c in gens]
    for a in range(4):
        for b in range(a, 4):
            counts[_char_product(names[a], names[b])] += 1
    check = {"monomial_counts": counts, "eigenspace_dims": dims,
             "total_monomials": sum(counts.values()), "total_dim": sum(dims.values()),
             "no_forced_quadric": all(counts[c] <= dims[c] for c in dims)}
    return CoverPresentation(R, rels, gens, dims, check)


def _char_product(a: str, b: str) -> str:
    i, j = int(a[3:]), int(b[3:])
    if i == 0:
        return b
    if j == 0:
        return a
    if i == j:
        return "chi0"
    return f"chi{6 - i - j}"


__all__ = [
    "ConstructionError", "CoverPresentation", "InvariantExpresser", "MAINSTREAM_PRIME", "MAINSTREAM_SEED",
    "MainstreamOutput", "NotExpressible", "SexticInput", "SexticOutput", "a_form_matrix",
    "build_cover_presentation", "build_mainstream", "build_sextic", "compound2",
    "elliptic_quartic_is_smooth", "express_in_invariants", "heisenberg_quadrics", "sextic_ring",
]
