"""Numerical classification: inequalities, bundle types, strata, Chow arithmetic, invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb

from .algebra_core.field import FieldSpec
from .algebra_core.poly import Polynomial
from .algebra_core.ring import RingSpec

PASS, FAIL, NA = "pass", "fail", "not-applicable"


class GeographyError(ValueError):
    pass


class BeauvilleViolation(GeographyError):
    pass


@dataclass(frozen=True)
class InvariantRecord:
    """Numerical invariants of a minimal surface of general type.

    K2 may be left open; the report then lists the range the inequalities allow.
    albanese is "surface" or "curve"; for a curve its genus b defaults to q.
    """

    pg: int
    q: int
    K2: int | None = None
    albanese: str | None = None
    b: int | None = None
    g: int | None = None
    canonical_degree: int | None = None

    def __post_init__(self):
        if self.pg < 0 or self.q < 0:
            raise GeographyError("p_g and q must be nonnegative")
        if self.albanese not in (None, "surface", "curve"):
            raise GeographyError("albanese must be 'surface' or 'curve'")
        if self.g is not None and self.g < 2:
            raise GeographyError("fibre genus must be at least 2")

    @property
    def chi(self) -> int:
        return 1 - self.q + self.pg

    @property
    def base_genus(self) -> int | None:
        if self.b is not None:
            return self.b
        if self.albanese == "curve" or self.q == 1:
            return self.q
        return None

    @property
    def is_pencil(self) -> bool:
        return self.albanese == "curve" or self.q == 1 or self.b is not None

    def as_dict(self) -> dict:
        return {"pg": self.pg, "q": self.q, "K2": self.K2, "chi": self.chi,
                "albanese": "curve" if self.is_pencil and self.albanese is None and self.q == 1 else self.albanese,
                "b": self.base_genus, "g": self.g, "canonical_degree": self.canonical_degree}


@dataclass
class InequalityCheck:
    name: str
    formula: str
    verdict: str
    forced: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"name": self.name, "formula": self.formula, "verdict": self.verdict, "forced": self.forced}


@dataclass
class InequalityReport:
    record: InvariantRecord
    checks: list
    forced: dict

    def check(self, name: str) -> InequalityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(c.verdict != FAIL for c in self.checks)

    def as_dict(self) -> dict:
        return {"record": self.record.as_dict(), "ok": self.ok,
                "checks": [c.as_dict() for c in self.checks], "forced": self.forced}


def _ineq(name, lhs, rel, rhs, text, applicable=True, on_equality=None):
    if not applicable:
        return InequalityCheck(name, text, NA)
    if lhs is None or rhs is None:
        return InequalityCheck(name, text + " (K^2 open)", NA)
    ok = lhs >= rhs if rel == ">=" else lhs <= rhs
    forced = [on_equality] if ok and lhs == rhs and on_equality else []
    return InequalityCheck(name, f"{text}: {lhs} {rel} {rhs}", PASS if ok else FAIL, forced)


def inequality_report(rec: InvariantRecord) -> InequalityReport:
    pg, q, K2, chi = rec.pg, rec.q, rec.K2, rec.chi
    b, g = rec.base_genus, rec.g
    checks = [
        _ineq("castelnuovo", chi, ">=", 1, "chi >= 1"),
        _ineq("castelnuovo_beauville", pg, ">=", 2 * q - 4, "p_g >= 2q - 4", q > 0,
              f"S is the product of a curve of genus 2 and a curve of genus {q - 2}"),
        _ineq("debarre", K2, ">=", 2 * pg, "K^2 >= 2 p_g", q > 0),
        _ineq("noether", K2, ">=", 2 * pg - 4, "K^2 >= 2 p_g - 4"),
        _ineq("bmy", K2, "<=", 9 * chi, "K^2 <= 9 chi"),
        _ineq("albanese_curve", K2, ">=", 2 * pg + 4 * q - 4, "K^2 >= 4q + 4 + 2(p_g - 4)",
              rec.is_pencil and q > 0),
        _ineq("debarre_degree_two", K2, ">=", 2 * pg + q - 1, "K^2 >= 2 p_g + q - 1",
              rec.canonical_degree == 2 and 1 <= q <= 3),
    ]
    fib = b is not None and g is not None
    e = (b - 1) * (g - 1) if fib else None
    checks.append(_ineq("arakelov", K2, ">=", 8 * e if fib else None, "K^2 >= 8(b-1)(g-1)", fib,
                        "the fibration has constant moduli"))
    checks.append(_ineq("beauville_fibration", chi, ">=", e, "chi >= (b-1)(g-1)", fib,
                        "the fibration is an etale bundle"))
    if fib and K2 is not None and chi - e > 0:
        lam = slope(K2, chi, b, g)
        lo = Fraction(4 * (g - 1), g)
        ok = lo <= lam <= 12
        forced = ["all fibres are hyperelliptic"] if ok and lam == lo else []
        checks.append(InequalityCheck("xiao_konno", f"4(g-1)/g <= lambda <= 12: {lo} <= {lam} <= 12",
                                      PASS if ok else FAIL, forced))
    else:
        checks.append(InequalityCheck("xiao_konno", "4(g-1)/g <= lambda <= 12", NA))
    return InequalityReport(rec, checks, forced_consequences(rec))


def _first_failure_free_k2(rec: InvariantRecord):
    lo = [2 * rec.pg - 4]
    if rec.q > 0:
        lo.append(2 * rec.pg)
    if rec.is_pencil and rec.q > 0:
        lo.append(2 * rec.pg + 4 * rec.q - 4)
    if rec.canonical_degree == 2 and 1 <= rec.q <= 3:
        lo.append(2 * rec.pg + rec.q - 1)
    return max(lo), 9 * rec.chi


def forced_consequences(rec: InvariantRecord) -> dict:
    """What the inequalities pin down for an Albanese pencil (and the K^2 range in general)."""
    lo, hi = _first_failure_free_k2(rec)
    out: dict = {"K2_range": [lo, hi]}
    if rec.q > 0 and 2 * rec.q - 4 == rec.pg:
        out["structure"] = f"product of a curve of genus 2 and a curve of genus {rec.q - 2}"
    b = rec.base_genus
    if not rec.is_pencil or b is None:
        return out
    chi = rec.chi
    if b >= 2:
        g_max = 1 + chi // (b - 1)
        out["fibre_genus_max"] = g_max
        if g_max < 2:
            out["contradiction"] = "no fibre genus >= 2 satisfies chi >= (b-1)(g-1)"
            return out
        if (b - 1) * (g_max - 1) == chi:
            out["etale_bundle_at_genus"] = g_max
            out["K2_if_etale"] = 8 * chi
        if g_max == 2 and (b - 1) == chi:
            out["fibre_genus"] = 2
            out["K2"] = 8 * chi
            out["structure"] = "etale bundle with fibre of genus 2: (F x B')/G"
    elif b == 1 and rec.K2 is not None and chi > 0:
        lam = Fraction(rec.K2, chi)
        # 4(g-1)/g <= lambda  <=>  g (4 - lambda) <= 4
        if lam < 4:
            out["fibre_genus_max"] = int(Fraction(4) / (4 - lam))
            out["slope"] = str(lam)
    return out


def slope(K2, chi, b, g) -> Fraction:
    """lambda(f) = (K^2 - 8(b-1)(g-1)) / (chi - (b-1)(g-1))."""
    e = (b - 1) * (g - 1)
    den = chi - e
    if den < 0:
        raise BeauvilleViolation(f"chi - (b-1)(g-1) = {den} < 0 violates Beauville's inequality")
    if den == 0:
        raise BeauvilleViolation("chi = (b-1)(g-1): the fibration is an etale bundle and the slope is undefined")
    return Fraction(K2 - 8 * e, den)


# ------------------------------------------------------------------ bundle types on an elliptic curve

def _all_multisets(total_r, total_d):
    seen = set()
    out = []

    def rec(parts, rr, dd):
        if rr == 0 and dd == 0:
            key = tuple(sorted(parts, reverse=True))
            if key not in seen:
                seen.add(key)
                out.append(key)
            return
        if rr <= 0 or dd <= 0:
            return
        for r in range(1, rr + 1):
            for d in range(1, dd + 1):
                rec(parts + [(r, d)], rr - r, dd - d)
    rec([], total_r, total_d)
    return out


BUNDLE_CASES = ("i", "ii", "iii", "iv")


def enumerate_bundle_types(require_d_ge_r: bool = True, rank: int = 3, degree: int = 4) -> list:
    """Splitting types {(r_i, d_i)} with sum r = rank, sum d = degree, parts ordered by slope."""
    types = []
    for ms in _all_multisets(rank, degree):
        if require_d_ge_r and any(d < r for r, d in ms):
            continue
        types.append(sorted(ms, key=lambda p: (-Fraction(p[1], p[0]), -p[0])))
    types.sort(key=lambda t: (len(t), [-r for r, _ in t]))
    return types


# ------------------------------------------------------------------ strata

@dataclass(frozen=True)
class StratumDescriptor:
    """One of the 10 labelled strata; "ii" groups the two sub-strata ii,0 and ii,1."""

    tag: str
    dimension: int
    description: str
    substrata: tuple = ()

    def as_dict(self) -> dict:
        return {"tag": self.tag, "dimension": self.dimension, "description": self.description,
                "substrata": list(self.substrata)}


_STRATA = (
    StratumDescriptor("i", 20, "case i"),
    StratumDescriptor("ii", 19, "case ii, split by whether L^4 is trivial", ("ii,0", "ii,1")),
    StratumDescriptor("iii", 18, "case iii"),
    StratumDescriptor("iv,I", 18, "case iv I, L trivial, L' neither 3- nor 4-torsion"),
    StratumDescriptor("iv,II", 19, "case iv II, L not 4-torsion"),
    StratumDescriptor("iv,III", 19, "case iv III, L not 4-torsion"),
    StratumDescriptor("iv,I,1/4", 18, "case iv I, L trivial, L' 4-torsion but not 2-torsion"),
    StratumDescriptor("iv,I,1/2", 19, "case iv I, L trivial, L' nontrivial 2-torsion"),
    StratumDescriptor("iv,I,1/3", 18, "case iv I, L trivial, L' nontrivial 3-torsion"),
    StratumDescriptor("iv,I,1", 19, "case iv I, L and L' trivial"),
)


def strata_table() -> list[StratumDescriptor]:
    return list(_STRATA)


def stratum_dimension(h0_sym4: int, h0_end: int) -> int:
    """1 + h^0(Sym^4 V') - h^0(End V'): the elliptic curve with its torsion datum plus |4D| modulo Aut."""
    return 1 + h0_sym4 - h0_end


def moduli_lower_bound(chi: int, K2: int) -> int:
    """-chi(T_S) + 4 = 10 chi - 2 K^2 + 4."""
    return 10 * chi - 2 * K2 + 4


# ------------------------------------------------------------------ Chow ring of P(V) over an elliptic curve

def chow_ring() -> RingSpec:
    return RingSpec.standard(("D", "F"), FieldSpec.rationals())


def chow_classes():
    R = chow_ring()
    return Polynomial.var(R, 0), Polynomial.var(R, 1)


def chow_eval(expr: Polynomial, e: int) -> int:
    """Degree of a codimension-3 class, using F^2 = 0, D^2 F = 1, D^3 = e."""
    if not expr:
        return 0
    if expr.ring.variable_names != ("D", "F"):
        raise GeographyError("expression must live in the ring of D, F")
    if not expr.is_homogeneous(3):
        raise GeographyError("expression must have total degree 3")
    values = {(3, 0): e, (2, 1): 1}
    total = Fraction(0)
    for exp, c in expr.coeffs.items():
        total += Fraction(c) * values.get(exp, 0)
    if total.denominator != 1:
        raise GeographyError("non-integral intersection number")
    return int(total)


# ------------------------------------------------------------------ degrees of direct images

def direct_image_degrees(chi: int, K2: int, i: int) -> int:
    """deg V_i = chi + i(i-1)/2 K^2."""
    if i < 1:
        raise GeographyError("i must be at least 1")
    return chi + i * (i - 1) // 2 * K2


def sym_power_degree(r: int, d: int, k: int) -> int:
    """deg Sym^k of a rank-r bundle of degree d on a curve: d * binomial(k + r - 1, r)."""
    if r < 1 or k < 0:
        raise GeographyError("need r >= 1 and k >= 0")
    return d * comb(k + r - 1, r)


def no_hyperelliptic_fibre(chi: int, K2: int) -> bool:
    """Sym^2 V = V_2 by degrees (rank 3, degree chi = 4 bundle V)."""
    return sym_power_degree(3, chi, 2) == direct_image_degrees(chi, K2, 2)


def u_dimension(chi: int, K2: int) -> int:
    """dim U with H^0(2K) = Sym^2 V* + U*: chi + K^2 - 10."""
    return chi + K2 - 10


# ------------------------------------------------------------------ fixed points

def _odd_pairs(x1: int):
    return [(x, y) for x in product((0, 1), repeat=3) for y in product((0, 1), repeat=3)
            if x[0] == x1 and sum(a * b for a, b in zip(x, y)) % 2 == 1]


def fixed_point_count() -> tuple[int, int]:
    """(card N, fixed points) with N = {(x, y) in ((Z/2)^3)^2 : x.y = 1, x_1 = 1}.

    Each element of N is the image of two fixed points, one for each lift of
    the half-period.
    """
    n = len(_odd_pairs(1))
    return n, 2 * n


def odd_characteristics(x1: int | None = None) -> int:
    """Odd theta characteristics in genus 3, optionally with x_1 fixed."""
    if x1 is None:
        return len(_odd_pairs(0)) + len(_odd_pairs(1))
    return len(_odd_pairs(x1))


# ------------------------------------------------------------------ special families

@dataclass(frozen=True)
class Polarization:
    d1: int
    d2: int
    d3: int


@dataclass(frozen=True)
class Z2Z2Cover:
    theta2: int


@dataclass(frozen=True)
class InvolutionQuotient:
    """S / iota for iota acting as -1 on 1-forms, trivially on 2-forms, with isolated fixed points."""

    of: object


@dataclass(frozen=True)
class FamilyInvariants:
    record: InvariantRecord
    family_dimension: int | None = None

    @property
    def triple(self) -> tuple:
        return self.record.pg, self.record.q, self.record.K2


def special_family_invariants(family) -> FamilyInvariants:
    if isinstance(family, Polarization):
        ds = (family.d1, family.d2, family.d3)
        if min(ds) < 1:
            raise GeographyError("polarization type must be positive")
        d = family.d1 * family.d2 * family.d3
        rec = InvariantRecord(pg=d - 1 + 3, q=3, K2=6 * d, albanese="surface")
        return FamilyInvariants(rec, 6 + d - 1)
    if isinstance(family, Z2Z2Cover):
        t = family.theta2
        if t <= 0 or t % 2:
            raise GeographyError("Theta^2 must be positive and even")
        return FamilyInvariants(InvariantRecord(pg=1 + 3 * (t // 2), q=2, K2=9 * t, albanese="surface"))
    if isinstance(family, InvolutionQuotient):
        base = special_family_invariants(family.of).record
        if base.K2 % 2:
            raise GeographyError("odd K^2 cannot halve")
        return FamilyInvariants(InvariantRecord(pg=base.pg, q=0, K2=base.K2 // 2))
    raise GeographyError(f"unknown family {family!r}")


def parse_family(text: str):
    """'polarization:1,1,2', 'z2z2:2' or 'quotient:1,1,2'."""
    kind, _, args = text.partition(":")
    try:
        nums = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise GeographyError(f"bad family arguments {args!r}") from None
    if kind == "polarization" and len(nums) == 3:
        return Polarization(*nums)
    if kind == "z2z2" and len(nums) == 1:
        return Z2Z2Cover(nums[0])
    if kind == "quotient" and len(nums) == 3:
        return InvolutionQuotient(Polarization(*nums))
    raise GeographyError(f"unknown family {text!r}")
