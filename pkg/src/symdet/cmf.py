"""CMF v1: a line-oriented text format for graded matrices of forms.

    # comment
    field q | fp <prime>
    vars <name>+
    grading standard | bidegree <split-index>
    twists <int>+                  target twists; source is -5 - t
    source <int>+ / target <int>+  explicit layout instead of twists
    entry <i> <j> : <polynomial>   1-indexed; omitted entries are 0
    sym                            mirror entries across the diagonal
    summand O(<a>) x<mult> | summand Omega(<p>,<t>) x<mult>
    generator <polynomial>         ideal container (no matrix)
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra_core.field import CoefficientError, FieldSpec
from .algebra_core.ideal import Ideal
from .algebra_core.modules import GradedFreeModule
from .algebra_core.poly import ParseError, Polynomial, format_polynomial, parse_polynomial
from .algebra_core.ring import RingSpec
from .formmatrix import SYMMETRIC_SHIFT, FormMatrix, validate
from .monad import BundleSum, SummandKind

CMF_VERSION = 1


@dataclass
class CMFDocument:
    ring: RingSpec
    matrix: FormMatrix | None = None
    summands: BundleSum | None = None
    ideal: Ideal | None = None
    symmetric_layout: bool = False
    comments: list = field(default_factory=list)


def _ints(words, lineno, what):
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ParseError(f"{what} must be integers", line=lineno) from None


def parse_cmf(text: str) -> CMFDocument:
    fld = None
    names = None
    grading = ("standard", None)
    twists = source = target = None
    raw_entries = []
    summands = []
    gens = []
    sym = False
    comments = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if line.strip().startswith("#"):
            comments.append(line.strip()[1:].strip())
        if not body:
            continue
        word, _, rest = body.partition(" ")
        rest = rest.strip()
        if word == "field":
            parts = rest.split()
            if parts == ["q"]:
                fld = FieldSpec.rationals()
            elif len(parts) == 2 and parts[0] == "fp":
                try:
                    fld = FieldSpec.prime(int(parts[1]))
                except (ValueError, CoefficientError) as e:
                    raise ParseError(f"bad field: {e}", line=lineno) from None
            else:
                raise ParseError("field must be 'q' or 'fp <prime>'", line=lineno)
        elif word == "vars":
            names = rest.split()
            if not names:
                raise ParseError("vars needs at least one name", line=lineno)
        elif word == "grading":
            parts = rest.split()
            if parts == ["standard"]:
                grading = ("standard", None)
            elif len(parts) == 2 and parts[0] == "bidegree":
                grading = ("bidegree", _ints(parts[1:], lineno, "split index")[0])
            else:
                raise ParseError("grading must be 'standard' or 'bidegree <split>'", line=lineno)
        elif word == "twists":
            twists = _ints(rest.split(), lineno, "twists")
        elif word == "source":
            source = _ints(rest.split(), lineno, "source twists")
        elif word == "target":
            target = _ints(rest.split(), lineno, "target twists")
        elif word == "entry":
            head, colon, poly = rest.partition(":")
            if not colon:
                raise ParseError("entry needs ':' before the polynomial", line=lineno)
            ij = _ints(head.split(), lineno, "entry indices")
            if len(ij) != 2:
                raise ParseError("entry needs two indices", line=lineno)
            raw_entries.append((ij[0], ij[1], poly.strip(), lineno))
        elif word == "sym":
            sym = True
        elif word == "summand":
            parts = rest.split()
            mult = 1
            if len(parts) == 2 and parts[1].startswith("x"):
                mult = _ints([parts[1][1:]], lineno, "multiplicity")[0]
            elif len(parts) != 1:
                raise ParseError("summand syntax: summand O(a) x<mult>", line=lineno)
            try:
                summands.append((SummandKind.from_text(parts[0]), mult))
            except ValueError as e:
                raise ParseError(str(e), line=lineno) from None
        elif word == "generator":
            gens.append((rest, lineno))
        else:
            raise ParseError(f"unknown directive {word!r}", line=lineno)
    if names is None:
        raise ParseError("missing vars")
    fld = fld or FieldSpec.rationals()
    try:
        if grading[0] == "standard":
            ring = RingSpec.standard(names, fld)
        else:
            ring = RingSpec.bigraded(names, grading[1], fld)
    except ValueError as e:
        raise ParseError(f"bad ring: {e}") from None
    doc = CMFDocument(ring, comments=comments)
    if summands:
        doc.summands = BundleSum(tuple(summands))
    if gens:
        polys = [_poly(t, ring, n) for t, n in gens]
        bad = [n for p, (_, n) in zip(polys, gens) if not p.is_homogeneous()]
        if bad:
            raise ParseError("generator is not homogeneous", line=bad[0])
        doc.ideal = Ideal(ring, polys)
    if raw_entries or twists is not None or source is not None or target is not None:
        doc.matrix, doc.symmetric_layout = _matrix(ring, twists, source, target, raw_entries, sym)
    return doc


def _poly(text, ring, lineno):
    try:
        return parse_polynomial(text, ring)
    except ParseError as e:
        raise ParseError(e.message, e.position, lineno) from None
    except (CoefficientError, ValueError) as e:
        raise ParseError(str(e), line=lineno) from None


def _matrix(ring, twists, source, target, raw, sym):
    if twists is not None:
        if source is not None or target is not None:
            raise ParseError("use either twists or source/target, not both")
        tgt = GradedFreeModule(ring, tuple(twists))
        src = tgt.dual_shift(SYMMETRIC_SHIFT)
        symmetric_layout = True
    elif source is not None and target is not None:
        src = GradedFreeModule(ring, tuple(source))
        tgt = GradedFreeModule(ring, tuple(target))
        symmetric_layout = False
    else:
        raise ParseError("missing twists")
    zero = Polynomial.zero(ring)
    entries = [[zero] * src.rank for _ in range(tgt.rank)]
    seen = {}
    for i, j, text, lineno in raw:
        if not (1 <= i <= tgt.rank and 1 <= j <= src.rank):
            raise ParseError(f"entry ({i},{j}) outside a {tgt.rank} x {src.rank} matrix", line=lineno)
        p = _poly(text, ring, lineno)
        cells = [(i, j)] + ([(j, i)] if sym and i != j else [])
        for a, b in cells:
            if (a, b) in seen and seen[(a, b)] != p:
                raise ParseError(f"conflicting values for entry ({a},{b})", line=lineno)
            if sym and not (1 <= a <= tgt.rank and 1 <= b <= src.rank):
                raise ParseError("sym needs a square matrix", line=lineno)
            seen[(a, b)] = p
            entries[a - 1][b - 1] = p
    m = FormMatrix(src, tgt, entries)
    bad = validate(m)
    if bad:
        raise ParseError("homogeneity violations: " + "; ".join(str(v) for v in bad))
    return m, symmetric_layout


def format_cmf(doc_or_matrix, summands: BundleSum | None = None, comments=()) -> str:
    """Text for a matrix (or a document); parse_cmf(format_cmf(x)) gives back an equal value."""
    if isinstance(doc_or_matrix, CMFDocument):
        doc = doc_or_matrix
        m, ring, summands, ideal = doc.matrix, doc.ring, doc.summands, doc.ideal
        comments = comments or doc.comments
    else:
        m, ideal = doc_or_matrix, None
        ring = m.ring if m is not None else None
    lines = [f"# {c}" for c in comments]
    lines.append(ring.field.cmf_header())
    lines.append("vars " + " ".join(ring.variable_names))
    if ring.is_standard:
        lines.append("grading standard")
    else:
        split = sum(1 for g in ring.grading if g == (1, 0))
        lines.append(f"grading bidegree {split}")
    if summands is not None:
        lines.extend(summands.to_cmf())
    if m is not None:
        tw = list(m.target.twists)
        if list(m.source.twists) == [SYMMETRIC_SHIFT - t for t in tw]:
            lines.append("twists " + " ".join(map(str, tw)))
        else:
            lines.append("source " + " ".join(map(str, m.source.twists)))
            lines.append("target " + " ".join(map(str, tw)))
        for i, row in enumerate(m.entries):
            for j, f in enumerate(row):
                if f:
                    lines.append(f"entry {i + 1} {j + 1} : {format_polynomial(f)}")
    if ideal is not None:
        for g in ideal.generators:
            lines.append(f"generator {format_polynomial(g)}")
    return "\n".join(lines) + "\n"
