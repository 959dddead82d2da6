"""Independent reference computations used by the tests.

Nothing here calls the package's own linear algebra or Groebner code.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product


def _nonzero(x, p) -> bool:
    return x % p != 0 if p else x != 0


def rank(rows: list[list], p: int | None) -> int:
    """Rank by plain Gaussian elimination over GF(p) or Q (p = None)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    if p is None:
        m = [[Fraction(x) for x in r] for r in m]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if _nonzero(m[i][c], p)), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if p:
            inv = pow(m[r][c] % p, -1, p)
            m[r] = [(x * inv) % p for x in m[r]]
        else:
            v = m[r][c]
            m[r] = [x / v for x in m[r]]
        for i in range(len(m)):
            if i != r and _nonzero(m[i][c], p):
                f = m[i][c]
                m[i] = [(a - f * b) % p if p else a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def monomials(n: int, d: int) -> list[tuple]:
    if d < 0:
        return []
    if n == 1:
        return [(d,)]
    return [(a,) + rest for a in range(d, -1, -1) for rest in monomials(n - 1, d - a)]


def hilbert_function_by_rank(gens: list[dict], n: int, d: int, p: int | None) -> int:
    """dim_k (k[x]/I)_d with I spanned in degree d by monomial multiples of the generators.

    gens are dicts {exponent: coefficient} of homogeneous polynomials.
    """
    basis = monomials(n, d)
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for g in gens:
        deg = sum(next(iter(g)))
        for m in monomials(n, d - deg):
            row = [0] * len(basis)
            for e, c in g.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] += c
            rows.append(row)
    return len(basis) - rank(rows, p)


def leibniz_det(entries: list[list], mul, add, zero):
    """Determinant by the permutation expansion."""
    n = len(entries)
    total = zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = None
        for i in range(n):
            term = entries[i][perm[i]] if term is None else mul(term, entries[i][perm[i]])
        total = add(total, term if sign > 0 else -term)
    return total


def bundle_types_brute_force(rank_total: int, degree_total: int, require_d_ge_r: bool) -> set:
    """All multisets of (r, d) with positive entries, found by trying every tuple of up to 3 parts."""
    found = set()
    for k in range(1, rank_total + 1):
        for parts in product(product(range(1, rank_total + 1), range(1, degree_total + 1)), repeat=k):
            if sum(r for r, _ in parts) != rank_total or sum(d for _, d in parts) != degree_total:
                continue
            if require_d_ge_r and any(d < r for r, d in parts):
                continue
            found.add(tuple(sorted(parts)))
    return found
