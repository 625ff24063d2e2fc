"""Exact linear algebra over the rationals.

Integer matrices go through fraction-free (Bareiss) elimination so intermediate
entries stay integral and growth stays polynomial; rational input is scaled
row-by-row to integers first, which changes neither rank nor nullspace.
Nothing in this module ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Scalar = int | Fraction

__all__ = [
    "as_fraction",
    "to_int_rows",
    "row_echelon_int",
    "rank_rows",
    "nullspace_rows",
    "det_fraction",
    "inverse_fraction",
    "inertia_fraction",
    "skew_pairs",
    "parity_sign",
    "primitive_vector",
]


def as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an int or Fraction, got {type(x).__name__}")


def _row_lcm(row: Iterable[Scalar]) -> int:
    l = 1
    for x in row:
        if isinstance(x, Fraction):
            d = x.denominator
            l = l * d // gcd(l, d)
    return l


def to_int_rows(rows: Sequence[Sequence[Scalar]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; rank and nullspace survive."""
    out = []
    for row in rows:
        l = _row_lcm(row)
        if l == 1:
            out.append([int(x) for x in row])
        else:
            out.append([int(x * l) for x in row])
    return out


def row_echelon_int(mat: list[list[int]], ncols: int) -> list[tuple[int, int]]:
    """Bareiss elimination, in place.  Returns the (row, col) pivot positions.

    The two-term update (p*a - f*b) // prev divides exactly because every
    intermediate entry is a minor of the original integer matrix.
    """
    nrows = len(mat)
    prev = 1
    pr = 0
    pivots: list[tuple[int, int]] = []
    for pc in range(ncols):
        sel = -1
        for r in range(pr, nrows):
            if mat[r][pc]:
                sel = r
                break
        if sel < 0:
            continue
        if sel != pr:
            mat[pr], mat[sel] = mat[sel], mat[pr]
        piv_row = mat[pr]
        p = piv_row[pc]
        for r in range(pr + 1, nrows):
            row = mat[r]
            f = row[pc]
            if f:
                for j in range(pc + 1, ncols):
                    row[j] = (p * row[j] - f * piv_row[j]) // prev
                row[pc] = 0
            elif prev != 1 or p != 1:
                for j in range(pc + 1, ncols):
                    row[j] = (p * row[j]) // prev
        prev = p
        pivots.append((pr, pc))
        pr += 1
        if pr == nrows:
            break
    return pivots


def rank_rows(rows: Sequence[Sequence[Scalar]], ncols: int) -> int:
    if not rows:
        return 0
    return len(row_echelon_int(to_int_rows(rows), ncols))


def primitive_vector(vec: Sequence[Fraction]) -> list[int]:
    """Clear denominators and divide by the content; leading nonzero made positive."""
    l = 1
    for x in vec:
        d = as_fraction(x).denominator
        l = l * d // gcd(l, d)
    ints = [int(x * l) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    lead = next(v for v in ints if v)
    if lead < 0:
        g = -g
    return [v // g for v in ints]


def nullspace_rows(
    rows: Sequence[Sequence[Scalar]], ncols: int
) -> tuple[list[list[int]], list[int]]:
    """Primitive integer basis of the right nullspace.

    Returns (basis, free_cols).  Basis vector t is supported on the pivot
    columns plus free_cols[t] only, so coordinates of any vector in the span
    can be read off at the free columns.
    """
    mat = to_int_rows(rows)
    pivots = row_echelon_int(mat, ncols)
    pivot_cols = {pc for _, pc in pivots}
    free = [c for c in range(ncols) if c not in pivot_cols]
    basis: list[list[int]] = []
    for f in free:
        x: list[Fraction | int] = [0] * ncols
        x[f] = Fraction(1)
        for pr, pc in reversed(pivots):
            row = mat[pr]
            s = Fraction(0)
            for j in range(pc + 1, ncols):
                rj = row[j]
                if rj and x[j]:
                    s += rj * x[j]
            x[pc] = -s / row[pc]
        basis.append(primitive_vector([as_fraction(v) for v in x]))
    return basis, free


def det_fraction(entries: Sequence[Sequence[Scalar]]) -> Fraction:
    n = len(entries)
    if n == 0:
        return Fraction(1)
    a = [[as_fraction(x) for x in row] for row in entries]
    det = Fraction(1)
    for c in range(n):
        sel = -1
        for r in range(c, n):
            if a[r][c]:
                sel = r
                break
        if sel < 0:
            return Fraction(0)
        if sel != c:
            a[c], a[sel] = a[sel], a[c]
            det = -det
        p = a[c][c]
        det *= p
        for r in range(c + 1, n):
            f = a[r][c] / p
            if f:
                row = a[r]
                prow = a[c]
                for j in range(c + 1, n):
                    row[j] -= f * prow[j]
    return det


def inverse_fraction(
    entries: Sequence[Sequence[Scalar]],
) -> list[list[Fraction]]:
    """Gauss-Jordan inverse; raises ZeroDivisionError on singular input."""
    n = len(entries)
    a = [[as_fraction(x) for x in row] for row in entries]
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        sel = -1
        for r in range(c, n):
            if a[r][c]:
                sel = r
                break
        if sel < 0:
            raise ZeroDivisionError("singular matrix")
        if sel != c:
            a[c], a[sel] = a[sel], a[c]
            inv[c], inv[sel] = inv[sel], inv[c]
        p = a[c][c]
        if p != 1:
            a[c] = [x / p for x in a[c]]
            inv[c] = [x / p for x in inv[c]]
        for r in range(n):
            if r == c:
                continue
            f = a[r][c]
            if f:
                arow, irow = a[r], inv[r]
                acr, icr = a[c], inv[c]
                for j in range(n):
                    arow[j] -= f * acr[j]
                    irow[j] -= f * icr[j]
    return inv


def inertia_fraction(sym: Sequence[Sequence[Scalar]]) -> tuple[int, int, int]:
    """Inertia (positive, negative, zero) of a symmetric rational matrix.

    Symmetric congruence elimination; when the active diagonal vanishes but an
    off-diagonal entry a_ij does not, adding row and column j to i produces the
    diagonal entry 2*a_ij (characteristic zero), after which elimination
    proceeds.  Congruence preserves inertia, so the count is exact.
    """
    m = len(sym)
    S = [[as_fraction(x) for x in row] for row in sym]
    active = list(range(m))
    p = q = 0
    while active:
        piv = next((i for i in active if S[i][i]), None)
        if piv is None:
            pair = None
            for ai, i in enumerate(active):
                for j in active[ai + 1 :]:
                    if S[i][j]:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                return p, q, len(active)
            i, j = pair
            for c in active:
                S[i][c] += S[j][c]
            for r in active:
                S[r][i] += S[r][j]
            piv = i
        d = S[piv][piv]
        if d > 0:
            p += 1
        else:
            q += 1
        active.remove(piv)
        for r in active:
            f = S[r][piv] / d
            if f:
                Sr, Sp = S[r], S[piv]
                for c in active:
                    Sr[c] -= f * Sp[c]
    return p, q, 0


def skew_pairs(
    skew: Sequence[Sequence[Scalar]],
) -> tuple[list[tuple[int, int]], Fraction]:
    """Normalize a skew-symmetric matrix by congruence.

    Returns (pairs, det_c) where the accumulated row operations C satisfy
    C S C^T = sum over pairs (i, j) of (E_ij - E_ji) and det_c = det(C).
    The number of pairs is half the rank of S.
    """
    m = len(skew)
    S = [[as_fraction(x) for x in row] for row in skew]
    active = list(range(m))
    pairs: list[tuple[int, int]] = []
    det_c = Fraction(1)
    while True:
        found = None
        for ai, i in enumerate(active):
            for j in active[ai + 1 :]:
                if S[i][j]:
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            return pairs, det_c
        i, j = found
        pvt = S[i][j]
        if pvt != 1:
            for c in range(m):
                S[j][c] /= pvt
            for r in range(m):
                S[r][j] /= pvt
            det_c /= pvt
        rest = [r for r in active if r != i and r != j]
        for r in rest:
            a, b = S[r][i], S[r][j]
            if a or b:
                Si, Sj, Sr = S[i], S[j], S[r]
                for c in range(m):
                    Sr[c] = Sr[c] - b * Si[c] + a * Sj[c]
                for rr in range(m):
                    row = S[rr]
                    row[r] = row[r] - b * row[i] + a * row[j]
        active = rest
        pairs.append((i, j))


def parity_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation written as a sequence of distinct values."""
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv % 2 else 1
