"""Basis-independent invariants of a single form or polyvector.

Everything here reduces to exact integer or rational linear algebra: the
contraction operator L_phi, its kernel, the stabilizer algebra inside
gl(n, Q), and the length/sign data of codimension-two forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .exterior import (
    DegreeError,
    Form,
    FormError,
    LinMap,
    MultiIndex,
    Polyvector,
    VolumeForm,
    normalize_index,
    poincare_inv,
    pullback,
)
from .linalg import (
    Scalar,
    nullspace_rows,
    parity_sign,
    rank_rows,
    skew_pairs,
)

__all__ = [
    "rank",
    "kernel_vectors",
    "is_multisymplectic",
    "Reduction",
    "reduce_form",
    "infinitesimal_act",
    "StabAlgebra",
    "stabilizer_algebra",
    "orbit_dimension",
    "is_stable",
    "LengthSign",
    "length_and_sign",
    "NilpotencyWitness",
    "nilpotency_witness_degenerate",
    "orientation_reversing_stabilizer_witness",
]


def _contraction_rows(t) -> tuple[list[MultiIndex], list[list[Fraction]]]:
    """Matrix of v -> i_v(t) in coordinates.

    Rows are indexed by the degree k-1 multi-indices that actually occur,
    columns by the contraction direction 1..n.  The same construction serves
    forms and polyvectors; only the variance of the answer differs.
    """
    n = t.n
    rows: dict[MultiIndex, list[Fraction]] = {}
    for idx, c in t.terms.items():
        for p, i in enumerate(idx):
            rest = idx[:p] + idx[p + 1 :]
            row = rows.get(rest)
            if row is None:
                row = [Fraction(0)] * n
                rows[rest] = row
            row[i - 1] += -c if p % 2 else c
    keys = sorted(rows)
    return keys, [rows[key] for key in keys]


def rank(t) -> int:
    """Dimension of the image of v -> i_v(t); the support dimension of t."""
    if t.k < 1:
        raise DegreeError("rank needs degree at least 1")
    _, rows = _contraction_rows(t)
    return rank_rows(rows, t.n)


def _kernel_basis(t) -> tuple[list[list[int]], list[int]]:
    _, rows = _contraction_rows(t)
    return nullspace_rows(rows, t.n)


def kernel_vectors(phi: Form) -> list[Polyvector]:
    """Basis of {v : i_v(phi) = 0}; size n - rank(phi)."""
    if phi.k < 1:
        raise DegreeError("kernel_vectors needs degree at least 1")
    basis, _ = _kernel_basis(phi)
    return [Polyvector.from_coords(b) for b in basis]


def is_multisymplectic(phi: Form) -> bool:
    return rank(phi) == phi.n


def _complement_frame(t) -> tuple[LinMap, int]:
    """Invertible frame whose first r columns span a complement of ker L_t.

    The complement is spanned by the coordinate directions at which the
    echelon form of L_t has pivots; the remaining columns are the kernel
    basis itself, so the frame splits R^n as (complement) + (kernel).
    """
    n = t.n
    kernel, free = _kernel_basis(t)
    pivot_cols = [c for c in range(n) if c not in set(free)]
    cols: list[list[Scalar]] = []
    for c in pivot_cols:
        cols.append([int(i == c) for i in range(n)])
    cols.extend(kernel)
    return LinMap.from_columns(cols), len(pivot_cols)


@dataclass(frozen=True)
class Reduction:
    """A form rewritten on the minimal dimension it actually uses.

    embedding holds the first r columns of the frame: the map R^r -> R^n
    identifying the reduced coordinates with a complement of the kernel.
    reconstruct() is an exact inverse of the reduction.
    """

    r: int
    reduced: Form
    embedding: tuple[tuple[Fraction, ...], ...]
    frame: LinMap
    original_n: int

    def reconstruct(self) -> Form:
        inflated = Form(self.original_n, self.reduced.k, dict(self.reduced.terms))
        return pullback(self.frame.inverse(), inflated)


def reduce_form(phi: Form) -> Reduction:
    """Split off ker L_phi and express phi on the complement, relabeled to R^r."""
    if phi.k < 1:
        raise DegreeError("reduce needs degree at least 1")
    n = phi.n
    if phi.is_zero:
        return Reduction(
            r=0,
            reduced=Form(0, phi.k),
            embedding=tuple(() for _ in range(n)),
            frame=LinMap.identity(n),
            original_n=n,
        )
    frame, r = _complement_frame(phi)
    raw = pullback(frame, phi)
    for idx in raw.terms:
        if idx and idx[-1] > r:
            raise AssertionError("reduction left support outside the complement")
    reduced = Form(r, phi.k, dict(raw.terms))
    embedding = tuple(row[:r] for row in frame.entries)
    return Reduction(r=r, reduced=reduced, embedding=embedding, frame=frame, original_n=n)


def infinitesimal_act(A: LinMap, phi: Form) -> Form:
    """Derivative at the identity of t -> act(exp(tA), phi).

    On a basis form this is minus the sum over slots of substituting A into
    that slot; A = Id gives -k * phi.
    """
    if A.n != phi.n:
        raise FormError(f"dimension {A.n} != {phi.n}")
    n = phi.n
    ent = A.entries
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in phi.terms.items():
        for p, i in enumerate(idx):
            arow = ent[i - 1]
            for b in range(1, n + 1):
                a = arow[b - 1]
                if not a:
                    continue
                norm = normalize_index(idx[:p] + (b,) + idx[p + 1 :])
                if norm is None:
                    continue
                jdx, sign = norm
                acc = out.get(jdx, 0) - sign * a * c
                if acc:
                    out[jdx] = acc
                else:
                    out.pop(jdx, None)
    return Form(n, phi.k, out)


@dataclass(frozen=True)
class StabAlgebra:
    """Annihilator of phi inside gl(n, Q): all A with infinitesimal_act(A, phi) = 0.

    The integer matrices in _flat are the same basis as `basis`, kept flat
    (row-major, length n*n) for structure-constant extraction; each is
    supported at exactly one of the _free coordinates among the free ones,
    so coordinates in this basis can be read off directly.
    """

    n: int
    dim: int
    basis: tuple[LinMap, ...]
    _flat: tuple[tuple[int, ...], ...] = field(repr=False)
    _free: tuple[int, ...] = field(repr=False)


def stabilizer_algebra(phi: Form) -> StabAlgebra:
    n = phi.n
    cols = n * n
    rows: dict[MultiIndex, list[Fraction]] = {}
    for idx, c in phi.terms.items():
        for p, i in enumerate(idx):
            for b in range(1, n + 1):
                norm = normalize_index(idx[:p] + (b,) + idx[p + 1 :])
                if norm is None:
                    continue
                jdx, sign = norm
                row = rows.get(jdx)
                if row is None:
                    row = [Fraction(0)] * cols
                    rows[jdx] = row
                row[(i - 1) * n + (b - 1)] -= sign * c
    ordered = [rows[key] for key in sorted(rows)]
    basis_flat, free = nullspace_rows(ordered, cols)
    mats = tuple(
        LinMap([vec[r * n : (r + 1) * n] for r in range(n)]) for vec in basis_flat
    )
    return StabAlgebra(
        n=n,
        dim=len(basis_flat),
        basis=mats,
        _flat=tuple(tuple(v) for v in basis_flat),
        _free=tuple(free),
    )


def orbit_dimension(phi: Form) -> int:
    return phi.n * phi.n - stabilizer_algebra(phi).dim


def is_stable(phi: Form) -> bool:
    """True when the orbit of phi is open: orbit dimension fills the degree space."""
    return orbit_dimension(phi) == comb(phi.n, phi.k)


@dataclass(frozen=True)
class LengthSign:
    """Martinet data of a codimension-two form.

    length is half the rank of the dual bivector.  lam is the coefficient
    class of the canonical form, defined only at maximal length 2l = n, where
    it is +1 or -1 and invariant under orientation-preserving changes of
    basis.  sign = lam^length there; it is invariant under all of GL and,
    together with length, decides the orbit.  The zero form reports (0, None, 0),
    and sign is 1 whenever 0 < 2*length < n.
    """

    length: int
    lam: Fraction | None
    sign: int


def _bivector_matrix(xi: Polyvector) -> list[list[Fraction]]:
    n = xi.n
    S = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in xi.terms.items():
        S[i - 1][j - 1] = c
        S[j - 1][i - 1] = -c
    return S


def length_and_sign(phi: Form, omega: VolumeForm) -> LengthSign:
    if phi.k != phi.n - 2:
        raise DegreeError(f"degree {phi.k} is not {phi.n} - 2")
    if phi.is_zero:
        return LengthSign(0, None, 0)
    xi = poincare_inv(omega, phi)
    pairs, det_c = skew_pairs(_bivector_matrix(xi))
    l = len(pairs)
    if 2 * l < phi.n:
        return LengthSign(l, None, 1)
    # Maximal length: the pair positions exhaust 1..n.  Reordering them into
    # leading position is a permutation whose sign, with the accumulated
    # congruence determinant, fixes the coefficient class exactly: Sp(n, Q)
    # has determinant one, so no basis choice can disturb it.
    flat = [i + 1 for pair in pairs for i in pair]
    det_p = parity_sign(flat)
    lam_exact = omega.scale / (det_p * det_c)
    lam = Fraction(1 if lam_exact > 0 else -1)
    sign = int(lam) if l % 2 else 1
    return LengthSign(l, lam, sign)


@dataclass(frozen=True)
class NilpotencyWitness:
    """A one-parameter subgroup of SL(n) contracting a degenerate polyvector.

    The curve is g(t) = basis . diag(t^w) . basis^{-1}; its action scales the
    witnessed polyvector by t^rate.  Exponents are listed in the eigenbasis
    order: support directions first, then the complement.
    """

    exponents: tuple[int, ...]
    rate: int
    basis: LinMap

    def curve(self, t: Scalar) -> LinMap:
        t = Fraction(t)
        if not t:
            raise FormError("curve parameter must be nonzero")
        diag = LinMap.diagonal([t**w for w in self.exponents])
        return self.basis @ diag @ self.basis.inverse()


def nilpotency_witness_degenerate(x: Polyvector) -> NilpotencyWitness:
    """Witness that a degenerate polyvector is contracted to zero inside SL(n).

    The support of x (the smallest subspace carrying it) is the common
    annihilator of the covectors killed by contraction into x.  Weighting
    support directions by n - r and the rest by -r gives a traceless weight
    vector whose curve scales x by t^(k(n - r)).
    """
    if x.is_zero:
        raise FormError("zero polyvector has no nilpotency witness")
    if x.k < 1:
        raise DegreeError("witness needs degree at least 1")
    n = x.n
    covectors, _ = _kernel_basis(x)
    support, free = nullspace_rows(covectors, n)
    r = len(support)
    if r == n:
        raise FormError("no witness by this construction: polyvector is non-degenerate")
    pivot_cols = [c for c in range(n) if c not in set(free)]
    cols: list[list[Scalar]] = list(support)
    cols.extend([int(i == c) for i in range(n)] for c in pivot_cols)
    basis = LinMap.from_columns(cols)
    exponents = tuple([n - r] * r + [-r] * (n - r))
    rate = x.k * (n - r)
    return NilpotencyWitness(exponents=exponents, rate=rate, basis=basis)


def orientation_reversing_stabilizer_witness(phi: Form) -> LinMap:
    """A determinant -1 matrix fixing phi: reflect one kernel direction.

    Exists exactly when phi is degenerate; the complement of the kernel is
    left untouched, so the pullback cannot see the reflection.
    """
    if phi.k < 1:
        raise DegreeError("witness needs degree at least 1")
    if phi.is_zero:
        return LinMap.diagonal([-1] + [1] * (phi.n - 1))
    frame, r = _complement_frame(phi)
    n = phi.n
    if r == n:
        raise FormError("no witness by this construction: form is non-degenerate")
    reflect = LinMap.diagonal([1] * r + [-1] + [1] * (n - r - 1))
    return frame @ reflect @ frame.inverse()
