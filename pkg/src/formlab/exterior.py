"""Sparse exterior algebra over exact rationals.

Alternating tensors of degree k on R^n are stored as finite maps from strictly
increasing 1-based multi-indices to nonzero rationals.  Form is covariant
(basis e^{i1...ik}), Polyvector is contravariant (basis e_{i1...ik}).

Conventions, fixed once and used everywhere:

* The interior product contracts the first slot:
  i_v(e^{i1...ik}) = sum_j (-1)^(j-1) v^{i_j} e^{...without i_j...},
  which makes i_v an antiderivation of degree -1.
* multi_interior applies the factors of a decomposable polyvector in
  ascending order: i_{v1 ^ ... ^ vj} = i_{vj} o ... o i_{v1}.
* The left action of g on forms is pullback by g inverse, so that
  act(g1, act(g2, phi)) == act(g1 @ g2, phi).  On polyvectors the action is
  the direct image (g applied to every slot).

All arithmetic is exact; nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .linalg import Scalar, as_fraction, det_fraction, inverse_fraction

Rat = Fraction
MultiIndex = tuple[int, ...]

__all__ = [
    "Rat",
    "MultiIndex",
    "FormError",
    "DimensionMismatch",
    "DegreeError",
    "SingularMatrix",
    "OrientationError",
    "normalize_index",
    "contract_sign",
    "Form",
    "Polyvector",
    "LinMap",
    "VolumeForm",
    "InnerProduct",
    "wedge",
    "interior",
    "multi_interior",
    "act",
    "pullback",
    "act_vectors",
    "twisted_act",
    "poincare",
    "poincare_inv",
    "musical",
    "musical_inv",
]


class FormError(ValueError):
    """Base class for domain errors raised by this package."""


class DimensionMismatch(FormError):
    pass


class DegreeError(FormError):
    pass


class SingularMatrix(FormError):
    pass


class OrientationError(FormError):
    """Raised when an operation needs det > 0 and the matrix fails that."""


def normalize_index(seq: Sequence[int]) -> tuple[MultiIndex, int] | None:
    """Sort a multi-index, returning (sorted tuple, permutation sign).

    Returns None when an index repeats (the alternating tensor vanishes).
    """
    idx = list(seq)
    sign = 1
    for a in range(1, len(idx)):
        v = idx[a]
        b = a
        while b > 0 and idx[b - 1] > v:
            idx[b] = idx[b - 1]
            b -= 1
            sign = -sign
        idx[b] = v
    for a in range(1, len(idx)):
        if idx[a - 1] == idx[a]:
            return None
    return tuple(idx), sign


def contract_sign(outer: MultiIndex, inner: MultiIndex) -> tuple[MultiIndex, int] | None:
    """Contract basis vectors `inner` (ascending) into the basis form `outer`.

    Returns (remaining indices, sign) or None when inner is not a subset.
    Each step removes one index and contributes (-1)^(position) with the
    position counted from 0 in what remains, matching the first-slot rule.
    """
    rest = list(outer)
    sign = 1
    for j in inner:
        try:
            p = rest.index(j)
        except ValueError:
            return None
        if p % 2:
            sign = -sign
        del rest[p]
    return tuple(rest), sign


def _merge_disjoint(left: MultiIndex, right: MultiIndex) -> tuple[MultiIndex, int] | None:
    """Merge two increasing index tuples, counting the Koszul sign.

    None when they intersect.  The sign is (-1)^(number of transpositions
    needed to interleave right into left).
    """
    merged: list[int] = []
    sign = 1
    a, b = 0, 0
    la, lb = len(left), len(right)
    while a < la and b < lb:
        x, y = left[a], right[b]
        if x == y:
            return None
        if x < y:
            merged.append(x)
            a += 1
        else:
            merged.append(y)
            b += 1
            if (la - a) % 2:
                sign = -sign
    merged.extend(left[a:])
    merged.extend(right[b:])
    return tuple(merged), sign


def _clean_terms(
    n: int, k: int, terms: Mapping[MultiIndex, Scalar] | Iterable[tuple[MultiIndex, Scalar]]
) -> dict[MultiIndex, Fraction]:
    items = terms.items() if isinstance(terms, Mapping) else terms
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in items:
        idx = tuple(idx)
        if len(idx) != k:
            raise DegreeError(f"index {idx} has length {len(idx)}, expected {k}")
        prev = 0
        for i in idx:
            if not isinstance(i, int) or i <= prev or i > n:
                raise FormError(f"index {idx} is not strictly increasing within 1..{n}")
            prev = i
        c = as_fraction(c)
        if c:
            acc = out.get(idx)
            if acc is None:
                out[idx] = c
            else:
                acc = acc + c
                if acc:
                    out[idx] = acc
                else:
                    del out[idx]
    return out


class _Alternating:
    """Shared storage and linear structure of Form and Polyvector."""

    __slots__ = ("n", "k", "terms", "_hash")

    def __init__(
        self,
        n: int,
        k: int,
        terms: Mapping[MultiIndex, Scalar] | Iterable[tuple[MultiIndex, Scalar]] = (),
    ):
        if n < 0 or k < 0:
            raise FormError("dimension and degree must be nonnegative")
        cleaned = _clean_terms(n, k, terms)
        # Degrees above n only house the zero tensor (the wedge truncation
        # rule can produce them); anything nonzero there is a bug upstream.
        if k > n and cleaned:
            raise DegreeError(f"degree {k} exceeds dimension {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "terms", MappingProxyType(cleaned))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def zero(cls, n: int, k: int):
        return cls(n, k)

    @classmethod
    def basis(cls, n: int, idx: Sequence[int], coeff: Scalar = 1):
        idx = tuple(idx)
        norm = normalize_index(idx)
        if norm is None:
            return cls(n, len(idx))
        sorted_idx, sign = norm
        return cls(n, len(sorted_idx), {sorted_idx: sign * as_fraction(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, idx: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(idx), Fraction(0))

    def items(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items())

    def _require_peer(self, other):
        if type(other) is not type(self):
            raise TypeError(f"expected {type(self).__name__}, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"dimension {other.n} != {self.n}")
        if other.k != self.k:
            raise DegreeError(f"degree {other.k} != {self.k}")

    def __add__(self, other):
        self._require_peer(other)
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            acc = terms.get(idx)
            if acc is None:
                terms[idx] = c
            else:
                acc = acc + c
                if acc:
                    terms[idx] = acc
                else:
                    del terms[idx]
        return type(self)(self.n, self.k, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)(self.n, self.k, {i: -c for i, c in self.terms.items()})

    def scaled(self, c: Scalar):
        c = as_fraction(c)
        if not c:
            return type(self)(self.n, self.k)
        return type(self)(self.n, self.k, {i: c * v for i, v in self.terms.items()})

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scaled(Fraction(1) / as_fraction(c))

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other.n == self.n
            and other.k == self.k
            and other.terms == self.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((type(self).__name__, self.n, self.k, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def _basis_symbol(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}({self.n}, {self.k}, 0)"
        sym = self._basis_symbol()
        parts = []
        for idx, c in self.items():
            label = sym + "{" + ",".join(map(str, idx)) + "}" if idx else "1"
            parts.append(f"{c}*{label}" if idx else f"{c}")
        return f"{type(self).__name__}({self.n}, {self.k}, {' + '.join(parts)})"


class Form(_Alternating):
    """Alternating k-form on R^n with exact rational coefficients."""

    __slots__ = ()

    def _basis_symbol(self) -> str:
        return "e^"


class Polyvector(_Alternating):
    """Alternating k-vector on R^n with exact rational coefficients."""

    __slots__ = ()

    def _basis_symbol(self) -> str:
        return "e_"

    @classmethod
    def from_coords(cls, coords: Sequence[Scalar]) -> "Polyvector":
        """Degree-1 vector from a coordinate list."""
        n = len(coords)
        return cls(n, 1, {(i + 1,): as_fraction(c) for i, c in enumerate(coords) if c})

    def coords(self) -> list[Fraction]:
        if self.k != 1:
            raise DegreeError("coords() needs a degree-1 vector")
        out = [Fraction(0)] * self.n
        for (i,), c in self.terms.items():
            out[i - 1] = c
        return out


class LinMap:
    """Square rational matrix with a cached determinant.

    Represents both group elements g in GL(n, Q) and algebra elements
    A in gl(n, Q); rows index the output, columns the input.
    """

    __slots__ = ("n", "entries", "det")

    def __init__(self, entries: Sequence[Sequence[Scalar]]):
        n = len(entries)
        rows = []
        for row in entries:
            row = tuple(as_fraction(x) for x in row)
            if len(row) != n:
                raise DimensionMismatch("matrix must be square")
            rows.append(row)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", tuple(rows))
        object.__setattr__(self, "det", det_fraction(rows))

    def __setattr__(self, name, value):
        raise AttributeError("LinMap is immutable")

    @classmethod
    def identity(cls, n: int) -> "LinMap":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diag: Sequence[Scalar]) -> "LinMap":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Scalar]]) -> "LinMap":
        n = len(cols)
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @property
    def is_invertible(self) -> bool:
        return self.det != 0

    def inverse(self) -> "LinMap":
        if not self.det:
            raise SingularMatrix("matrix is singular")
        return LinMap(inverse_fraction(self.entries))

    def transpose(self) -> "LinMap":
        n = self.n
        return LinMap([[self.entries[j][i] for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if not isinstance(other, LinMap):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimension {other.n} != {self.n}")
        n = self.n
        a, b = self.entries, other.entries
        return LinMap(
            [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        )

    def apply(self, v: Polyvector) -> Polyvector:
        """Image of a degree-1 vector."""
        if v.k != 1:
            raise DegreeError("apply() needs a degree-1 vector")
        if v.n != self.n:
            raise DimensionMismatch(f"dimension {v.n} != {self.n}")
        coords = v.coords()
        out = [sum(row[j] * coords[j] for j in range(self.n)) for row in self.entries]
        return Polyvector.from_coords(out)

    def __eq__(self, other):
        return isinstance(other, LinMap) and other.entries == self.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"LinMap({[[str(x) for x in row] for row in self.entries]})"


class VolumeForm:
    """A nonzero multiple of e^{1...n}; the reference volume for duality."""

    __slots__ = ("n", "scale")

    def __init__(self, n: int, scale: Scalar = 1):
        scale = as_fraction(scale)
        if not scale:
            raise FormError("volume form must be nonzero")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "scale", scale)

    def __setattr__(self, name, value):
        raise AttributeError("VolumeForm is immutable")

    def as_form(self) -> Form:
        return Form(self.n, self.n, {tuple(range(1, self.n + 1)): self.scale})

    def __eq__(self, other):
        return isinstance(other, VolumeForm) and (other.n, other.scale) == (self.n, self.scale)

    def __repr__(self):
        return f"VolumeForm({self.n}, {self.scale})"


class InnerProduct:
    """Symmetric positive-definite rational matrix; checked on construction."""

    __slots__ = ("n", "matrix")

    def __init__(self, matrix: Sequence[Sequence[Scalar]]):
        n = len(matrix)
        rows = tuple(tuple(as_fraction(x) for x in row) for row in matrix)
        for row in rows:
            if len(row) != n:
                raise DimensionMismatch("inner product matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise FormError("inner product matrix must be symmetric")
        # Sylvester criterion: every leading principal minor positive.
        for m in range(1, n + 1):
            if det_fraction([row[:m] for row in rows[:m]]) <= 0:
                raise FormError("inner product matrix must be positive definite")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "matrix", rows)

    def __setattr__(self, name, value):
        raise AttributeError("InnerProduct is immutable")

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def is_identity(self) -> bool:
        return all(
            self.matrix[i][j] == (1 if i == j else 0)
            for i in range(self.n)
            for j in range(self.n)
        )

    def __repr__(self):
        return f"InnerProduct({[[str(x) for x in row] for row in self.matrix]})"


def wedge(a: _Alternating, b: _Alternating) -> _Alternating:
    """Exterior product of two forms or two polyvectors.

    Degrees add; when they exceed n the result is the zero tensor of that
    degree, which is the whole of the exterior power there.
    """
    if type(a) is not type(b):
        raise TypeError("wedge needs two tensors of the same variance")
    if a.n != b.n:
        raise DimensionMismatch(f"dimension {b.n} != {a.n}")
    k = a.k + b.k
    if k > a.n:
        return type(a)(a.n, k)
    out: dict[MultiIndex, Fraction] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            merged = _merge_disjoint(ia, ib)
            if merged is None:
                continue
            idx, sign = merged
            c = out.get(idx, 0) + sign * ca * cb
            if c:
                out[idx] = c
            else:
                out.pop(idx, None)
    return type(a)(a.n, k, out)


def interior(v: Polyvector, phi: Form) -> Form:
    """Contraction i_v(phi) of a degree-1 vector against the first slot."""
    if not isinstance(v, Polyvector) or v.k != 1:
        raise DegreeError("interior needs a degree-1 polyvector")
    if not isinstance(phi, Form):
        raise TypeError("interior needs a Form")
    if v.n != phi.n:
        raise DimensionMismatch(f"dimension {v.n} != {phi.n}")
    if phi.k < 1:
        raise DegreeError("cannot contract a 0-form")
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in phi.terms.items():
        for p, i in enumerate(idx):
            vc = v.terms.get((i,))
            if vc is None:
                continue
            rest = idx[:p] + idx[p + 1 :]
            term = (-vc if p % 2 else vc) * c
            acc = out.get(rest, 0) + term
            if acc:
                out[rest] = acc
            else:
                out.pop(rest, None)
    return Form(phi.n, phi.k - 1, out)


def multi_interior(X: Polyvector, phi: Form) -> Form:
    """Iterated contraction; on decomposables i_{v1^...^vj} = i_{vj} o ... o i_{v1}."""
    if not isinstance(X, Polyvector) or not isinstance(phi, Form):
        raise TypeError("multi_interior needs a Polyvector and a Form")
    if X.n != phi.n:
        raise DimensionMismatch(f"dimension {X.n} != {phi.n}")
    if X.k > phi.k:
        raise DegreeError(f"cannot contract degree {X.k} into degree {phi.k}")
    out: dict[MultiIndex, Fraction] = {}
    for jdx, xc in X.terms.items():
        for idx, c in phi.terms.items():
            hit = contract_sign(idx, jdx)
            if hit is None:
                continue
            rest, sign = hit
            acc = out.get(rest, 0) + sign * xc * c
            if acc:
                out[rest] = acc
            else:
                out.pop(rest, None)
    return Form(phi.n, phi.k - X.k, out)


def _minor(entries, rows: MultiIndex, cols: MultiIndex) -> Fraction:
    sub = [[entries[i - 1][j - 1] for j in cols] for i in rows]
    return det_fraction(sub)


def _transform(terms, entries, n: int, k: int, source_rows: bool) -> dict[MultiIndex, Fraction]:
    """Push coefficients through k x k minors of a matrix.

    source_rows selects whether the source multi-index picks rows (covariant
    pullback) or columns (contravariant direct image).
    """
    out: dict[MultiIndex, Fraction] = {}
    if k == 0:
        for idx, c in terms.items():
            out[idx] = out.get(idx, Fraction(0)) + c
        return {i: c for i, c in out.items() if c}
    targets = list(combinations(range(1, n + 1), k))
    for src, c in terms.items():
        for tgt in targets:
            d = _minor(entries, src, tgt) if source_rows else _minor(entries, tgt, src)
            if d:
                acc = out.get(tgt, 0) + c * d
                if acc:
                    out[tgt] = acc
                else:
                    out.pop(tgt, None)
    return out


def act(g: LinMap, phi: Form) -> Form:
    """Left action of g on forms: pullback by g inverse."""
    if not isinstance(phi, Form):
        raise TypeError("act needs a Form; use act_vectors for polyvectors")
    if g.n != phi.n:
        raise DimensionMismatch(f"dimension {g.n} != {phi.n}")
    if not g.det:
        raise SingularMatrix("group element must be invertible")
    h = inverse_fraction(g.entries)
    return Form(phi.n, phi.k, _transform(phi.terms, h, phi.n, phi.k, source_rows=True))


def pullback(m: LinMap, phi: Form) -> Form:
    """Raw pullback m^*(phi); not a left action.  act(g, .) == pullback(g.inverse(), .)."""
    if not isinstance(phi, Form):
        raise TypeError("pullback needs a Form")
    if m.n != phi.n:
        raise DimensionMismatch(f"dimension {m.n} != {phi.n}")
    return Form(phi.n, phi.k, _transform(phi.terms, m.entries, phi.n, phi.k, source_rows=True))


def act_vectors(g: LinMap, x: Polyvector) -> Polyvector:
    """Direct image of a polyvector: g applied to every slot."""
    if not isinstance(x, Polyvector):
        raise TypeError("act_vectors needs a Polyvector")
    if g.n != x.n:
        raise DimensionMismatch(f"dimension {g.n} != {x.n}")
    if not g.det:
        raise SingularMatrix("group element must be invertible")
    return Polyvector(x.n, x.k, _transform(x.terms, g.entries, x.n, x.k, source_rows=False))


def twisted_act(g: LinMap, lam: int, phi: Form) -> Form:
    """The lambda-twisted action (det g)^lambda * act(g, phi); needs det g > 0."""
    if g.det <= 0:
        raise OrientationError("twisted action is defined on the det > 0 component")
    result = act(g, phi)
    if lam:
        result = result.scaled(g.det**lam)
    return result


def poincare(omega: VolumeForm, xi: Polyvector) -> Form:
    """Contraction of a k-vector into the volume form: xi -> i_xi(omega)."""
    if xi.n != omega.n:
        raise DimensionMismatch(f"dimension {xi.n} != {omega.n}")
    n = omega.n
    full = tuple(range(1, n + 1))
    out: dict[MultiIndex, Fraction] = {}
    for idx, c in xi.terms.items():
        rest, sign = contract_sign(full, idx)
        out[rest] = sign * c * omega.scale
    return Form(n, n - xi.k, out)


def poincare_inv(omega: VolumeForm, psi: Form) -> Polyvector:
    """The unique xi with poincare(omega, xi) == psi; degree n - psi.k."""
    if psi.n != omega.n:
        raise DimensionMismatch(f"dimension {psi.n} != {omega.n}")
    n = omega.n
    full = tuple(range(1, n + 1))
    out: dict[MultiIndex, Fraction] = {}
    for jdx, c in psi.terms.items():
        comp = tuple(i for i in full if i not in jdx)
        rest, sign = contract_sign(full, comp)
        assert rest == jdx
        out[comp] = c / (sign * omega.scale)
    return Polyvector(n, n - psi.k, out)


def musical(mu: InnerProduct, x: Polyvector) -> Form:
    """Lower every slot with mu: the flat isomorphism on polyvectors."""
    if x.n != mu.n:
        raise DimensionMismatch(f"dimension {x.n} != {mu.n}")
    if mu.is_identity:
        return Form(x.n, x.k, dict(x.terms))
    return Form(x.n, x.k, _transform(x.terms, mu.matrix, x.n, x.k, source_rows=False))


def musical_inv(mu: InnerProduct, phi: Form) -> Polyvector:
    """Raise every slot with mu inverse: the sharp isomorphism on forms."""
    if phi.n != mu.n:
        raise DimensionMismatch(f"dimension {phi.n} != {mu.n}")
    if mu.is_identity:
        return Polyvector(phi.n, phi.k, dict(phi.terms))
    inv = inverse_fraction(mu.matrix)
    return Polyvector(phi.n, phi.k, _transform(phi.terms, inv, phi.n, phi.k, source_rows=False))
