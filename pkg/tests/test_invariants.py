from fractions import Fraction

import pytest

from formlab import (
    DegreeError,
    Form,
    FormError,
    LinMap,
    Polyvector,
    VolumeForm,
    act,
    act_vectors,
    interior,
    is_multisymplectic,
    is_stable,
    kernel_vectors,
    length_and_sign,
    nilpotency_witness_degenerate,
    orbit_dimension,
    orientation_reversing_stabilizer_witness,
    poincare,
    rank,
    reduce_form,
    stabilizer_algebra,
    wedge,
)
from formlab.sampling import random_gl, random_nonzero_form, trial_rng


def e(n, *idx):
    return Form.basis(n, idx)


def ev(n, *idx):
    return Polyvector.basis(n, idx)


# ------------------------------------------------------------------- rank


def test_rank_frozen():
    assert rank(Form.zero(5, 2)) == 0
    assert rank(e(7, 1, 2, 3)) == 3
    assert rank(e(6, 1, 2, 3) + e(6, 1, 4, 5)) == 5
    assert rank(e(4, 1, 2) + e(4, 3, 4)) == 4
    assert rank(e(3, 1)) == 1
    phi0 = (
        e(7, 1, 2, 3) + e(7, 1, 4, 5) + e(7, 1, 6, 7) + e(7, 2, 4, 6)
        - e(7, 2, 5, 7) + e(7, 3, 4, 7) + e(7, 3, 5, 6)
    )
    assert rank(phi0) == 7
    assert is_multisymplectic(phi0)
    assert not is_multisymplectic(e(7, 1, 2, 3))


def test_rank_is_action_invariant():
    phi = e(6, 1, 2, 3) + e(6, 1, 4, 5)
    for trial in range(10):
        g = random_gl(6, trial_rng(5, trial), det_sign=1 if trial % 2 else -1)
        assert rank(act(g, phi)) == 5


def test_kernel_vectors_contract_to_zero():
    phi = e(6, 1, 2, 3) + e(6, 1, 4, 5)
    kv = kernel_vectors(phi)
    assert len(kv) == 1
    for v in kv:
        assert interior(v, phi).is_zero
    g = random_gl(6, trial_rng(6, 0))
    moved = act(g, phi)
    for v in kernel_vectors(moved):
        assert interior(v, moved).is_zero


# -------------------------------------------------------------- reduction


def test_reduce_frozen_shape():
    phi = e(6, 1, 2, 3) + e(6, 1, 4, 5)
    red = reduce_form(phi)
    assert red.r == 5
    assert red.reduced.n == 5 and red.reduced.k == 3
    assert rank(red.reduced) == 5
    assert red.reconstruct() == phi
    assert len(red.embedding) == 6 and all(len(row) == 5 for row in red.embedding)


def test_reduce_after_mixing_coordinates():
    base = e(7, 1, 2) + e(7, 3, 4)
    for trial in range(8):
        g = random_gl(7, trial_rng(7, trial))
        phi = act(g, base)
        red = reduce_form(phi)
        assert red.r == 4
        assert rank(red.reduced) == 4
        assert red.reconstruct() == phi


def test_reduce_zero_and_full_rank():
    red = reduce_form(Form.zero(4, 2))
    assert red.r == 0 and red.reduced.is_zero and red.reconstruct().is_zero
    phi = e(4, 1, 2) + e(4, 3, 4)
    red = reduce_form(phi)
    assert red.r == 4 and red.reduced == phi
    with pytest.raises(DegreeError):
        reduce_form(Form(3, 0, {(): Fraction(1)}))


# ------------------------------------------------------------- stabilizers


def test_stabilizer_dimensions_frozen():
    assert stabilizer_algebra(e(2, 1, 2)).dim == 3
    assert stabilizer_algebra(e(4, 1, 2) + e(4, 3, 4)).dim == 10
    assert stabilizer_algebra(Form.zero(3, 2)).dim == 9
    assert orbit_dimension(e(2, 1, 2)) == 1
    assert is_stable(e(2, 1, 2))
    assert not is_stable(e(4, 1, 2))


def test_stabilizer_dimension_is_action_invariant():
    phi = e(6, 1, 2, 3) - e(6, 3, 4, 5) + e(6, 2, 4, 6) - e(6, 1, 5, 6)
    d = stabilizer_algebra(phi).dim
    for trial in range(5):
        g = random_gl(6, trial_rng(8, trial), det_sign=-1)
        assert stabilizer_algebra(act(g, phi)).dim == d


# ------------------------------------------------------------ length and sign


def sympl(n, l, coeffs=None):
    """poincare dual of a rank-2l coordinate bivector with given pair coefficients."""
    xi = Polyvector.zero(n, 2)
    for i in range(l):
        c = 1 if coeffs is None else coeffs[i]
        xi = xi + Polyvector.basis(n, (2 * i + 1, 2 * i + 2), c)
    return poincare(VolumeForm(n), xi)


def test_length_and_sign_frozen():
    om6, om4 = VolumeForm(6), VolumeForm(4)
    full = sympl(6, 3)
    ls = length_and_sign(full, om6)
    assert (ls.length, ls.lam, ls.sign) == (3, 1, 1)
    ls = length_and_sign(sympl(6, 3, [-1, 1, 1]), om6)
    assert (ls.length, ls.lam, ls.sign) == (3, -1, -1)
    ls = length_and_sign(sympl(4, 2), om4)
    assert (ls.length, ls.lam, ls.sign) == (2, 1, 1)
    ls = length_and_sign(sympl(4, 2, [-1, 1]), om4)
    assert (ls.length, ls.lam, ls.sign) == (2, -1, 1)
    ls = length_and_sign(sympl(4, 1), om4)
    assert (ls.length, ls.lam, ls.sign) == (1, None, 1)
    ls = length_and_sign(Form.zero(4, 2), om4)
    assert (ls.length, ls.lam, ls.sign) == (0, None, 0)
    with pytest.raises(DegreeError):
        length_and_sign(e(4, 1, 2, 3), om4)


def test_volume_rescaling_law():
    # replacing Omega by c*Omega multiplies lam by c^(1 - length): at odd
    # length lam ignores the volume choice entirely, at even length only the
    # orientation of Omega matters and then sign is 1 anyway
    phi = sympl(6, 3)
    for scale in (1, Fraction(7, 2), -1, Fraction(-2, 5)):
        ls = length_and_sign(phi, VolumeForm(6, scale))
        assert (ls.length, ls.lam, ls.sign) == (3, 1, 1)
    phi4 = sympl(4, 2)
    assert length_and_sign(phi4, VolumeForm(4, 5)).lam == 1
    assert length_and_sign(phi4, VolumeForm(4, -5)).lam == -1
    assert length_and_sign(phi4, VolumeForm(4, -5)).sign == 1


@pytest.mark.parametrize(
    "n,l",
    [(4, 1), (4, 2), (5, 2), (6, 3), (7, 3)],
)
def test_length_sign_transformation_law(n, l):
    """length always invariant; lam obeys lam' = lam * det(g)^(1 - l); sign invariant."""
    om = VolumeForm(n)
    phi = sympl(n, l)
    base = length_and_sign(phi, om)
    maximal = 2 * l == n
    for trial in range(12):
        det_sign = 1 if trial % 2 else -1
        g = random_gl(n, trial_rng(40 + n, trial), det_sign=det_sign)
        moved = length_and_sign(act(g, phi), om)
        assert moved.length == base.length == l
        assert moved.sign == base.sign
        if not maximal:
            assert moved.lam is None
            continue
        expected = base.lam * det_sign ** (1 - l)
        assert moved.lam == expected
        if l % 2:
            assert moved.lam == base.lam  # odd length: lam is a full invariant


# ------------------------------------------------------- degeneration witnesses


def test_nilpotency_witness_frozen_r9():
    x = ev(9, 1, 2, 3)
    w = nilpotency_witness_degenerate(x)
    assert w.exponents == (6, 6, 6, -3, -3, -3, -3, -3, -3)
    assert sum(w.exponents) == 0
    assert w.rate == 18
    for t in (2, 3):
        g = w.curve(t)
        assert g.det == 1
        assert act_vectors(g, x) == x * Fraction(t) ** 18


def test_nilpotency_witness_small_and_mixed():
    x = ev(3, 1, 2)
    w = nilpotency_witness_degenerate(x)
    assert w.rate == 2 and sum(w.exponents) == 0
    assert act_vectors(w.curve(2), x) == x * 4

    # support not aligned with coordinates
    y = wedge(Polyvector.from_coords([1, 1, 0, 0, 0]), Polyvector.from_coords([0, 0, 1, 0, 0]))
    w = nilpotency_witness_degenerate(y)
    assert w.rate == 2 * 3
    g = w.curve(3)
    assert g.det == 1
    assert act_vectors(g, y) == y * Fraction(3) ** 6


def test_nilpotency_witness_rejects_nondegenerate_and_zero():
    with pytest.raises(FormError):
        nilpotency_witness_degenerate(ev(3, 1, 2, 3))
    with pytest.raises(FormError):
        nilpotency_witness_degenerate(Polyvector.zero(3, 2))


def test_orientation_reversing_witness():
    phi = e(5, 1, 2) + e(5, 3, 4)
    g = orientation_reversing_stabilizer_witness(phi)
    assert g.det == -1
    assert act(g, phi) == phi
    # works after mixing coordinates too
    h = random_gl(5, trial_rng(9, 4))
    moved = act(h, phi)
    g2 = orientation_reversing_stabilizer_witness(moved)
    assert g2.det == -1
    assert act(g2, moved) == moved
    z = orientation_reversing_stabilizer_witness(Form.zero(3, 2))
    assert z.det == -1
    with pytest.raises(FormError):
        orientation_reversing_stabilizer_witness(e(4, 1, 2) + e(4, 3, 4))
