"""Shared helpers: independent oracles the library must agree with.

Everything here is deliberately naive (permutation expansions, plain
Gaussian elimination over Fraction) so that agreement with the fast paths
in the package is meaningful evidence.
"""

from fractions import Fraction
from itertools import permutations

import pytest

from formlab import Form, Polyvector


def perm_sign(perm) -> int:
    """Sign via explicit inversion count."""
    s = 1
    perm = list(perm)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                s = -s
    return s


def det_oracle(mat) -> Fraction:
    """Determinant by full permutation expansion (small matrices only)."""
    n = len(mat)
    total = Fraction(0)
    for perm in permutations(range(n)):
        prod = Fraction(1)
        for i in range(n):
            prod *= Fraction(mat[i][perm[i]])
        total += perm_sign(perm) * prod
    return total


def rref_rank(rows, ncols) -> int:
    """Rank by textbook Gauss-Jordan over Fraction."""
    mat = [[Fraction(x) for x in row] for row in rows]
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][col]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r


def evaluate_form(phi: Form, vectors) -> Fraction:
    """phi(v_1, ..., v_k) as a sum of coefficient times minor determinants.

    vectors are coordinate lists; entry (s, t) of the minor for index I is
    the i_s-th coordinate of v_t.
    """
    assert len(vectors) == phi.k
    total = Fraction(0)
    for idx, c in phi.terms.items():
        minor = [[Fraction(v[i - 1]) for v in vectors] for i in idx]
        total += c * det_oracle(minor)
    return total


def pairing(phi: Form, xi: Polyvector) -> Fraction:
    """Natural pairing of a form with a polyvector of the same degree."""
    assert phi.n == xi.n and phi.k == xi.k
    return sum((c * xi.terms.get(idx, Fraction(0)) for idx, c in phi.terms.items()), Fraction(0))


def random_int_matrix(rng, rows, cols, bound=6):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


@pytest.fixture
def rng():
    import random

    return random.Random(20260818)
