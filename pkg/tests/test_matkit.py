from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_rng, rand_exact
from sasano_mpd.matkit import (AmbiguousSpectrum, Jet, Laurent, ZMatrix, charpoly, det,
                               exact_array, eye, inv, minor, plucker_alternating_sum, rank,
                               rational_roots, spectral_type, squarefree_factorization,
                               zmat_adjugate, zmat_det)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def square(n):
    return st.lists(fractions, min_size=n * n, max_size=n * n).map(
        lambda xs: exact_array(np.array(xs, dtype=object).reshape(n, n)))


def to_sympy(A):
    return sympy.Matrix(A.shape[0], A.shape[1], [sympy.Rational(x.numerator, x.denominator)
                                                 for x in A.reshape(-1)])


def poly_to_sympy(p, z):
    return sum(sympy.Rational(c.numerator, c.denominator) * z ** k for k, c in p.terms.items())


# -- minors ---------------------------------------------------------------

def test_minor_examples():
    assert minor(exact_array([[5]]), [1], [1]) == 5
    assert minor(exact_array([[1, 2], [3, 4]]), [1, 2], [1, 2]) == -2
    assert minor(exact_array([[7, 1], [2, 2]]), [], []) == 1


def test_det_matches_sympy(rng):
    for n in range(1, 7):
        A = rand_exact(rng, n)
        assert det(A) == to_sympy(A).det()


def test_minor_matches_sympy_submatrix(rng):
    A = rand_exact(rng, 5)
    S = to_sympy(A)
    for rows, cols in [((1, 3), (2, 5)), ((2, 3, 4), (1, 2, 5)), ((5,), (1,))]:
        sub = S.extract([r - 1 for r in rows], [c - 1 for c in cols])
        assert minor(A, rows, cols) == sub.det()


@settings(max_examples=40, deadline=None)
@given(square(3), st.lists(fractions, min_size=3, max_size=3), fractions)
def test_minor_is_linear_in_each_row(A, v, c):
    B = A.copy()
    B[1] = B[1] * c + np.array(v, dtype=object)
    C = A.copy()
    C[1] = np.array(v, dtype=object)
    rows = cols = (1, 2, 3)
    assert minor(B, rows, cols) == c * minor(A, rows, cols) + minor(C, rows, cols)


@settings(max_examples=40, deadline=None)
@given(square(4))
def test_minor_alternates_under_row_swap(A):
    B = A[[1, 0, 2, 3]]
    assert minor(B, (1, 2, 3), (1, 2, 4)) == -minor(A, (1, 2, 3), (1, 2, 4))
    assert det(B) == -det(A)
    A[2] = A[0]
    assert det(A) == 0


@settings(max_examples=30, deadline=None)
@given(square(3), square(3))
def test_det_multiplicative(A, B):
    assert det(A.dot(B)) == det(A) * det(B)


def test_inverse_and_rank(rng):
    A = rand_exact(rng, 4)
    assert not np.any(A.dot(inv(A)) - eye(4, True))
    A[3] = A[0] + 2 * A[1]
    assert rank(A) == 3


# -- spectral type --------------------------------------------------------

def test_spectral_type_examples():
    assert spectral_type(exact_array(np.diag([1, 1, 0, 0]))) == (2, 2)
    assert spectral_type(eye(4, True)) == (4,)
    assert spectral_type(exact_array(np.diag([1, 2, 3, 4]))) == (1, 1, 1, 1)


def test_spectral_type_float_and_ambiguous():
    assert spectral_type(np.diag([1.0, 1.0, 0.0, 0.0]).astype(complex)) == (2, 2)
    with pytest.raises(AmbiguousSpectrum):
        spectral_type(np.diag([0.0, 1e-7, 1.0]).astype(complex), tol=1e-8)


@settings(max_examples=25, deadline=None)
@given(square(4), st.integers(0, 3))
def test_spectral_type_conjugation_invariant(G, shape):
    if det(G) == 0:
        return
    diag = [(1, 1, 0, 0), (3, 3, 3, -1), (1, 2, 3, 4), (5, 5, 5, 5)][shape]
    D = exact_array(np.diag(diag))
    assert spectral_type(G.dot(D).dot(inv(G))) == spectral_type(D)


def test_charpoly_matches_sympy(rng):
    x = sympy.Symbol("x")
    for n in (2, 3, 5):
        A = rand_exact(rng, n)
        expected = to_sympy(A).charpoly(x).as_expr()
        assert sympy.expand(poly_to_sympy(charpoly(A), x) - expected) == 0


def test_squarefree_and_rational_roots():
    z = Laurent.z()
    p = (z - 1) ** 2 * (z + Fraction(1, 2)) * (z * z + 1)
    fac = squarefree_factorization(p)
    assert sorted((f.degree, m) for f, m in fac) == [(1, 2), (3, 1)]
    roots, leftover = rational_roots(p)
    assert sorted(roots) == [(Fraction(-1, 2), 1), (Fraction(1), 2)]
    assert [f.degree for f, _ in leftover] == [2]


# -- Laurent matrices -----------------------------------------------------

def test_nilpotent_inverse_pair():
    N = exact_array([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    I = eye(3, True)
    P = ZMatrix({0: I, 1: N})
    Q = ZMatrix({0: I, 1: -N})
    assert P @ Q == ZMatrix.identity(3)


def test_zmat_det_examples():
    assert zmat_det(ZMatrix({0: eye(2, True)})) == Laurent({0: 1})
    s = Fraction(7, 3)
    n = 5
    C0 = eye(n, True)
    C1 = exact_array(np.zeros((n, n), dtype=int))
    C0[0, 0], C0[1, 1] = -s, -s + 1
    C1[0, 0] = C1[1, 1] = Fraction(1)
    z = Laurent.z()
    assert zmat_det(ZMatrix({0: C0, 1: C1})) == (z - s) * (z - s + 1)


def _random_zmat(rng, n, powers):
    return ZMatrix({k: rand_exact(rng, n, span=4, den=3) for k in powers})


def test_zmat_det_multiplicative(rng):
    for _ in range(5):
        P = _random_zmat(rng, 3, (-1, 0, 1))
        Q = _random_zmat(rng, 3, (0, 2))
        assert zmat_det(P @ Q) == zmat_det(P) * zmat_det(Q)


def test_zmat_det_and_adjugate_match_sympy(rng):
    z = sympy.Symbol("z")
    P = _random_zmat(rng, 3, (0, 1))
    S = sympy.Matrix(3, 3, lambda i, j: poly_to_sympy(P.entry(i, j), z))
    assert sympy.expand(poly_to_sympy(zmat_det(P), z) - S.det()) == 0
    adj, D = zmat_adjugate(P)
    Sadj = S.adjugate()
    for i in range(3):
        for j in range(3):
            assert sympy.expand(poly_to_sympy(adj.entry(i, j), z) - Sadj[i, j]) == 0
    scalar = ZMatrix.from_entries([[D if i == j else Laurent() for j in range(3)] for i in range(3)])
    assert adj @ P == scalar


# -- jets -----------------------------------------------------------------

def test_jet_gradient_of_rational_expression():
    x = Jet.variable(Fraction(2), 0, 2)
    y = Jet.variable(Fraction(3), 1, 2)
    f = x * x * y / (1 + x) - 2 / y
    # f = x²y/(1+x) − 2/y
    assert f.val == Fraction(4 * 3, 3) - Fraction(2, 3)
    assert f.grad[0] == Fraction(2 * 2 * 3 * 3 - 4 * 3, 9)
    assert f.grad[1] == Fraction(4, 3) + Fraction(2, 9)


# -- Plücker alternating sum ----------------------------------------------

def test_plucker_alternating_sum_vanishes():
    rng = make_rng(7)
    count = 0
    for n in (2, 3, 4, 5):
        for _ in range(25):
            C = rand_exact(rng, n)
            for i in range(2, n + 1):
                for j in range(1, i):
                    assert plucker_alternating_sum(C, i, j) == 0
                    count += 1
    assert count >= 100


def test_plucker_rejects_bad_indices():
    with pytest.raises(ValueError):
        plucker_alternating_sum(eye(3, True), 1, 2)
