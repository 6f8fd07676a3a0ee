"""The loop algebra so_{2N}[z, z⁻¹] and the elementary moves of the reduction chain.

Elements are ZMatrix objects with exact coefficients. The orthogonality form is
the anti-diagonal J, so X belongs to the algebra when J·X + Xᵀ·J = 0 at every
power of z.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..matkit import eye, zeros
from ..matkit.laurent import ZMatrix
from ..matkit.linalg import inv


class ChainError(ArithmeticError):
    """A checkpoint of the reduction chain failed."""


def X(N, i, j):
    """E_{i,j} − E_{2N+1−j, 2N+1−i} (1-based), as a constant 2N×2N Fraction matrix."""
    M = zeros((2 * N, 2 * N), exact=True)
    M[i - 1, j - 1] += 1
    M[2 * N - j, 2 * N - i] -= 1
    return M


def anti_diagonal(n):
    J = zeros((n, n), exact=True)
    for i in range(n):
        J[i, n - 1 - i] = Fraction(1)
    return J


@dataclass(frozen=True)
class SoAlgebra:
    """Chevalley-type generators of so_{2N}[z, z⁻¹]."""

    N: int
    J: np.ndarray
    e: dict
    f: dict
    h: dict

    @property
    def dim(self):
        return 2 * self.N


@lru_cache(maxsize=None)
def so_generators(N):
    if N < 3:
        raise ValueError("so_{2N} generators need N >= 3")
    e = {0: ZMatrix({1: X(N, 2 * N - 1, 1)}, 2 * N, True)}
    f = {0: ZMatrix({-1: X(N, 1, 2 * N - 1)}, 2 * N, True)}
    for i in range(1, N):
        e[i] = ZMatrix.constant(X(N, i, i + 1))
        f[i] = ZMatrix.constant(X(N, i + 1, i))
    e[N] = ZMatrix.constant(X(N, N - 1, N + 1))
    f[N] = ZMatrix.constant(X(N, N + 1, N - 1))
    h = {i: ZMatrix.constant(X(N, i, i)) for i in range(1, N + 1)}
    return SoAlgebra(N, anti_diagonal(2 * N), e, f, h)


def bracket(A, B):
    return A @ B - B @ A


def nested_ad(alg, *idx):
    """e_{i_1, …, i_k} = [e_{i_1}, [e_{i_2}, … e_{i_k}]]."""
    if not idx:
        raise ValueError("at least one index required")
    for i in idx:
        if i not in alg.e:
            raise IndexError(f"generator index {i} outside 0..{alg.N}")
    M = alg.e[idx[-1]]
    for i in reversed(idx[:-1]):
        M = bracket(alg.e[i], M)
    return M


def in_orthogonal_algebra(M, J=None):
    """J·M_k + M_kᵀ·J = 0 for every coefficient M_k."""
    if J is None:
        J = anti_diagonal(M.dim)
    return all(not np.any(J.dot(C) + C.T.dot(J)) for C in M.coeffs.values())


def e_coefficient(M, alg, i):
    """Coefficient of e_i, read off the entry that e_i occupies.

    For a combination Σ φ_j e_j + (brackets of length ≥ 2) + Cartan part this
    entry is touched by e_i alone.
    """
    gen = alg.e[i]
    (k, C), = gen.coeffs.items()
    r, c = map(int, np.argwhere(C != 0)[0])
    return M.coeff(k)[r, c] / C[r, c]


# -- Laplace steps --------------------------------------------------------

def split_linear(M):
    """(M0, M1) with M = M0 + z·M1; raises unless 0 ≤ powers ≤ 1."""
    if M.coeffs and (M.low < 0 or M.degree > 1):
        raise ChainError(f"expected a degree ≤ 1 polynomial matrix, powers {M.powers()}")
    return M.coeff(0), M.coeff(1)


def _nilpotent_square(M1, label):
    if np.any(M1.dot(M1)):
        raise ChainError(f"{label}: (M_1)^2 is not zero")


def laplace_left(M, eps):
    """(I − zM1)⁻¹(M0 − εI) = (I + zM1)(M0 − εI), valid because M1² = 0."""
    M0, M1 = split_linear(M)
    _nilpotent_square(M1, "laplace_left")
    n = M.dim
    left = ZMatrix({0: eye(n, True), 1: M1}, n, True)
    right = ZMatrix({0: M0 - eps * eye(n, True)}, n, True)
    return left @ right


def laplace_right(M, eps):
    """(M0 + 2εI)(I + zM1)⁻¹ = (M0 + 2εI)(I − zM1), again using M1² = 0."""
    M0, M1 = split_linear(M)
    _nilpotent_square(M1, "laplace_right")
    n = M.dim
    left = ZMatrix({0: M0 + 2 * eps * eye(n, True)}, n, True)
    right = ZMatrix({0: eye(n, True), 1: -M1}, n, True)
    return left @ right


def drop_zero_line(M, which, index):
    """Delete row and column ``index`` (0-based) after checking that the named line is zero."""
    if which not in ("row", "column"):
        raise ValueError("which must be 'row' or 'column'")
    line = M.row(index) if which == "row" else M.col(index)
    if not all(e.is_zero() for e in line):
        raise ChainError(f"{which} {index + 1} is not zero")
    return M.drop(index)


# -- Dynkin diagram automorphisms ------------------------------------------

def _flip_data(N):
    n = 2 * N
    P = zeros((n, n), exact=True)
    for i in range(N):
        P[i, i + N] = 1
        P[i + N, i] = 1
    K = [Fraction(1, 2)] * N + [Fraction(-1, 2)] * N
    S = [(-1) ** i for i in range(n)]
    return P, K, S


def full_flip_conjugation(M):
    """S·z^{−K}·Pᵀ·M·P·z^{K}·S; sends e_i to e_{N−i} and h_i to −h_{N+1−i}."""
    n = M.dim
    N = n // 2
    P, K, S = _flip_data(N)
    out = {}
    for k, C in M.coeffs.items():
        Cp = P.T.dot(C).dot(P)
        for i in range(n):
            for j in range(n):
                v = Cp[i, j]
                if v == 0:
                    continue
                p = k + int(K[j] - K[i])
                if p not in out:
                    out[p] = zeros((n, n), exact=True)
                out[p][i, j] += S[i] * S[j] * v
    return ZMatrix(out, n, True)


def full_flip(M):
    """Full flip of a connection matrix: the conjugation above, then z d/dz ↦ z d/dz + ½Σh_i."""
    n = M.dim
    _, K, _ = _flip_data(n // 2)
    shift = zeros((n, n), exact=True)
    for i in range(n):
        shift[i, i] = -K[i]
    return full_flip_conjugation(M) + ZMatrix.constant(shift)


class _IncrementalBasis:
    """Row-echelon bookkeeping for exact rank tests of growing vector families."""

    def __init__(self):
        self.rows = []   # list of (pivot, dict index -> value), pivot entry normalized to 1

    def reduce(self, vec):
        v = dict(vec)
        for piv, row in self.rows:
            c = v.get(piv, 0)
            if c:
                for k, x in row.items():
                    nv = v.get(k, 0) - c * x
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def add(self, vec):
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        c = v[piv]
        self.rows.append((piv, {k: x / c for k, x in v.items()}))
        return True


def _flat(M, powers=(0, 1)):
    n = M.dim
    out = {}
    for a, k in enumerate(powers):
        C = M.coeff(k)
        for i in range(n):
            for j in range(n):
                if C[i, j] != 0:
                    out[a * n * n + i * n + j] = Fraction(C[i, j])
    return out


@dataclass(frozen=True)
class WordBasis:
    """Cartan h_1..h_N followed by independent nested words of z-degree 0..1."""

    alg: SoAlgebra
    words: tuple
    mats: tuple
    pivots: tuple
    solver: np.ndarray


@lru_cache(maxsize=None)
def word_basis(N, max_len=6):
    alg = so_generators(N)
    basis = _IncrementalBasis()
    mats, words = [], []
    for i in range(1, N + 1):
        basis.add(_flat(alg.h[i]))
        mats.append(alg.h[i])
        words.append(("h", i))
    frontier = []
    for i in range(N + 1):
        if basis.add(_flat(alg.e[i])):
            mats.append(alg.e[i])
            words.append((i,))
            frontier.append((i,))
    for _ in range(2, max_len + 1):
        nxt = []
        for w in frontier:
            for i in range(N + 1):
                w2 = (i,) + w
                M = nested_ad(alg, *w2)
                if M.is_zero() or M.degree > 1:
                    continue
                if basis.add(_flat(M)):
                    mats.append(M)
                    words.append(w2)
                    nxt.append(w2)
        frontier = nxt
    # a square subsystem: pick pivot coordinates greedily
    cols = [_flat(M) for M in mats]
    size = 2 * (2 * N) ** 2
    chosen = _IncrementalBasis()
    pivots = []
    for idx in range(size):
        vec = {c: cols[c][idx] for c in range(len(cols)) if idx in cols[c]}
        if vec and chosen.add(vec):
            pivots.append(idx)
        if len(pivots) == len(cols):
            break
    A = zeros((len(pivots), len(cols)), exact=True)
    for r, idx in enumerate(pivots):
        for c in range(len(cols)):
            A[r, c] = cols[c].get(idx, Fraction(0))
    return WordBasis(alg, tuple(words), tuple(mats), tuple(pivots), inv(A))


def decompose(M, wb):
    """Coefficients of M on the word basis; raises if M is not in the span."""
    flat = _flat(M)
    if M.coeffs and (M.low < 0 or M.degree > 1):
        raise ChainError("matrix has z-powers outside 0..1")
    rhs = np.array([flat.get(idx, Fraction(0)) for idx in wb.pivots], dtype=object)
    coef = wb.solver.dot(rhs)
    rebuilt = ZMatrix.zero(M.dim)
    for c, B in zip(coef, wb.mats):
        if c != 0:
            rebuilt = rebuilt + B.scale(c)
    if rebuilt != M:
        raise ChainError("matrix is not in the span of the generator words")
    return list(coef)


def _coroots(N):
    """Simple coroots of D_N in the h-coordinates: h_i − h_{i+1} and h_{N−1} + h_N."""
    H = []
    for i in range(1, N):
        v = [0] * N
        v[i - 1], v[i] = 1, -1
        H.append(v)
    v = [0] * N
    v[N - 2], v[N - 1] = 1, 1
    H.append(v)
    return np.array([[Fraction(x) for x in row] for row in H], dtype=object)


def e1e4_flip(M):
    """The so8 diagram automorphism exchanging e_1 and e_4.

    This map is outer, so it is realized on the word basis: letters 1 and 4 are
    swapped in every word and the Cartan part moves through the simple coroots.
    """
    if M.dim != 8:
        raise ValueError("the e_1 ↔ e_4 flip lives on so_8")
    wb = word_basis(4)
    coef = decompose(M, wb)
    sigma = {0: 0, 1: 4, 2: 2, 3: 3, 4: 1}
    H = _coroots(4)
    x = np.array(coef[:4], dtype=object)
    y = inv(H.T.copy()).dot(x)           # Σ y_i H_i = Σ x_i h_i
    y_new = [Fraction(0)] * 4
    for i in range(4):
        y_new[sigma[i + 1] - 1] = y[i]
    x_new = H.T.dot(np.array(y_new, dtype=object))
    out = ZMatrix.zero(8)
    for i in range(4):
        if x_new[i] != 0:
            out = out + wb.alg.h[i + 1].scale(x_new[i])
    for c, w in zip(coef[4:], wb.words[4:]):
        if c != 0:
            out = out + nested_ad(wb.alg, *[sigma[i] for i in w]).scale(c)
    return out


def dynkin_flip(M, alg, kind="full"):
    if M.dim != alg.dim:
        raise ValueError("matrix size does not match the algebra")
    if kind == "full":
        return full_flip(M)
    if kind == "e1e4":
        return e1e4_flip(M)
    raise ValueError(f"unknown flip {kind!r}")
