"""Dense linear algebra over Q (object arrays of Fraction) or C (complex128)."""
from fractions import Fraction

import numpy as np

from .field import DEFAULT_RTOL, eye, is_exact, zeros
from .poly import Laurent, squarefree_factorization


class AmbiguousSpectrum(ValueError):
    """Eigenvalues sit too close to a cluster boundary to decide multiplicities."""


class SingularMatrix(ArithmeticError):
    pass


def _check_square(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix expected, got shape {A.shape}")


def det(A):
    """Bareiss elimination for exact input, LU (numpy) otherwise."""
    A = np.asarray(A)
    _check_square(A)
    n = A.shape[0]
    if n == 0:
        return Fraction(1) if is_exact(A) else 1.0 + 0j
    if not is_exact(A):
        return complex(np.linalg.det(A.astype(complex)))
    M = [list(row) for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) / prev
        prev = pivot
    return sign * Fraction(M[n - 1][n - 1])


def minor(A, rows, cols):
    """Δ^{rows}_{cols}(A) with 1-based, strictly increasing index lists."""
    A = np.asarray(A)
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols):
        raise ValueError("row and column index lists differ in length")
    for idx, bound in ((rows, A.shape[0]), (cols, A.shape[1])):
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices not strictly increasing: {idx}")
        if idx and (idx[0] < 1 or idx[-1] > bound):
            raise IndexError(f"index out of range in {idx} (size {bound})")
    if not rows:
        return Fraction(1) if is_exact(A) else 1.0 + 0j
    sub = A[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])]
    return det(sub)


def _rref(A):
    """Exact reduced row echelon form; returns (R, pivot columns)."""
    M = [list(row) for row in A]
    m = len(M)
    n = len(M[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / Fraction(M[r][c])
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return M, pivots


def solve(A, B):
    """Solve A X = B for square nonsingular A."""
    A = np.asarray(A)
    _check_square(A)
    B = np.asarray(B)
    vec = B.ndim == 1
    if not is_exact(A) and not is_exact(B):
        return np.linalg.solve(A.astype(complex), B.astype(complex))
    n = A.shape[0]
    Bm = B.reshape(n, -1)
    aug = [list(A[i]) + list(Bm[i]) for i in range(n)]
    R, piv = _rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    X = np.array([row[n:] for row in R], dtype=object)
    return X.reshape(-1) if vec else X


def inv(A):
    A = np.asarray(A)
    _check_square(A)
    if not is_exact(A):
        return np.linalg.inv(A.astype(complex))
    return solve(A, eye(A.shape[0], exact=True))


def rank(A, tol=None):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    if is_exact(A):
        return len(_rref(A)[1])
    return int(np.linalg.matrix_rank(A.astype(complex), tol=tol))


def nullspace(A, tol=None):
    """Columns spanning ker A (exact basis from the RREF in rational mode)."""
    A = np.asarray(A)
    m, n = A.shape
    if not is_exact(A):
        u, s, vh = np.linalg.svd(A.astype(complex))
        if tol is None:
            tol = max(m, n) * np.finfo(float).eps * (s[0] if s.size else 1.0) * 10
        r = int(np.sum(s > tol))
        return vh[r:].conj().T
    R, piv = _rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = zeros((n, len(free)), exact=True)
    for k, f in enumerate(free):
        basis[f, k] = Fraction(1)
        for i, p in enumerate(piv):
            basis[p, k] = -R[i][f]
    return basis


def charpoly(A):
    """Characteristic polynomial det(x I − A) via Faddeev–LeVerrier (exact) or eigvals."""
    A = np.asarray(A)
    _check_square(A)
    n = A.shape[0]
    if not is_exact(A):
        return Laurent.from_coeffs(list(np.poly(A.astype(complex))[::-1]))
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = zeros((n, n), exact=True)
    I = eye(n, exact=True)
    for k in range(1, n + 1):
        M = A.dot(M) + coeffs[n - k + 1] * I
        coeffs[n - k] = -Fraction(sum(A.dot(M).diagonal())) / k
    return Laurent.from_coeffs(coeffs)


def _union_find_clusters(vals, tol):
    parent = list(range(len(vals)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(vals)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def eigenvalue_clusters(A, tol=None, margin=100.0):
    """Group floating eigenvalues by union-find; refuse ambiguous configurations.

    Two eigenvalues in different clusters closer than ``margin * tol`` are taken as
    evidence that the clustering depends on the tolerance, and raise AmbiguousSpectrum.
    """
    A = np.asarray(A, dtype=complex)
    if tol is None:
        tol = DEFAULT_RTOL * (1.0 + np.linalg.norm(A))
    vals = np.linalg.eigvals(A)
    groups = _union_find_clusters(vals, tol)
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            d = min(abs(vals[i] - vals[j]) for i in groups[a] for j in groups[b])
            if d < margin * tol:
                raise AmbiguousSpectrum(
                    f"eigenvalue clusters {a} and {b} only {d:.3g} apart (tol {tol:.3g})")
    return [(complex(np.mean(vals[g])), len(g)) for g in groups]


def spectral_type(A, tol=None):
    """Partition of eigenvalue multiplicities, sorted non-increasing."""
    A = np.asarray(A)
    _check_square(A)
    if A.shape[0] == 0:
        return ()
    if is_exact(A):
        parts = []
        for f, m in squarefree_factorization(charpoly(A)):
            parts += [m] * f.degree
    else:
        parts = [m for _, m in eigenvalue_clusters(A, tol)]
    return tuple(sorted(parts, reverse=True))


def commutator(A, B):
    return A.dot(B) - B.dot(A)
