"""Matrices whose entries are Laurent polynomials in z, stored by z-power."""
from fractions import Fraction

import numpy as np

from .field import all_zero, eye, is_exact, zeros
from .linalg import det
from .poly import Laurent, interpolate, poly_gcd


class ZMatrix:
    """Σ_k z^k · coeffs[k]; all coefficient matrices are dim × dim."""

    __slots__ = ("coeffs", "dim", "exact")

    def __init__(self, coeffs, dim=None, exact=None):
        coeffs = {int(k): np.asarray(v) for k, v in coeffs.items()}
        if dim is None:
            if not coeffs:
                raise ValueError("dim required for an empty ZMatrix")
            dim = next(iter(coeffs.values())).shape[0]
        if exact is None:
            exact = all(is_exact(v) for v in coeffs.values()) if coeffs else True
        for k, v in coeffs.items():
            if v.shape != (dim, dim):
                raise ValueError(f"coefficient z^{k} has shape {v.shape}, expected {(dim, dim)}")
        self.coeffs = {k: v for k, v in coeffs.items() if not all_zero(v)}
        self.dim = dim
        self.exact = exact

    # constructors
    @classmethod
    def constant(cls, A):
        A = np.asarray(A)
        return cls({0: A}, dim=A.shape[0], exact=is_exact(A))

    @classmethod
    def identity(cls, n, exact=True):
        return cls({0: eye(n, exact)}, dim=n, exact=exact)

    @classmethod
    def zero(cls, n, exact=True):
        return cls({}, dim=n, exact=exact)

    @classmethod
    def from_entries(cls, entries):
        """Build from a square nested list of Laurent polynomials."""
        n = len(entries)
        out = {}
        for i in range(n):
            for j in range(n):
                for k, v in entries[i][j].terms.items():
                    if k not in out:
                        out[k] = zeros((n, n), exact=True)
                    out[k][i, j] = v
        return cls(out, dim=n, exact=True)

    # accessors
    def coeff(self, k):
        if k in self.coeffs:
            return self.coeffs[k]
        return zeros((self.dim, self.dim), self.exact)

    @property
    def degree(self):
        return max(self.coeffs) if self.coeffs else None

    @property
    def low(self):
        return min(self.coeffs) if self.coeffs else None

    def powers(self):
        return sorted(self.coeffs)

    def entry(self, i, j):
        return Laurent({k: v[i, j] for k, v in self.coeffs.items()})

    def entries(self):
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def is_zero(self):
        return not self.coeffs

    def __call__(self, z):
        out = zeros((self.dim, self.dim), self.exact and isinstance(z, (int, Fraction)))
        for k, v in self.coeffs.items():
            out = out + v * (z**k)
        return out

    # arithmetic
    def _same(self, other):
        if not isinstance(other, ZMatrix):
            raise TypeError("ZMatrix expected")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return ZMatrix(out, self.dim, self.exact and other.exact)

    def __neg__(self):
        return ZMatrix({k: -v for k, v in self.coeffs.items()}, self.dim, self.exact)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        return zmat_mul(self, other)

    def scale(self, c):
        return ZMatrix({k: v * c for k, v in self.coeffs.items()}, self.dim, self.exact)

    def shift(self, k):
        """Multiply by z^k."""
        return ZMatrix({p + k: v for p, v in self.coeffs.items()}, self.dim, self.exact)

    def add_scalar(self, c):
        """M + c·I (c a constant)."""
        return self + ZMatrix({0: eye(self.dim, self.exact) * c}, self.dim, self.exact)

    def conj(self, T, Tinv):
        """Tinv · M · T for constant T."""
        return ZMatrix({k: Tinv.dot(v).dot(T) for k, v in self.coeffs.items()}, self.dim, self.exact)

    def transpose(self):
        return ZMatrix({k: v.T.copy() for k, v in self.coeffs.items()}, self.dim, self.exact)

    def submatrix(self, keep):
        keep = list(keep)
        return ZMatrix({k: v[np.ix_(keep, keep)] for k, v in self.coeffs.items()}, len(keep), self.exact)

    def drop(self, index):
        """Delete row and column ``index`` (0-based)."""
        return self.submatrix([i for i in range(self.dim) if i != index])

    def row(self, i):
        return [self.entry(i, j) for j in range(self.dim)]

    def col(self, j):
        return [self.entry(i, j) for i in range(self.dim)]

    def trace(self):
        return Laurent({k: sum(v.diagonal()) for k, v in self.coeffs.items()})

    def map_entries(self, f):
        return ZMatrix({k: np.vectorize(f, otypes=[object])(v) for k, v in self.coeffs.items()},
                       self.dim, self.exact)

    def __eq__(self, other):
        if not isinstance(other, ZMatrix) or other.dim != self.dim:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return id(self)

    def max_abs_diff(self, other):
        d = self - other
        if d.is_zero():
            return 0.0
        return max(float(np.max(np.abs(np.asarray(v.tolist(), dtype=complex)))) for v in d.coeffs.values())

    def __repr__(self):
        return f"ZMatrix(dim={self.dim}, powers={self.powers()})"


def zmat_mul(P, Q):
    """Exact product of Laurent-polynomial matrices (convolution of coefficients)."""
    P._same(Q)
    out = {}
    for a, A in P.coeffs.items():
        for b, B in Q.coeffs.items():
            prod = A.dot(B)
            out[a + b] = out[a + b] + prod if (a + b) in out else prod
    return ZMatrix(out, P.dim, P.exact and Q.exact)


def _sample_points(count, exact):
    return [Fraction(k) if exact else float(k) for k in range(count)]


def zmat_det(P):
    """det P as a Laurent polynomial, by exact interpolation of z^{-n·low}·det."""
    n = P.dim
    if P.is_zero():
        return Laurent()
    low = P.low
    Q = P.shift(-low)
    d = n * Q.degree
    pts = _sample_points(d + 1, P.exact)
    vals = [det(Q(z)) for z in pts]
    return interpolate(pts, vals).shift(n * low)


def zmat_adjugate(P):
    """(adj P, det P) for a polynomial matrix, by interpolation at points where det ≠ 0."""
    if P.low is not None and P.low < 0:
        raise ValueError("adjugate implemented for polynomial matrices only")
    n = P.dim
    D = zmat_det(P)
    if D.is_zero():
        raise ArithmeticError("singular polynomial matrix")
    dadj = (n - 1) * (P.degree or 0)
    pts, vals = [], []
    k = 0
    from .linalg import inv
    while len(pts) < dadj + 1:
        z = Fraction(k) if P.exact else float(k)
        k += 1
        dz = D(z)
        if dz == 0:
            continue
        pts.append(z)
        vals.append(inv(P(z)) * dz)
    entries = [[interpolate(pts, [v[i, j] for v in vals]) for j in range(n)] for i in range(n)]
    return ZMatrix.from_entries(entries) if P.exact else _from_entries_float(entries, n), D


def _from_entries_float(entries, n):
    out = {}
    for i in range(n):
        for j in range(n):
            for k, v in entries[i][j].terms.items():
                out.setdefault(k, np.zeros((n, n), dtype=complex))[i, j] = v
    return ZMatrix(out, n, exact=False)


class RationalZMatrix:
    """num(z) / den(z) with a polynomial matrix numerator and a scalar polynomial denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den if isinstance(den, Laurent) else Laurent({0: den})

    @property
    def dim(self):
        return self.num.dim

    def reduce(self):
        """Cancel the gcd of the denominator with every numerator entry; make den monic."""
        g = self.den
        for row in self.num.entries():
            for e in row:
                if not e.is_zero():
                    g = poly_gcd(g, e)
                if g.degree == 0:
                    break
        num_entries = [[e // g for e in row] for row in self.num.entries()]
        den = self.den // g
        lead = den.lead()
        num = ZMatrix.from_entries([[e / lead for e in row] for row in num_entries])
        return RationalZMatrix(num, den / lead)

    def submatrix(self, keep):
        return RationalZMatrix(self.num.submatrix(keep), self.den)

    def drop(self, index):
        return RationalZMatrix(self.num.drop(index), self.den)

    def row_is_zero(self, i):
        return all(e.is_zero() for e in self.num.row(i))

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def subtract_scalar_poly(self, c_poly):
        """num/den − c_poly/den · I, with c_poly a Laurent polynomial."""
        n = self.dim
        ident = {k: eye(n, True) * v for k, v in c_poly.terms.items()}
        return RationalZMatrix(self.num - ZMatrix(ident, n, True), self.den)
