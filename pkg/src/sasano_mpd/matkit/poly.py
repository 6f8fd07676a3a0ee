"""Laurent polynomials in one variable over Q (Fraction) or C (complex)."""
from fractions import Fraction
from numbers import Number

from .field import is_exact_scalar


def _clean(terms):
    return {k: v for k, v in terms.items() if v != 0}


class Laurent:
    """Finite sum Σ c_k z^k, k ∈ Z. Immutable; zero coefficients are never stored."""

    __slots__ = ("_c",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {0: terms}
        self._c = _clean({int(k): v for k, v in terms.items()})

    @classmethod
    def from_coeffs(cls, coeffs, low=0):
        return cls({low + k: c for k, c in enumerate(coeffs)})

    @classmethod
    def z(cls, power=1):
        return cls({power: Fraction(1)})

    @property
    def terms(self):
        return dict(self._c)

    def coeff(self, k):
        return self._c.get(k, 0)

    def is_zero(self):
        return not self._c

    @property
    def degree(self):
        return max(self._c) if self._c else None

    @property
    def low(self):
        return min(self._c) if self._c else None

    def is_polynomial(self):
        return not self._c or self.low >= 0

    def coeff_list(self):
        """Dense coefficients c_0..c_deg of a polynomial."""
        if not self._c:
            return []
        if self.low < 0:
            raise ValueError("negative powers present")
        return [self._c.get(k, 0) for k in range(self.degree + 1)]

    def lead(self):
        return self._c[self.degree]

    # arithmetic
    def _lift(self, other):
        if isinstance(other, Laurent):
            return other
        if isinstance(other, Number):
            return Laurent({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Laurent({k: v * other for k, v in self._c.items()})
        if not isinstance(other, Laurent):
            return NotImplemented
        out = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return Laurent(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Laurent({k: v / other for k, v in self._c.items()})
        if isinstance(other, Laurent) and len(other._c) == 1:
            (k, v), = other._c.items()
            return Laurent({i - k: c / v for i, c in self._c.items()})
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact Laurent division")
        return q

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        out = Laurent({0: 1})
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __call__(self, z):
        return sum((c * z**k for k, c in self._c.items()), 0)

    def shift(self, k):
        """Multiply by z^k."""
        return Laurent({i + k: v for i, v in self._c.items()})

    def derivative(self):
        return Laurent({k - 1: k * v for k, v in self._c.items() if k != 0})

    def reciprocal(self, d=None):
        """z^d · p(1/z); d defaults to the degree."""
        if d is None:
            d = self.degree or 0
        return Laurent({d - k: v for k, v in self._c.items()})

    def scale_arg(self, c):
        """p(c·z)."""
        return Laurent({k: v * c**k for k, v in self._c.items()})

    def map_coeffs(self, f):
        return Laurent({k: f(v) for k, v in self._c.items()})

    def monic(self):
        return self / self.lead()

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if not (self.is_polynomial() and other.is_polynomial()):
            raise ValueError("polynomial division needs nonnegative powers")
        r = dict(self._c)
        q = {}
        db, lb = other.degree, other.lead()
        while r:
            dr = max(r)
            if dr < db:
                break
            c = r[dr] / lb
            q[dr - db] = c
            for k, v in other._c.items():
                key = k + dr - db
                r[key] = r.get(key, 0) - c * v
            r = _clean(r)
            r.pop(dr, None)
        return Laurent(q), Laurent(r)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            v = self._c[k]
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            coef = str(v)
            if mono:
                parts.append(f"({coef})*{mono}")
            else:
                parts.append(f"({coef})")
        return " + ".join(parts)


def poly_gcd(a, b):
    """Monic gcd of two polynomials (exact coefficients expected)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_factorization(p):
    """Yun's algorithm: list of (factor, multiplicity), factors monic, squarefree, coprime."""
    if p.is_zero() or p.degree == 0:
        return []
    if not all(is_exact_scalar(c) for c in p.terms.values()):
        raise TypeError("squarefree factorization needs exact coefficients")
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    out = []
    i = 1
    while b.degree and b.degree > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree and g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        i += 1
    return out


def interpolate(xs, ys):
    """Newton interpolation; returns the Laurent (polynomial) through the points."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Laurent({0: coef[-1]})
    for k in range(n - 2, -1, -1):
        p = p * Laurent({1: 1, 0: -xs[k]}) + coef[k]
    return p


def rational_roots(p, max_den=10**9):
    """Exact rational roots with multiplicity.

    Candidates come from floating roots of each squarefree factor, rounded with
    ``limit_denominator`` and accepted only if they annihilate the factor exactly.
    Returns (roots, leftover) where leftover holds the unresolved factors.
    """
    import numpy as np

    roots = []
    leftover = []
    for f, m in squarefree_factorization(p):
        while f.degree and f.degree > 0:
            cl = [complex(c) for c in f.coeff_list()]
            found = None
            for r in np.roots(cl[::-1]):
                if abs(r.imag) > 1e-6 * (1 + abs(r)):
                    continue
                cand = Fraction(float(r.real)).limit_denominator(max_den)
                if f(cand) == 0:
                    found = cand
                    break
            if found is None:
                leftover.append((f, m))
                break
            roots.append((found, m))
            f = f // Laurent({1: Fraction(1), 0: -found})
    return roots, leftover
