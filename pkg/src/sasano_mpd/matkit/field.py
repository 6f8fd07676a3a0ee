"""Scalar helpers shared by the exact (Fraction) and floating (complex) backends.

A matrix is "exact" when it is a numpy object array holding Fractions (or ints).
Everything else is treated as floating point and promoted to complex128.
"""
from fractions import Fraction
from numbers import Rational

import numpy as np

DEFAULT_RTOL = 1e-8


def is_exact(A):
    return isinstance(A, np.ndarray) and A.dtype == object


def is_exact_scalar(x):
    return isinstance(x, Rational)


def frac(x):
    """Coerce ints, strings and Fractions to Fraction. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


def exact_array(data):
    a = np.array(data, dtype=object)
    flat = a.reshape(-1)
    for k in range(flat.size):
        flat[k] = frac(flat[k])
    return a


def float_array(data):
    if is_exact(data):
        return np.array(data.tolist(), dtype=complex)
    return np.asarray(data, dtype=complex)


def zeros(shape, exact=False):
    if not exact:
        return np.zeros(shape, dtype=complex)
    a = np.empty(shape, dtype=object)
    a.fill(Fraction(0))
    return a


def eye(n, exact=False):
    if not exact:
        return np.eye(n, dtype=complex)
    a = zeros((n, n), exact=True)
    for i in range(n):
        a[i, i] = Fraction(1)
    return a


def like(A, data):
    """Build an array in the same field as ``A``."""
    return exact_array(data) if is_exact(A) else float_array(data)


def one(exact):
    return Fraction(1) if exact else 1.0 + 0j


def is_zero(x, tol=0.0):
    if is_exact_scalar(x):
        return x == 0
    return abs(x) <= tol


def all_zero(A, tol=0.0):
    A = np.asarray(A)
    if A.size == 0:
        return True
    if is_exact(A):
        return all(x == 0 for x in A.reshape(-1))
    return float(np.max(np.abs(A))) <= tol


def max_abs(A):
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(max(abs(complex(x)) for x in A.reshape(-1)))


def to_jsonable(x):
    """Render a scalar for a JSON report: exact values as 'p/q' strings."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    c = complex(x)
    if c.imag == 0:
        return float(c.real)
    return [float(c.real), float(c.imag)]
