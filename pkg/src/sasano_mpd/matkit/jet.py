"""First-order jets: a value together with its gradient over a fixed variable list.

Arithmetic follows the usual rules, so rational expressions in jets carry exact
gradients when the inputs are Fractions.
"""
from numbers import Number

import numpy as np


class Jet:
    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = grad

    @classmethod
    def variable(cls, val, index, size, exact=True):
        g = np.zeros(size, dtype=object if exact else complex)
        if exact:
            g[:] = 0
        g[index] = 1
        return cls(val, g)

    @classmethod
    def const(cls, val, size, exact=True):
        g = np.zeros(size, dtype=object if exact else complex)
        if exact:
            g[:] = 0
        return cls(val, g)

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        if isinstance(other, Number):
            return Jet(other, self.grad * 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.val + o.val, self.grad + o.grad)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Jet(self.val - o.val, self.grad - o.grad)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Jet(self.val * other, self.grad * other)
        if not isinstance(other, Jet):
            return NotImplemented
        return Jet(self.val * other.val, self.grad * other.val + other.grad * self.val)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Jet(self.val / other, self.grad / other)
        if not isinstance(other, Jet):
            return NotImplemented
        q = self.val / other.val
        return Jet(q, (self.grad - other.grad * q) / other.val)

    def __rtruediv__(self, other):
        return Jet(other, self.grad * 0) / self

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("nonnegative integer powers only")
        out = Jet(1, self.grad * 0)
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        return f"Jet({self.val!r}, grad={list(self.grad)!r})"


def value(x):
    return x.val if isinstance(x, Jet) else x


def gradient(x, size, exact=True):
    if isinstance(x, Jet):
        return x.grad
    g = np.zeros(size, dtype=object if exact else complex)
    if exact:
        g[:] = 0
    return g
