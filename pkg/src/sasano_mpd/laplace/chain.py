"""The n = 2 reduction chain: so12 → so10 → so8 → 7×7 → 6×6 → sl4.

Every function here works pointwise at exact rational (q, p, s, α) and checks
its checkpoint before returning. Nothing is integrated.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..matkit import eye, frac
from ..matkit.laurent import ZMatrix
from ..matkit.linalg import inv
from ..sasano import S_CHART, AlphaParams, PhasePoint, backlund_s5
from .loop import (ChainError, drop_zero_line, dynkin_flip, in_orthogonal_algebra,
                   laplace_left, laplace_right, nested_ad, so_generators, split_linear)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class LaxStage:
    """One stage of the chain: its label, matrix and the point it was built from."""

    label: str
    M: object
    meta: dict
    checks: dict = field(default_factory=dict)

    @property
    def point(self):
        return self.meta["point"]

    @property
    def alpha(self):
        return self.meta["alpha"]


def _exact_point(y, alpha):
    if y.chart != S_CHART or y.n != 2 or alpha.n != 2:
        raise ValueError("the chain takes an n = 2 point in the s-chart")
    y = PhasePoint(S_CHART, [frac(v) for v in y.q], [frac(v) for v in y.p], frac(y.time))
    return y, AlphaParams(2, [frac(a) for a in alpha.alpha])


def m12_coefficients(y, alpha):
    """(ε_1..ε_6, φ_1..φ_6) of the so12 Lax matrix, as 1-based lists with a None slot 0."""
    (q1, q2), (p1, p2), s = y.q, y.p, y.time
    a = alpha.alpha
    eps = [None,
           HALF * (-1 + a[0] - a[1]),
           HALF * (-1 + a[0] + a[1]),
           HALF * (-1 + a[0] + a[1] + 2 * a[2]),
           HALF * (-2 * a[4] - a[5] - a[6]),
           HALF * (-a[5] - a[6]),
           HALF * (a[5] - a[6])]
    phi = [None, s - q1, p1, q1 - q2, p2, q2 - 1, q2]
    return eps, phi


def _combo(alg, cartan, simple, words):
    out = ZMatrix.zero(alg.dim)
    for i, c in cartan.items():
        if c != 0:
            out = out + alg.h[i].scale(c)
    for i, c in simple.items():
        if c != 0:
            out = out + alg.e[i].scale(c)
    for w, c in words:
        if c != 0:
            out = out + nested_ad(alg, *w).scale(c)
    return out


def build_M12(y, alpha):
    y, alpha = _exact_point(y, alpha)
    alg = so_generators(6)
    eps, phi = m12_coefficients(y, alpha)
    simple = {i: phi[i] for i in range(1, 7)}
    simple[0] = -1
    words = [((1, 2), -1), ((2, 3), -1), ((3, 4), -1), ((4, 5), -1), ((4, 6), -1)]
    M = _combo(alg, {i: eps[i] for i in range(1, 7)}, simple, words)
    return LaxStage("so12", M, {"point": y, "alpha": alpha})


def expected_M10(y, alpha):
    """The closed form of the so10 stage."""
    y, alpha = _exact_point(y, alpha)
    (q1, q2), (p1, p2), s = y.q, y.p, y.time
    a = alpha.alpha
    eps, phi = m12_coefficients(y, alpha)
    alg = so_generators(5)
    cartan = {i: -eps[7 - i] - HALF for i in range(1, 6)}
    simple = {i: phi[6 - i] for i in range(0, 5)}
    simple[5] = (q1 - s) * p1 - a[1]
    words = [((0, 2), 1), ((1, 2), 1), ((2, 3), 1), ((3, 4), 1), ((3, 5), q1 - s), ((5, 3, 4), -1)]
    return _combo(alg, cartan, simple, words)


def m8_coefficients(y, alpha):
    (q1, q2), (p1, p2), s = y.q, y.p, y.time
    a = alpha.alpha
    ep = [HALF * (a[2] + 2 * a[3] + 3 * a[4] + a[5] + 2 * a[6] - 2),
          HALF * (-a[2] - 2 * a[3] - a[4] - a[5]),
          HALF * (-a[2] - a[4] - a[5]),
          HALF * (a[2] - a[4] - a[5])]
    ph = [q2 * p2 + a[4], (q1 - s) * p1 + a[0] + a[2], q1 - q2, p1, (q2 - 1) * p2 + a[4]]
    return ep, ph


def expected_M8(y, alpha):
    """The closed form of the so8 stage."""
    y, alpha = _exact_point(y, alpha)
    (q1, q2), _, s = y.q, y.p, y.time
    ep, ph = m8_coefficients(y, alpha)
    alg = so_generators(4)
    words = [((0, 2), q1), ((1, 2), s - q2), ((2, 3), 1), ((2, 4), 1 - q1), ((0, 1, 2), s),
             ((0, 2, 3), 1), ((1, 2, 4), 1 - s), ((3, 2, 4), 1)]
    return _combo(alg, {i + 1: ep[i] for i in range(4)}, dict(enumerate(ph)), words)


def _scalar_part(M):
    """c with M − c·I traceless at z⁰ (and no trace elsewhere)."""
    for k, C in M.coeffs.items():
        if k != 0 and sum(C.diagonal()) != 0:
            raise ChainError(f"trace at z^{k} is not zero")
    return Fraction(sum(M.coeff(0).diagonal())) / M.dim


def _check(checks, name, ok, detail=""):
    checks[name] = bool(ok)
    if not ok:
        raise ChainError(f"checkpoint '{name}' failed{': ' + detail if detail else ''}")


def chain_to_so10(stage):
    """so12 → 11×11 → so10, ending with the full diagram flip."""
    if stage.label != "so12":
        raise ValueError("chain_to_so10 expects the so12 stage")
    checks = {}
    M12 = stage.M
    eps1 = m12_coefficients(stage.point, stage.alpha)[0][1]
    _check(checks, "so12 membership", in_orthogonal_algebra(M12))
    _, M1 = split_linear(M12)
    _check(checks, "(M12_1)^2 = 0", not np.any(M1.dot(M1)))
    N12 = laplace_left(M12, eps1)
    _check(checks, "N12 first column zero", all(e.is_zero() for e in N12.col(0)))
    M11 = drop_zero_line(N12, "column", 0)
    A0, A1 = split_linear(M11)
    _check(checks, "(M11_1)^2 = 0", not np.any(A1.dot(A1)))
    _check(checks, "M11 corner = -2 eps1", -A0[10, 10] == 2 * eps1)
    N11 = laplace_right(M11, eps1)
    _check(checks, "N11 row 11 zero", all(e.is_zero() for e in N11.row(10)))
    raw = drop_zero_line(N11, "row", 10)
    c = _scalar_part(raw)
    _check(checks, "scalar part = eps1", c == eps1)
    M10 = dynkin_flip(raw.add_scalar(-c), so_generators(5), "full")
    _check(checks, "so10 membership", in_orthogonal_algebra(M10))
    _check(checks, "equals expected_M10", M10 == expected_M10(stage.point, stage.alpha))
    return LaxStage("so10", M10, dict(stage.meta), checks)


def _expm_nilpotent(X):
    n = X.shape[0]
    out = eye(n, True)
    term = eye(n, True)
    for k in range(1, n + 1):
        term = term.dot(X) / k
        if not np.any(term):
            break
        out = out + term
    return out


def gauge_so8(q2):
    """T = exp(−e_1/φ_5)·exp(−e_4)·φ_5^{−h_1} with φ_5 = q_2 − 1, and T⁻¹."""
    phi5 = frac(q2) - 1
    if phi5 == 0:
        raise ChainError("gauge needs q_2 ≠ 1")
    alg = so_generators(4)
    e1 = alg.e[1].coeff(0)
    e4 = alg.e[4].coeff(0)
    D = eye(8, True)
    D[0, 0] = 1 / phi5
    D[7, 7] = phi5
    T = _expm_nilpotent(-e1 / phi5).dot(_expm_nilpotent(-e4)).dot(D)
    return T, inv(T)


def chain_to_so8(stage):
    """so10 → so8: Laplace pair, scalar removal, gauge, Bäcklund relabelling, e_1 ↔ e_4 flip.

    The returned stage carries the transformed point s_5(y, α) in its metadata,
    which is where the closed form expected_M8 is evaluated.
    """
    if stage.label != "so10":
        raise ValueError("chain_to_so8 expects the so10 stage")
    y, alpha = stage.point, stage.alpha
    q2 = y.q[1]
    if q2 == 0 or q2 == 1:
        raise ChainError(f"chain_to_so8 needs q_2 ∉ {{0, 1}}, got {q2}")
    checks = {}
    M10 = stage.M
    A0, _ = split_linear(M10)
    _check(checks, "M10_0 first column clean",
           all(A0[i, 0] == 0 for i in range(1, 10)))
    N10 = laplace_left(M10, A0[0, 0])
    M9 = drop_zero_line(N10, "column", 0)
    B0, _ = split_linear(M9)
    N9 = laplace_right(M9, -B0[8, 8] / 2)
    raw = drop_zero_line(N9, "row", 8)
    c = _scalar_part(raw)
    a = alpha.alpha
    _check(checks, "scalar part = (a6 - a5 - 1)/2", c == (a[6] - a[5] - 1) / 2)
    T, Tinv = gauge_so8(q2)
    gauged = raw.add_scalar(-c).conj(T, Tinv)
    _check(checks, "gauged so8 membership", in_orthogonal_algebra(gauged))
    M8 = dynkin_flip(gauged, so_generators(4), "e1e4")
    y2, alpha2 = backlund_s5(y, alpha)
    _check(checks, "equals expected_M8 at s5(y, alpha)", M8 == expected_M8(y2, alpha2))
    meta = dict(stage.meta, point=y2, alpha=alpha2, original_point=y, original_alpha=alpha)
    return LaxStage("so8", M8, meta, checks)
