"""The Sasano system of type D(1)_{2n+2} in the s-chart and the t-chart.

Both Hamiltonians are sums of P_VI blocks plus a nearest-neighbour-free coupling
Σ_{i<j} 2 U_i V_j. Partial derivatives are written out by hand so that the same
code runs on Fractions (exact identities), complex floats and Jets.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

S_CHART = "s"
T_CHART = "t"


class SingularTime(ValueError):
    """Time variable at a fixed singularity (0 or 1)."""


class NormalizationError(ValueError):
    pass


def _is_exact(x):
    return isinstance(x, Rational)


@dataclass(frozen=True)
class AlphaParams:
    """α_0..α_{2n+2}; the constructor enforces α_0+α_1+2Σ_{j=2}^{2n}α_j+α_{2n+1}+α_{2n+2} = 1."""

    n: int
    alpha: tuple
    checked: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.alpha) != 2 * self.n + 3:
            raise ValueError(f"expected {2 * self.n + 3} parameters, got {len(self.alpha)}")
        if self.checked and not check_alpha_normalization(self):
            raise NormalizationError(
                f"normalization sum is {self.normalization_sum()}, expected 1")

    @classmethod
    def unchecked(cls, n, alpha):
        """Skip the normalization check (intermediate parameter values)."""
        return cls(n, tuple(alpha), checked=False)

    @classmethod
    def from_free(cls, n, free):
        """Build from α_1..α_{2n+2}, solving the normalization for α_0."""
        free = tuple(free)
        if len(free) != 2 * n + 2:
            raise ValueError(f"expected {2 * n + 2} free parameters")
        rest = free[0] + sum(2 * a for a in free[1:2 * n]) + free[2 * n] + free[2 * n + 1]
        return cls(n, (1 - rest,) + free)

    def __getitem__(self, j):
        return self.alpha[j]

    def normalization_sum(self):
        a, n = self.alpha, self.n
        return a[0] + a[1] + sum(2 * a[j] for j in range(2, 2 * n + 1)) + a[2 * n + 1] + a[2 * n + 2]

    def replaced(self, updates):
        """Copy with {index: value} substitutions; the result is unchecked."""
        a = list(self.alpha)
        for j, v in updates.items():
            a[j] = v
        return AlphaParams.unchecked(self.n, a)


def check_alpha_normalization(params, tol=1e-10):
    s = params.normalization_sum()
    if all(_is_exact(a) for a in params.alpha):
        return s == 1
    scale = 1.0 + sum(abs(complex(a)) for a in params.alpha)
    return abs(complex(s) - 1.0) <= tol * scale


@dataclass(frozen=True)
class PviKappas:
    kappa_s: object
    kappa_1: object
    kappa_0: object
    kappa_inf: object


def kappa_of_alpha(params, i):
    n = params.n
    if not 1 <= i <= n:
        raise IndexError(f"block index {i} outside 1..{n}")
    a = params.alpha
    zero = 0
    k_s = a[1] + sum((a[2 * j + 1] for j in range(1, i)), zero)
    k_1 = (sum((a[2 * j + 1] for j in range(i, n)), zero)
           + sum((2 * a[2 * j] for j in range(i + 1, n + 1)), zero) + a[2 * n + 1])
    k_0 = sum((a[2 * j + 1] for j in range(i, n)), zero) + a[2 * n + 2]
    k_inf = (a[0] + sum((2 * a[2 * j] for j in range(1, i)), zero)
             + sum((a[2 * j + 1] for j in range(1, i)), zero))
    return PviKappas(k_s, k_1, k_0, k_inf)


def pvi_hamiltonian(q, p, k, alpha2i, s):
    """H[q, p; κ_s, κ_1, κ_0, κ_∞; s] with the slots taken from ``k`` in that order."""
    return (q * (q - 1) * (q - s) * p * p
            - (k.kappa_s - 1) * q * (q - 1) * p
            - k.kappa_1 * q * (q - s) * p
            - k.kappa_0 * (q - 1) * (q - s) * p
            + alpha2i * (alpha2i + k.kappa_inf) * q)


def pvi_partials(q, p, k, alpha2i, s):
    """(∂H/∂q, ∂H/∂p) of ``pvi_hamiltonian``."""
    a, b, c, d, e = k.kappa_s, k.kappa_1, k.kappa_0, k.kappa_inf, alpha2i
    dq = ((3 * q * q - 2 * (1 + s) * q + s) * p * p
          - (a - 1) * (2 * q - 1) * p
          - b * (2 * q - s) * p
          - c * (2 * q - 1 - s) * p
          + e * (e + d))
    dp = (2 * q * (q - 1) * (q - s) * p
          - (a - 1) * q * (q - 1)
          - b * q * (q - s)
          - c * (q - 1) * (q - s))
    return dq, dp


def block_slots(params, i, chart):
    """P_VI slot values for block i: natural order in the s-chart, permuted in the t-chart."""
    k = kappa_of_alpha(params, i)
    if chart == S_CHART:
        return k
    return PviKappas(k.kappa_1, k.kappa_0, k.kappa_s, k.kappa_inf)


@dataclass(frozen=True)
class PhasePoint:
    """Canonical coordinates: (q, p; s) in the s-chart or (λ, μ; t) in the t-chart."""

    chart: str
    q: tuple
    p: tuple
    time: object

    def __post_init__(self):
        if self.chart not in (S_CHART, T_CHART):
            raise ValueError(f"unknown chart {self.chart!r}")
        object.__setattr__(self, "q", tuple(self.q))
        object.__setattr__(self, "p", tuple(self.p))
        if len(self.q) != len(self.p) or not self.q:
            raise ValueError("need n >= 1 coordinate pairs")
        if self.time == 0 or self.time == 1:
            raise SingularTime(f"time {self.time} is a fixed singularity")

    @property
    def n(self):
        return len(self.q)

    @property
    def lam(self):
        return self.q

    @property
    def mu(self):
        return self.p

    def as_array(self):
        return np.array(self.q + self.p, dtype=complex)


def _require_chart(x, chart):
    if x.chart != chart:
        raise ValueError(f"expected a {chart}-chart point, got {x.chart}-chart")


def _coupling_terms(x, params):
    """U_i and V_j of the coupling Σ_{i<j} 2U_iV_j for the chart of x."""
    t = x.time
    U, V = [], []
    for k in range(x.n):
        q, p, e = x.q[k], x.p[k], params.alpha[2 * (k + 1)]
        if x.chart == S_CHART:
            U.append((q - t) * p)
            V.append(q * ((q - 1) * p + e))
        else:
            U.append(q * p)
            V.append((q - 1) * ((q - t) * p + e))
    return U, V


def _hamiltonian(x, params):
    if params.n != x.n:
        raise ValueError("parameter and phase-point sizes differ")
    H = 0
    for i in range(1, x.n + 1):
        H = H + pvi_hamiltonian(x.q[i - 1], x.p[i - 1], block_slots(params, i, x.chart),
                                params.alpha[2 * i], x.time)
    U, V = _coupling_terms(x, params)
    for i in range(x.n):
        for j in range(i + 1, x.n):
            H = H + 2 * U[i] * V[j]
    return H


def hamiltonian_s(x, params):
    _require_chart(x, S_CHART)
    return _hamiltonian(x, params)


def hamiltonian_t(y, params):
    _require_chart(y, T_CHART)
    return _hamiltonian(y, params)


def hamiltonian_gradient(x, params):
    """(∂H/∂q_k, ∂H/∂p_k) lists for the chart of x, hand-expanded."""
    n, t = x.n, x.time
    U, V = _coupling_terms(x, params)
    dq, dp = [], []
    for k in range(n):
        q, p, e = x.q[k], x.p[k], params.alpha[2 * (k + 1)]
        gq, gp = pvi_partials(q, p, block_slots(params, k + 1, x.chart), e, t)
        tail = sum(V[k + 1:], 0)
        head = sum(U[:k], 0)
        if x.chart == S_CHART:
            gp = gp + 2 * (q - t) * tail + 2 * head * q * (q - 1)
            gq = gq + 2 * p * tail + 2 * head * ((2 * q - 1) * p + e)
        else:
            gp = gp + 2 * q * tail + 2 * head * (q - 1) * (q - t)
            gq = gq + 2 * p * tail + 2 * head * ((2 * q - 1 - t) * p + e)
        dq.append(gq)
        dp.append(gp)
    return dq, dp


def _vfield(x, params):
    t = x.time
    if t == 0 or t == 1:
        raise SingularTime(f"time {t} is a fixed singularity")
    dq, dp = hamiltonian_gradient(x, params)
    den = t * (t - 1)
    return [g / den for g in dp], [-g / den for g in dq]


def vfield_s(x, params):
    """(dq/ds, dp/ds) from s(s−1)q' = ∂H/∂p, s(s−1)p' = −∂H/∂q."""
    _require_chart(x, S_CHART)
    return _vfield(x, params)


def vfield_t(y, params):
    """(dλ/dt, dμ/dt) from t(t−1)λ' = ∂H/∂μ, t(t−1)μ' = −∂H/∂λ."""
    _require_chart(y, T_CHART)
    return _vfield(y, params)


def kernel_params(params, chart):
    """Flat complex array of per-block slots (a, b, c, d, α_{2i}) for the float kernels."""
    out = []
    for i in range(1, params.n + 1):
        k = block_slots(params, i, chart)
        out += [k.kappa_s, k.kappa_1, k.kappa_0, k.kappa_inf, params.alpha[2 * i]]
    return np.array([complex(v) for v in out], dtype=complex)


def to_mpd(x):
    """s-chart → t-chart: t = 1 − 1/s, λ = 1 − q/s, μ = −s·p."""
    _require_chart(x, S_CHART)
    s = x.time
    return PhasePoint(T_CHART, [1 - q / s for q in x.q], [-s * p for p in x.p], 1 - 1 / s)


def from_mpd(y):
    _require_chart(y, T_CHART)
    s = 1 / (1 - y.time)
    return PhasePoint(S_CHART, [s * (1 - lam) for lam in y.q], [-mu / s for mu in y.p], s)


def backlund_s5(x, params, paper_alpha0_shift=False):
    """The α_5-reflection for n = 2.

    p_2 → p_2 + α_5/(1 − q_2), α_4 → α_4 + α_5, α_5 → −α_5. With
    ``paper_alpha0_shift`` the extra α_0 → α_0 + α_5 is applied as well; that
    variant does not keep the normalization, so its parameters come back unchecked.
    """
    if params.n != 2 or x.n != 2:
        raise ValueError("backlund_s5 is defined for n = 2")
    _require_chart(x, S_CHART)
    q2 = x.q[1]
    if q2 == 1:
        raise ZeroDivisionError("pole of the Bäcklund transformation at q_2 = 1")
    a5 = params.alpha[5]
    p = (x.p[0], x.p[1] + a5 / (1 - q2))
    updates = {4: params.alpha[4] + a5, 5: -a5}
    if paper_alpha0_shift:
        updates[0] = params.alpha[0] + a5
    new = params.replaced(updates)
    if not paper_alpha0_shift and params.checked:
        new = AlphaParams(params.n, new.alpha)
    return PhasePoint(S_CHART, x.q, p, x.time), new


def random_alpha(n, rng, exact=True, den=12, span=6):
    """Random normalized parameters: α_1..α_{2n+2} drawn, α_0 solved for."""
    if exact:
        free = [Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))
                for _ in range(2 * n + 2)]
    else:
        free = list(rng.uniform(-1, 1, 2 * n + 2))
    return AlphaParams.from_free(n, free)
