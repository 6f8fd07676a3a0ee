"""Minor-determinant canonical coordinates (λ, μ) on the B/C phase space.

The map sends BCData to n pairs (λ_i, μ_i) built from minors of C_t, C_1 and the
first column of B_t. Gradients of minors are the signed complementary minors
(cofactors), so brackets of λ and μ are computed exactly in rational mode.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .matkit import eye, is_exact, max_abs, minor
from .matkit.jet import Jet
from .ode import sasano_flow
from .sasano import T_CHART, AlphaParams, PhasePoint, hamiltonian_t
from .schlesinger import (BCData, SpectralData, bc_decompose, jet_size, normalize_gauge,
                          poisson_bracket_bc, schlesinger_trajectory, var_index)


class MinorVanishes(ZeroDivisionError):
    """A denominator minor of the coordinate map is zero at the given point."""


@dataclass(frozen=True)
class CanonicalPoint:
    lam: tuple
    mu: tuple
    t: object

    @property
    def n(self):
        return len(self.lam)

    def as_phase_point(self):
        val = lambda x: x.val if isinstance(x, Jet) else x
        return PhasePoint(T_CHART, [val(x) for x in self.lam], [val(x) for x in self.mu], val(self.t))


# -- minors with cofactor gradients ---------------------------------------

def _minor(bc, block, rows, cols, jets):
    M = dict(zip(("B_t", "C_t", "B_1", "C_1"), bc.blocks()))[block]
    val = minor(M, rows, cols)
    if not jets:
        return val
    n = bc.n
    size = jet_size(n)
    grad = np.zeros(size, dtype=object if bc.exact else complex)
    if bc.exact:
        grad[:] = Fraction(0)
    rows, cols = list(rows), list(cols)
    for pa, a in enumerate(rows):
        for pb, b in enumerate(cols):
            cof = minor(M, rows[:pa] + rows[pa + 1:], cols[:pb] + cols[pb + 1:])
            grad[var_index(block, a - 1, b - 1, n)] = (-1) ** (pa + pb) * cof
    return Jet(val, grad)


def _nonzero(x, label, exact):
    v = x.val if isinstance(x, Jet) else x
    if (v == 0) if exact else abs(v) < 1e-300:
        raise MinorVanishes(f"denominator minor {label} vanishes")
    return x


def lambda_mu_from_bc(bc, t, jets=False):
    """(λ_i, μ_i), i = 1..n; with ``jets`` the values carry exact gradients."""
    n = bc.n
    exact = bc.exact
    lam, mu = [], []
    for i in range(1, n + 1):
        tail = list(range(i + 1, n + 1))
        d1 = _nonzero(_minor(bc, "C_1", [1] + tail, [i] + tail, jets),
                      f"Δ^{{1,{i+1}..{n}}}_{{{i}..{n}}}(C_1)", exact)
        dt_tail = _nonzero(_minor(bc, "C_t", tail, tail, jets),
                           f"Δ^{{{i+1}..{n}}}_{{{i+1}..{n}}}(C_t)", exact)
        dt_full = _nonzero(_minor(bc, "C_t", [i] + tail, [i] + tail, jets),
                           f"Δ^{{{i}..{n}}}_{{{i}..{n}}}(C_t)", exact)
        acc = 0
        for k in range(1, i + 1):
            b = _bt(bc, k - 1, jets)
            acc = acc + _minor(bc, "C_t", [i] + tail, [k] + tail, jets) * b
        sign = (-1) ** (n - i)
        mu.append(sign * d1 * acc / (dt_tail * dt_full * t))
        lam.append(-sign * t * _minor(bc, "C_t", [1] + tail, [i] + tail, jets) / d1)
    return CanonicalPoint(tuple(lam), tuple(mu), t)


def _bt(bc, k, jets):
    if not jets:
        return bc.B_t[k, 0]
    return Jet.variable(bc.B_t[k, 0], var_index("B_t", k, 0, bc.n), jet_size(bc.n), bc.exact)


def verify_canonical_brackets(bc, t, tol=0.0):
    """All {μ_i, λ_j} − δ_ij, {μ_i, μ_j}, {λ_i, λ_j}; lists entries above ``tol``."""
    cp = lambda_mu_from_bc(bc, t, jets=True)
    n = bc.n
    entries = []
    for i in range(n):
        for j in range(n):
            entries.append((f"{{mu_{i+1},lambda_{j+1}}}",
                            poisson_bracket_bc(cp.mu[i], cp.lam[j], bc) - (1 if i == j else 0)))
    for i in range(n):
        for j in range(i + 1, n):
            entries.append((f"{{mu_{i+1},mu_{j+1}}}", poisson_bracket_bc(cp.mu[i], cp.mu[j], bc)))
            entries.append((f"{{lambda_{i+1},lambda_{j+1}}}",
                            poisson_bracket_bc(cp.lam[i], cp.lam[j], bc)))
    exact = bc.exact
    dev = [(name, v) for name, v in entries if ((v != 0) if exact and tol == 0 else abs(v) > tol)]
    return {
        "n": n,
        "exact": exact,
        "count": len(entries),
        "max_deviation": max(abs(complex(v)) for _, v in entries) if entries else 0.0,
        "violations": dev,
    }


# -- P matrix -------------------------------------------------------------

def p_matrix(bc, t):
    """Lower-triangular P with μ = P·b^{(t)}_{·,1}, and its inverse from the closed form."""
    n = bc.n
    Ct, C1 = bc.C_t, bc.C_1
    exact = bc.exact
    P = np.zeros((n, n), dtype=object if exact else complex)
    Pinv = np.zeros((n, n), dtype=object if exact else complex)
    if exact:
        P[:] = Fraction(0)
        Pinv[:] = Fraction(0)
    for i in range(1, n + 1):
        tail = list(range(i + 1, n + 1))
        d1 = minor(C1, [1] + tail, [i] + tail)
        dtail = minor(Ct, tail, tail)
        dfull = minor(Ct, [i] + tail, [i] + tail)
        for lab, v in (("C_1 lead", d1), ("C_t tail", dtail), ("C_t full", dfull)):
            _nonzero(v, f"{lab} minor at i={i}", exact)
        for k in range(1, i + 1):
            P[i - 1, k - 1] = ((-1) ** (n - i) * d1 * minor(Ct, [i] + tail, [k] + tail)
                               / (dtail * dfull * t))
        for k in range(i, n + 1):
            cols = [c for c in range(i, n + 1) if c != k]
            Pinv[k - 1, i - 1] = (-1) ** (n - k) * t * minor(Ct, tail, cols) / d1
    return P, Pinv


# -- parameters -----------------------------------------------------------

def alpha_from_spectral(spec):
    """α(θ, κ); α_0 closes the normalization."""
    n = spec.n
    tt, t1 = spec.theta_t, spec.theta_1
    K = lambda i: spec.kappa[i - 1]
    a = [0] * (2 * n + 3)
    a[1] = -tt
    a[2] = -K(n + 1)
    for i in range(2, n + 1):
        a[2 * i - 1] = tt + t1 + K(i) + K(n + i - 1)
        a[2 * i] = -tt - t1 - K(i) - K(n + i)
    a[2 * n + 1] = tt + t1 + K(1) + K(2 * n)
    a[2 * n + 2] = -K(1) + K(2 * n) + 1
    return AlphaParams.from_free(n, a[1:])


def beta_params(spec):
    n = spec.n
    K = lambda i: spec.kappa[i - 1]
    return tuple([-K(n + 1)] + [-spec.theta_t - spec.theta_1 - K(i) - K(n + i)
                                for i in range(2, n + 1)])


# -- block constraints and trace lemma -------------------------------------

def _projectors(n, exact):
    E1 = eye(n, exact) * 0
    E1[0, 0] = E1[0, 0] + 1
    return E1, eye(n, exact) - E1


def block_constraints(bc, spec):
    """Residual matrices of the four block relations implied by Ã_t+Ã_1+Ã_0+Ã_∞ = 0."""
    n, exact = bc.n, bc.exact
    E1, E2 = _projectors(n, exact)
    Bt, Ct, B1, C1 = bc.blocks()
    K = lambda i: spec.kappa[i - 1]
    th = spec.theta_t + spec.theta_1
    CB = Ct.dot(Bt) + C1.dot(B1)
    D33 = eye(n, exact) * 0
    Dk = eye(n, exact) * 0
    for i in range(2, n + 1):
        D33[i - 1, i - 1] = th + K(i)
    for i in range(1, n + 1):
        Dk[i - 1, i - 1] = K(n + i)
    return {
        "(1,1)": E1.dot(CB).dot(E1) - (th + spec.theta_0 + K(1)) * E1,
        "(3,3) CB": E2.dot(CB).dot(E2) - D33,
        "(2,3)": E2.dot(Ct + C1),
        "(3,3) BC": Bt.dot(Ct) + B1.dot(C1) + Dk,
    }


def _tr(M):
    return sum(M.diagonal())


def trace_invariants(bc):
    """T1..T5: tr E1CtBt, tr E1C1Bt, tr E1CtB1, tr E1C1(Bt−B1)E2CtBt, tr E1Ct(Bt−B1)E2CtB1."""
    n, exact = bc.n, bc.exact
    E1, E2 = _projectors(n, exact)
    Bt, Ct, B1, C1 = bc.blocks()
    return (
        _tr(E1.dot(Ct).dot(Bt)),
        _tr(E1.dot(C1).dot(Bt)),
        _tr(E1.dot(Ct).dot(B1)),
        _tr(E1.dot(C1).dot(Bt - B1).dot(E2).dot(Ct).dot(Bt)),
        _tr(E1.dot(Ct).dot(Bt - B1).dot(E2).dot(Ct).dot(B1)),
    )


def trace_lemma_values(lam, mu, t, spec):
    """Right-hand sides of the five trace identities as functions of (λ, μ)."""
    n = len(lam)
    beta = beta_params(spec)
    K = lambda i: spec.kappa[i - 1]
    lm = [lam[i] * mu[i] for i in range(n)]
    T1 = -sum(lm, 0)
    T2 = t * sum(mu, 0)
    T3 = -sum((lam[i] * (lm[i] + beta[i]) for i in range(n)), 0) / t
    T4 = t * sum((mu[i] * (-sum((lm[j] + beta[j] for j in range(i)), 0) - beta[i] - K(n + i + 1)
                           + sum(lm[i + 1:], 0)) for i in range(n)), 0)
    T5 = -sum((lam[i] * (lm[i] + beta[i])
               * (sum(lm[:i], 0) - beta[i] - K(n + i + 1)
                  - sum((lm[j] + beta[j] for j in range(i + 1, n)), 0)) for i in range(n)), 0) / t
    return T1, T2, T3, T4, T5


def trace_identities_check(bc, t, spec, tol=1e-10):
    """Residuals of the five identities; flags data off the constrained locus."""
    cons = block_constraints(bc, spec)
    exact = bc.exact
    scale = (1 + max_abs(bc.C_t) + max_abs(bc.B_t)) ** 3

    def violated(v):
        if exact:
            return any(x != 0 for x in np.asarray(v).reshape(-1))
        return max_abs(v) > tol * scale

    off = {k: max_abs(v) for k, v in cons.items() if violated(v)}
    cp = lambda_mu_from_bc(bc, t)
    lhs = trace_invariants(bc)
    rhs = trace_lemma_values(cp.lam, cp.mu, t, spec)
    residuals = [a - b for a, b in zip(lhs, rhs)]
    return {
        "constrained": not off,
        "constraint_violations": off,
        "residuals": residuals,
        "max_residual": max(abs(complex(r)) for r in residuals),
    }


def constrained_bc_from_flow(F, reference=None, tol=1e-10):
    """Normalize, decompose Ã_t and Ã_1, and confirm the block relations."""
    ns = normalize_gauge(F, reference=reference)
    n = F.n
    Bt, Ct = bc_decompose(ns.At, F.spec.theta_t, n)
    B1, C1 = bc_decompose(ns.A1, F.spec.theta_1, n)
    bc = BCData(Bt, Ct, B1, C1)
    kappa = tuple(ns.Ainf[i, i] for i in range(2 * n))
    spec = SpectralData(n, F.spec.theta_t, F.spec.theta_1, F.spec.theta_0, kappa,
                        check=F.exact)
    res = block_constraints(bc, spec)
    scale = 1.0 + max_abs(ns.At) + max_abs(ns.A1)
    for name, R in res.items():
        bad = (not all(x == 0 for x in R.reshape(-1))) if F.exact else max_abs(R) > tol * scale ** 2
        if bad:
            raise ArithmeticError(f"block relation {name} fails (residual {max_abs(R):.3g})")
    return bc, spec, ns


# -- Hamiltonians ---------------------------------------------------------

def k_tilde(At, A1, A0, cp):
    """tr Ã_tÃ_1/(t−1) + tr Ã_tÃ_0/t + Σμ_iλ_i/t."""
    t = cp.t
    corr = sum((m * l for m, l in zip(cp.mu, cp.lam)), 0)
    return _tr(At.dot(A1)) / (t - 1) + _tr(At.dot(A0)) / t + corr / t


def k_tilde_lemma(lam, mu, t, spec):
    """K̃ rewritten through the trace identities: a polynomial in (λ, μ)."""
    n = len(lam)
    tt, t1, t0 = spec.theta_t, spec.theta_1, spec.theta_0
    K = lambda i: spec.kappa[i - 1]
    T1, T2, T3, T4, T5 = trace_lemma_values(lam, mu, t, spec)
    s01 = tt + t1 + t0 + K(1)
    f1 = (T1 * T3 - T1 * T2 - 2 * T1 * T1 - T4 - T5
          + (3 * tt + t1 + 2 * t0 + 2 * K(1)) * T1 - (tt + t0 + K(1)) * T3 + tt * T2
          + n * tt * t1
          - Fraction(1, 2) * sum(((tt + t1 - K(i)) * (tt + t1 + K(i)) for i in range(2, n + 1)), 0)
          + Fraction(1, 2) * sum((K(n + i) ** 2 for i in range(1, n + 1)), 0)
          - Fraction(1, 2) * s01 * s01 - tt * s01)
    f0 = T1 * T2 + T1 * T1 + T4 - (tt + t0) * T1 - tt * T2 + tt * t0
    corr = sum((lam[i] * mu[i] for i in range(n)), 0)
    return f1 / (t - 1) + f0 / t + corr / t


def _hamiltonian_gap(lam, mu, t, spec, alpha, scaled=True):
    K_t = k_tilde_lemma(lam, mu, t, spec)
    H = hamiltonian_t(PhasePoint(T_CHART, lam, mu, t), alpha)
    return (t * (t - 1) * K_t if scaled else K_t) - H


def hamiltonian_gap_gradient(lam, mu, t, spec, scaled=True):
    """∇_{(λ,μ)} of t(t−1)·K̃ − H_t, K̃ in its lemma form, H_t with α(θ, κ).

    ``scaled=False`` drops the t(t−1) factor and gives ∇(K̃ − H_t), which is
    not zero: K̃ drives d/dt while H_t carries t(t−1) in its equations.
    """
    n = len(lam)
    exact = all(isinstance(v, (int, Fraction)) for v in tuple(lam) + tuple(mu) + (t,))
    size = 2 * n
    L = [Jet.variable(lam[i], i, size, exact) for i in range(n)]
    M = [Jet.variable(mu[i], n + i, size, exact) for i in range(n)]
    gap = _hamiltonian_gap(L, M, t, spec, alpha_from_spectral(spec), scaled)
    return list(gap.grad)


def k_tilde_constant(t, spec):
    """The (λ, μ)-independent value of t(t−1)·K̃ − H_t."""
    n = spec.n
    zero = [Fraction(0)] * n if spec.exact else [0.0] * n
    return _hamiltonian_gap(zero, zero, t, spec, alpha_from_spectral(spec))


# -- dynamics -------------------------------------------------------------

def schlesinger_image(trajectory):
    """(λ, μ) along a list of FuchsianSystem states, keeping the G1 ordering continuous."""
    ref = None
    out = []
    for F in trajectory:
        bc, _, ns = constrained_bc_from_flow(F, reference=ref)
        ref = ns.G1
        out.append(lambda_mu_from_bc(bc, F.t))
    return out


def flow_equivalence(F, times):
    """Compare the Schlesinger image with the direct t-chart flow of H(α(θ, κ))."""
    times = [float(x) for x in times]
    traj = schlesinger_trajectory(F, times)
    image = schlesinger_image(traj)
    alpha = alpha_from_spectral(traj[0].spec)
    y0 = image[0].as_phase_point()
    direct = sasano_flow(y0, alpha, times)
    dev = 0.0
    rows = []
    for cp, y in zip(image, direct):
        a = np.array(cp.lam + cp.mu, dtype=complex)
        b = y.as_array()
        dev = max(dev, float(np.max(np.abs(a - b))))
        rows.append((cp.t, a, b))
    return {"max_deviation": dev, "rows": rows, "alpha": alpha, "trajectory": traj}


def regular_flow_instance(n, seed, t0=0.30, t1=0.40, bound=1e3, samples=41, max_tries=50):
    """Seeded float instance whose (λ, μ) image stays below ``bound`` on [t0, t1].

    Instances whose coordinates run into a movable pole (a denominator minor
    vanishing near the window, seen as an error in either the Schlesinger image
    or the direct flow) are rejected and redrawn. The agreement between the two
    is never used as a criterion here.
    """
    from .ode import IntegrationError
    from .schlesinger import GaugeError, random_instance

    root = np.random.Generator(np.random.PCG64(seed))
    times = np.linspace(t0, t1, samples)
    for _ in range(max_tries):
        sub = int(root.integers(0, 2**63 - 1))
        rng = np.random.Generator(np.random.PCG64(sub))
        th = rng.uniform(-1, 1, 3)
        try:
            F = random_instance(SpectralData(n, *th), sub, t=t0)
            traj = schlesinger_trajectory(F, times)
            image = schlesinger_image(traj)
            sasano_flow(image[0].as_phase_point(), alpha_from_spectral(traj[0].spec), times)
        except (GaugeError, MinorVanishes, IntegrationError, ArithmeticError):
            continue
        peak = max(max(abs(complex(v)) for v in cp.lam + cp.mu) for cp in image)
        if peak < bound:
            return F
    raise RuntimeError("no regular instance found")


def random_bc(n, rng, span=9, den=5, max_tries=100):
    """Random rational BCData and time t ∉ {0, 1} with all denominator minors nonzero."""
    from .schlesinger import random_rational_matrix

    for _ in range(max_tries):
        bc = BCData(*(random_rational_matrix(rng, n, n, span, den) for _ in range(4)))
        t = Fraction(int(rng.integers(1, 20)), int(rng.integers(1, 20)) + 20)
        try:
            lambda_mu_from_bc(bc, t)
        except MinorVanishes:
            continue
        return bc, t
    raise MinorVanishes("no sample with nonzero minors")
