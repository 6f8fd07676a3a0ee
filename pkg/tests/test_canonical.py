from fractions import Fraction

import numpy as np
import pytest
import sympy

from conftest import make_rng, rand_frac
from sasano_mpd.canonical import (MinorVanishes, alpha_from_spectral, beta_params,
                                  constrained_bc_from_flow, flow_equivalence,
                                  hamiltonian_gap_gradient, k_tilde, k_tilde_constant,
                                  k_tilde_lemma, lambda_mu_from_bc, p_matrix, random_bc,
                                  regular_flow_instance, trace_identities_check,
                                  trace_invariants, verify_canonical_brackets, _hamiltonian_gap)
from sasano_mpd.matkit import exact_array, eye
from sasano_mpd.schlesinger import (BCData, FuchsianSystem, SpectralData, hamiltonian_K,
                                    random_instance)

F = Fraction


def n1_bc(bt, ct, b1, c1):
    m = lambda v: exact_array([[v]])
    return BCData(m(bt), m(ct), m(b1), m(c1))


# -- the coordinate map -------------------------------------------------------

def test_n1_example():
    cp = lambda_mu_from_bc(n1_bc(F(4), F(3), F(-1), F(6)), F(2))
    assert cp.mu == (12,) and cp.lam == (-1,)


def test_lambda_ignores_B(rng):
    bc, t = random_bc(3, rng)
    other = BCData(bc.B_t * 3 + 1, bc.C_t, bc.B_1 - 2, bc.C_1)
    assert lambda_mu_from_bc(bc, t).lam == lambda_mu_from_bc(other, t).lam


def sympy_coordinates(bc, t):
    """λ, μ from sympy determinants of explicit submatrices."""
    n = bc.n
    S = lambda M: sympy.Matrix(n, n, [sympy.Rational(x.numerator, x.denominator) for x in M.reshape(-1)])
    Ct, C1, Bt = S(bc.C_t), S(bc.C_1), S(bc.B_t)
    t = sympy.Rational(t.numerator, t.denominator)

    def d(M, rows, cols):
        if not rows:
            return sympy.Integer(1)
        return M.extract([r - 1 for r in rows], [c - 1 for c in cols]).det()

    lam, mu = [], []
    for i in range(1, n + 1):
        tail = list(range(i + 1, n + 1))
        lead = d(C1, [1] + tail, [i] + tail)
        acc = sum(d(Ct, [i] + tail, [k] + tail) / d(Ct, [i] + tail, [i] + tail) * Bt[k - 1, 0]
                  for k in range(1, i + 1))
        mu.append((-1) ** (n - i) / t * lead / d(Ct, tail, tail) * acc)
        lam.append(-(-1) ** (n - i) * t * d(Ct, [1] + tail, [i] + tail) / lead)
    return lam, mu


@pytest.mark.parametrize("n", [2, 3])
def test_coordinates_match_sympy_minors(n):
    rng = make_rng(n)
    for _ in range(5):
        bc, t = random_bc(n, rng)
        cp = lambda_mu_from_bc(bc, t)
        lam, mu = sympy_coordinates(bc, t)
        assert list(cp.lam) == lam and list(cp.mu) == mu
        scaled = lambda_mu_from_bc(BCData(bc.B_t, bc.C_t, bc.B_1, 2 * bc.C_1), t)
        lam2, mu2 = sympy_coordinates(BCData(bc.B_t, bc.C_t, bc.B_1, 2 * bc.C_1), t)
        assert list(scaled.lam) == lam2 and list(scaled.mu) == mu2


def test_vanishing_minor_is_named():
    bc = n1_bc(F(1), F(1), F(1), F(0))
    with pytest.raises(MinorVanishes, match="C_1"):
        lambda_mu_from_bc(bc, F(1, 3))


# -- brackets ----------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_brackets_exact(n):
    rng = make_rng(10 + n)
    for _ in range(10):
        bc, t = random_bc(n, rng)
        rep = verify_canonical_brackets(bc, t)
        assert rep["violations"] == [] and rep["count"] == n * n + n * (n - 1)


def test_brackets_n1_closed_form():
    # {μ, λ} with μ = c1 b/t, λ = −t c/c1: only the b–c pairs contribute
    bc = n1_bc(F(2, 3), F(-5, 2), F(7), F(3, 4))
    assert verify_canonical_brackets(bc, F(1, 5))["max_deviation"] == 0


def test_brackets_float_n3():
    rng = make_rng(99)
    for _ in range(5):
        bc, t = random_bc(3, rng)
        rep = verify_canonical_brackets(bc.to_float(), float(t), tol=1e-9)
        assert rep["violations"] == []


# -- P matrix ------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_p_matrix_inverse(n):
    rng = make_rng(20 + n)
    for _ in range(5):
        bc, t = random_bc(n, rng)
        P, Pinv = p_matrix(bc, t)
        assert not np.any(P.dot(Pinv) - eye(n, True))
        assert all(P[i, j] == 0 for i in range(n) for j in range(i + 1, n))
        cp = lambda_mu_from_bc(bc, t)
        assert list(P.dot(bc.B_t[:, 0])) == list(cp.mu)
        # the row vector is the first row of C_t, the partner of b^{(t)}_{·,1} in tr E_1 C_t B_t
        assert list(-bc.C_t[0, :].dot(Pinv)) == list(cp.lam)


def test_p_matrix_n1():
    P, Pinv = p_matrix(n1_bc(F(1), F(2), F(0), F(6)), F(3))
    assert P[0, 0] == 2 and Pinv[0, 0] == F(1, 2)


# -- parameters ------------------------------------------------------------------

def test_alpha_from_zero_spectrum():
    for n in (1, 2, 3):
        al = alpha_from_spectral(SpectralData(n, 0, 0, 0, (0,) * (2 * n), check=False))
        assert al.alpha == (0,) * (2 * n + 2) + (1,)


def test_alpha_normalized_and_beta(rng):
    for n in (1, 2, 3):
        kap = [rand_frac(rng) for _ in range(2 * n)]
        tt, t1 = rand_frac(rng), rand_frac(rng)
        t0 = -(n * tt + n * t1 + sum(kap))
        spec = SpectralData(n, tt, t1, t0, kap, check=False)
        al = alpha_from_spectral(spec)
        assert al.normalization_sum() == 1
        assert beta_params(spec) == tuple(al[2 * i] for i in range(1, n + 1))


# -- block relations and trace lemma -----------------------------------------------

def exact_system(n, seed):
    rng = make_rng(seed)
    spec = SpectralData(n, rand_frac(rng), rand_frac(rng), rand_frac(rng))
    return random_instance(spec, seed, exact=True)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trace_lemma_exact(n):
    Fs = exact_system(n, 50 + n)
    bc, spec, _ = constrained_bc_from_flow(Fs)
    rep = trace_identities_check(bc, Fs.t, spec)
    assert rep["constrained"] and all(r == 0 for r in rep["residuals"])
    cp = lambda_mu_from_bc(bc, Fs.t)
    T1, T2 = trace_invariants(bc)[:2]
    assert T1 + sum(l * m for l, m in zip(cp.lam, cp.mu)) == 0
    assert T2 - Fs.t * sum(cp.mu) == 0


def test_trace_lemma_flags_unconstrained(rng):
    bc, t = random_bc(2, rng)
    spec = SpectralData(2, F(1), F(2), F(3), (F(1), F(2), F(3), F(4)), check=False)
    assert not trace_identities_check(bc, t, spec)["constrained"]


def test_trace_invariants_zero_data():
    z = exact_array(np.zeros((2, 2), dtype=int))
    assert trace_invariants(BCData(z, z, z, z)) == (0, 0, 0, 0, 0)


def test_block_relations_float():
    Ff = random_instance(SpectralData(2, 0.3, -0.2, 0.45), 9)
    bc, spec, ns = constrained_bc_from_flow(Ff)
    CB = bc.C_t.dot(bc.B_t) + bc.C_1.dot(bc.B_1)
    assert abs(CB[0, 0] - (spec.theta_t + spec.theta_1 + spec.theta_0 + spec.kappa[0])) < 1e-10
    assert np.max(np.abs((bc.C_t + bc.C_1)[1:])) < 1e-10
    BC = bc.B_t.dot(bc.C_t) + bc.B_1.dot(bc.C_1)
    assert np.max(np.abs(BC + np.diag(spec.kappa[2:]))) < 1e-10


# -- Hamiltonians -----------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_k_tilde_trace_form_matches_lemma_form(n):
    Fs = exact_system(n, 60 + n)
    bc, spec, ns = constrained_bc_from_flow(Fs)
    cp = lambda_mu_from_bc(bc, Fs.t)
    assert k_tilde(ns.At, ns.A1, ns.A0, cp) == k_tilde_lemma(cp.lam, cp.mu, Fs.t, spec)


def test_k_tilde_without_correction_is_K():
    Fs = exact_system(2, 70)
    bc, spec, ns = constrained_bc_from_flow(Fs)
    cp = lambda_mu_from_bc(bc, Fs.t)
    zero = type(cp)((F(0),) * 2, (F(0),) * 2, cp.t)
    normalized = FuchsianSystem(ns.At, ns.A1, ns.A0, Fs.t, spec)
    assert k_tilde(ns.At, ns.A1, ns.A0, zero) == hamiltonian_K(normalized)


def random_spec(n, rng):
    kap = [rand_frac(rng) for _ in range(2 * n)]
    tt, t1 = rand_frac(rng), rand_frac(rng)
    return SpectralData(n, tt, t1, -(n * tt + n * t1 + sum(kap)), kap, check=False)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gradient_gap_scaled_is_zero(n):
    rng = make_rng(80 + n)
    for _ in range(5):
        spec = random_spec(n, rng)
        lam = [rand_frac(rng) for _ in range(n)]
        mu = [rand_frac(rng) for _ in range(n)]
        t = F(int(rng.integers(1, 9)), 10)
        assert all(g == 0 for g in hamiltonian_gap_gradient(lam, mu, t, spec))
        assert any(g != 0 for g in hamiltonian_gap_gradient(lam, mu, t, spec, scaled=False))


def test_gap_constant_on_fibre():
    rng = make_rng(5)
    spec = random_spec(2, rng)
    t = F(3, 10)
    c = k_tilde_constant(t, spec)
    al = alpha_from_spectral(spec)
    for _ in range(10):
        lam = [rand_frac(rng) for _ in range(2)]
        mu = [rand_frac(rng) for _ in range(2)]
        assert _hamiltonian_gap(lam, mu, t, spec, al) == c


# -- dynamics ------------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_flow_equivalence(n):
    Fs = regular_flow_instance(n, seed=n)
    res = flow_equivalence(Fs, np.linspace(0.30, 0.40, 11))
    assert res["max_deviation"] <= 1e-6
