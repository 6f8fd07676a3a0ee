"""Acceptance criteria 1-8.

Each test prints one PASS/FAIL line for its criterion (plus indented notes) and
asserts the criterion as stated. The lines are collected in ``RESULTS`` and echoed
in pytest's terminal summary; ``python tests/test_acceptance.py`` prints them
without pytest.
"""
import os
import sys
import tempfile
import time

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))

from conftest import make_rng, rand_exact, rand_frac, spectrum_gap  # noqa: E402
from sasano_mpd.canonical import (constrained_bc_from_flow,  # noqa: E402
                                  flow_equivalence, hamiltonian_gap_gradient, k_tilde,
                                  k_tilde_lemma, lambda_mu_from_bc, p_matrix, random_bc,
                                  regular_flow_instance, verify_canonical_brackets)
from sasano_mpd.cli import main as cli_main, trial_rng  # noqa: E402
from sasano_mpd.laplace import run_chain  # noqa: E402
from sasano_mpd.laplace.sl4 import residue_eigen_report  # noqa: E402
from sasano_mpd.matkit import eye, plucker_alternating_sum  # noqa: E402
from sasano_mpd.sasano import (S_CHART, PhasePoint, PviKappas,  # noqa: E402
                               hamiltonian_s, hamiltonian_t, kappa_of_alpha, pvi_hamiltonian,
                               random_alpha, to_mpd)
from sasano_mpd.schlesinger import (SpectralData, random_instance,  # noqa: E402
                                    schlesinger_rhs, schlesinger_trajectory)

RESULTS = {}
LITERAL_DET = "det(I7 + z M7_1) = (z-s)(z-s+1)"


def record(k, title, ok, detail, notes=()):
    line = f"criterion {k} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"
    lines = [line] + [f"    note: {n}" for n in notes]
    RESULTS[k] = lines
    print("\n".join(lines))
    return ok


# -- 1 ---------------------------------------------------------------------------

def test_criterion_1_canonicity():
    start = time.perf_counter()
    exact_bad, float_max, count = 0, 0.0, 0
    for n in (1, 2, 3):
        rng = make_rng(1000 + n)
        for _ in range(50):
            bc, t = random_bc(n, rng)
            rep = verify_canonical_brackets(bc, t)
            exact_bad += len(rep["violations"])
            count += rep["count"]
            frep = verify_canonical_brackets(bc.to_float(), float(t), tol=1e-9)
            float_max = max(float_max, frep["max_deviation"])
    elapsed = time.perf_counter() - start
    ok = exact_bad == 0 and float_max <= 1e-9 and elapsed < 60
    record(1, "canonicity", ok,
           f"n=1,2,3 x 50 instances, {count} exact brackets, {exact_bad} nonzero; "
           f"float max {float_max:.2e}; {elapsed:.1f} s")
    assert ok


# -- 2, 4, 5 share the flows ----------------------------------------------------

FLOW_TIMES = np.linspace(0.30, 0.40, 11)
_flows = {}


def flows():
    if not _flows:
        for n in (1, 2):
            for seed in range(5):
                start = time.perf_counter()
                F = regular_flow_instance(n, seed)
                res = flow_equivalence(F, FLOW_TIMES)
                _flows[(n, seed)] = (res, time.perf_counter() - start)
    return _flows


def test_criterion_2_flow_equivalence():
    data = flows()
    worst = max(res["max_deviation"] for res, _ in data.values())
    slowest = max(dt for _, dt in data.values())
    per_n = {n: max(r["max_deviation"] for (m, _), (r, _) in data.items() if m == n) for n in (1, 2)}
    ok = worst <= 1e-6 and slowest < 30
    record(2, "flow equivalence", ok,
           f"n=1 max {per_n[1]:.2e}, n=2 max {per_n[2]:.2e} over 5 seeds each, "
           f"t in [0.30, 0.40]; slowest instance {slowest:.2f} s")
    assert ok


def test_criterion_3_hamiltonian_gradient():
    rng = make_rng(3000)
    literal_zero = scaled_zero = forms_agree = 0
    for k in range(100):
        n = 1 + k % 3
        spec = SpectralData(n, rand_frac(rng), rand_frac(rng), rand_frac(rng))
        F = random_instance(spec, int(rng.integers(0, 2**31)), exact=True)
        bc, sp, ns = constrained_bc_from_flow(F)
        cp = lambda_mu_from_bc(bc, F.t)
        forms_agree += k_tilde(ns.At, ns.A1, ns.A0, cp) == k_tilde_lemma(cp.lam, cp.mu, F.t, sp)
        literal_zero += all(g == 0 for g in hamiltonian_gap_gradient(cp.lam, cp.mu, F.t, sp, scaled=False))
        scaled_zero += all(g == 0 for g in hamiltonian_gap_gradient(cp.lam, cp.mu, F.t, sp))
    ok = literal_zero == 100
    record(3, "gradient of K~ - H", ok,
           f"literal grad(K~ - H) = 0 at {literal_zero}/100 exact points, n = 1..3",
           [f"grad(t(t-1) K~ - H) = 0 exactly at {scaled_zero}/100 points; K~ generates d/dt "
            f"while H enters as t(t-1) d/dt, so the literal difference has gradient "
            f"grad H (1/(t(t-1)) - 1), nonzero off critical points",
            f"trace form of K~ equals its (lambda, mu) form at {forms_agree}/100 points"])
    assert forms_agree == 100 and scaled_zero == 100
    assert ok, "literal gradient identity fails; see the note line"


def test_criterion_4_schlesinger_conservation():
    data = flows()
    ainf = eig = fuchs_float = 0.0
    for res, _ in data.values():
        traj = res["trajectory"]
        first = traj[0].residues()
        for G in traj[1:]:
            ainf = max(ainf, float(np.max(np.abs(G.A_inf - first["inf"]))))
            for key, A in G.residues().items():
                eig = max(eig, spectrum_gap(A, first[key]))
            sp = G.spec
            ev = np.linalg.eigvals(G.A_inf)
            fuchs_float = max(fuchs_float, abs(sp.n * sp.theta_t + sp.n * sp.theta_1 + sp.theta_0 + ev.sum()))
    # exact side: rational instances satisfy the relation and the flow keeps every trace fixed
    exact_ok = True
    for n in (1, 2, 3):
        rng = make_rng(4000 + n)
        F = random_instance(SpectralData(n, rand_frac(rng), rand_frac(rng), rand_frac(rng)), n,
                            exact=True)
        exact_ok &= F.spec.fuchs_residual() == 0
        exact_ok &= all(sum(X.diagonal()) == 0 for X in schlesinger_rhs(F))
    ok = ainf <= 1e-9 and eig <= 1e-8 and exact_ok
    record(4, "Schlesinger conservation", ok,
           f"A_inf drift {ainf:.2e}, residue eigenvalue drift {eig:.2e} over 10 flows; "
           f"Fuchs relation exact on rational data: {exact_ok}; float residual {fuchs_float:.1e}")
    assert ok


def test_criterion_5_pvi_degeneration():
    rng = make_rng(5000)
    literal = checked = 0
    while checked < 100:
        al = random_alpha(1, rng)
        q, p = rand_frac(rng), rand_frac(rng)
        s = rand_frac(rng)
        if s in (0, 1):
            continue
        k = kappa_of_alpha(al, 1)
        x = PhasePoint(S_CHART, [q], [p], s)
        literal += hamiltonian_s(x, al) == pvi_hamiltonian(q, p, k, al[2], s)
        y = to_mpd(x)
        kt = PviKappas(k.kappa_1, k.kappa_0, k.kappa_s, k.kappa_inf)
        literal += hamiltonian_t(y, al) == pvi_hamiltonian(y.q[0], y.p[0], kt, al[2], y.time)
        checked += 2
    dev = max(res["max_deviation"] for (n, _), (res, _) in flows().items() if n == 1)
    ok = literal == 100 and dev <= 1e-6
    record(5, "P_VI degeneration", ok,
           f"n=1 H equals H_1 exactly at {literal}/100 chart evaluations; "
           f"n=1 flow equivalence max {dev:.2e}")
    assert ok


# -- 6 ---------------------------------------------------------------------------

def chain_points(seed, count):
    rng = trial_rng(seed, 0)
    alpha = random_alpha(2, rng)
    pts = []
    while len(pts) < count:
        q1, q2, p1, p2, s = (rand_frac(rng) for _ in range(5))
        if q2 in (0, 1) or s in (0, 1):
            continue
        pts.append(PhasePoint(S_CHART, [q1, q2], [p1, p2], s))
    return alpha, pts


def test_criterion_6_laplace_chain():
    start = time.perf_counter()
    alpha, pts = chain_points(6000, 20)
    names = ["(M12_1)^2 = 0", "N12 first column zero", "N11 row 11 zero", "equals expected_M10",
             "equals expected_M8 at s5(y, alpha)", "spectral type {31,22,22,1111}"]
    tally = {k: 0 for k in names}
    literal = realized = 0
    outs = []
    for y in pts:
        out = run_chain(y, alpha)
        outs.append(out)
        merged = {}
        for stage in out["stage_checks"].values():
            merged.update(stage)
        for k in names:
            tally[k] += bool(merged.get(k))
        literal += bool(out["checks"][LITERAL_DET])
        realized += bool(out["checks"]["det(I7 + z M7_1) = ((sz-1)((s-1)z-1))^2"])
    # α-only dependence at fixed α over 10 points: exact charpolys and float eigenvalues
    reps = [residue_eigen_report(o) for o in outs[:10]]
    same_charpoly = all(r.charpolys == reps[0].charpolys for r in reps)
    drift = 0.0
    for o in outs[1:10]:
        for key, R in o["residues"].items():
            A = np.array(R.tolist(), dtype=complex)
            B = np.array(outs[0]["residues"][key].tolist(), dtype=complex)
            drift = max(drift, spectrum_gap(A, B))
    elapsed = time.perf_counter() - start
    others_ok = all(v == 20 for v in tally.values()) and same_charpoly and drift <= 1e-8 and elapsed < 120
    ok = others_ok and literal == 20
    record(6, "Laplace chain", ok,
           f"literal det(I7 + z M7_1) = (z-s)(z-s+1) at {literal}/20 points; "
           f"{elapsed:.1f} s for 20 points",
           [", ".join(f"{k}: {v}/20" for k, v in tally.items()),
            f"realized det = ((sz-1)((s-1)z-1))^2 at {realized}/20 points; a determinant "
            f"det(I + zA) has constant term 1, the literal form has s(s-1)",
            f"residue eigenvalues at fixed alpha: identical charpolys {same_charpoly}, "
            f"float drift {drift:.1e} over 10 points"])
    assert others_ok
    assert ok, "literal determinant identity fails; see the note lines"


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_plucker():
    pinv_ok = 0
    for n in (1, 2, 3, 4):
        rng = make_rng(7000 + n)
        for _ in range(50):
            bc, t = random_bc(n, rng)
            P, Pinv = p_matrix(bc, t)
            pinv_ok += not np.any(P.dot(Pinv) - eye(n, True))
    rng = make_rng(7100)
    sums = zero = 0
    while sums < 100:
        n = int(rng.integers(2, 6))
        C = rand_exact(rng, n)
        i = int(rng.integers(2, n + 1))
        j = int(rng.integers(1, i))
        zero += plucker_alternating_sum(C, i, j) == 0
        sums += 1
    ok = pinv_ok == 200 and zero == 100
    record(7, "Pluecker suite", ok,
           f"P P^-1 = I exactly for {pinv_ok}/200 instances (n = 1..4, 50 each); "
           f"alternating sum zero on {zero}/100 instances")
    assert ok


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_determinism():
    runs = {
        "check-poisson": ["check-poisson", "--n", "2", "--trials", "20", "--seed", "8"],
        "roundtrip": ["roundtrip", "--n", "2", "--seed", "8"],
        "laplace-chain": ["laplace-chain", "--points", "3", "--seed", "8"],
    }
    same = {}
    with tempfile.TemporaryDirectory() as tmp:
        for name, argv in runs.items():
            blobs = []
            for rep in range(2):
                out = os.path.join(tmp, f"{name}-{rep}")
                extra = ["--report", out + ".json"] if name == "roundtrip" else []
                cli_main(argv + ["-o", out] + extra)
                with open(out, "rb") as fh:
                    blob = fh.read()
                if extra:
                    with open(out + ".json", "rb") as fh:
                        blob += fh.read()
                blobs.append(blob)
            same[name] = blobs[0] == blobs[1] and len(blobs[0]) > 0
    ok = all(same.values())
    record(8, "determinism", ok, ", ".join(f"{k} byte-identical: {v}" for k, v in same.items()))
    assert ok


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
