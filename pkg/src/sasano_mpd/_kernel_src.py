"""Kernel definitions shared by both builds.

This file is not imported. ``_kernels`` executes it twice into separate
namespaces, once with ``jit`` bound to the identity and ``COMPILED = False``,
once with numba's cached ``njit``. Keeping the functions at module level in a
real file is what lets numba cache the compiled build on disk.
"""
import numpy as np

SCHLESINGER = 0
SASANO = 1

# Dormand–Prince tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)


@jit
def _matmul_loops(A, B):
    m = A.shape[0]
    out = np.zeros((m, m), dtype=np.complex128)
    for i in range(m):
        for k in range(m):
            a = A[i, k]
            if a != 0:
                for j in range(m):
                    out[i, j] += a * B[k, j]
    return out


matmul = _matmul_loops if COMPILED else np.matmul


@jit
def schlesinger_rhs(t, y, par, m):
    mm = m * m
    At = y[:mm].reshape((m, m))
    A1 = y[mm:2 * mm].reshape((m, m))
    A0 = y[2 * mm:].reshape((m, m))
    c_t0 = matmul(At, A0) - matmul(A0, At)
    c_t1 = matmul(At, A1) - matmul(A1, At)
    out = np.empty(3 * mm, dtype=np.complex128)
    out[:mm] = (-c_t0 / t - c_t1 / (t - 1.0)).reshape(mm)
    out[mm:2 * mm] = (c_t1 / (t - 1.0)).reshape(mm)
    out[2 * mm:] = (c_t0 / t).reshape(mm)
    return out


@jit
def sasano_rhs(t, y, par, chart):
    # par holds, per i, the P_VI slot values (a, b, c, d) and e = α_{2i}
    n = y.size // 2
    q = y[:n]
    p = y[n:]
    U = np.empty(n, dtype=np.complex128)
    V = np.empty(n, dtype=np.complex128)
    for k in range(n):
        e = par[5 * k + 4]
        if chart == 0:
            U[k] = (q[k] - t) * p[k]
            V[k] = q[k] * ((q[k] - 1.0) * p[k] + e)
        else:
            U[k] = q[k] * p[k]
            V[k] = (q[k] - 1.0) * ((q[k] - t) * p[k] + e)
    out = np.empty(2 * n, dtype=np.complex128)
    tail = 0.0 + 0.0j
    for k in range(n):
        tail += V[k]
    head = 0.0 + 0.0j
    den = t * (t - 1.0)
    for k in range(n):
        tail -= V[k]
        qk = q[k]
        pk = p[k]
        a = par[5 * k]
        b = par[5 * k + 1]
        c = par[5 * k + 2]
        d = par[5 * k + 3]
        e = par[5 * k + 4]
        dHdp = (2.0 * qk * (qk - 1.0) * (qk - t) * pk - (a - 1.0) * qk * (qk - 1.0)
                - b * qk * (qk - t) - c * (qk - 1.0) * (qk - t))
        dHdq = ((3.0 * qk * qk - 2.0 * (1.0 + t) * qk + t) * pk * pk
                - (a - 1.0) * (2.0 * qk - 1.0) * pk - b * (2.0 * qk - t) * pk
                - c * (2.0 * qk - 1.0 - t) * pk + e * (e + d))
        if chart == 0:
            dHdp += 2.0 * (qk - t) * tail + 2.0 * head * qk * (qk - 1.0)
            dHdq += 2.0 * pk * tail + 2.0 * head * ((2.0 * qk - 1.0) * pk + e)
        else:
            dHdp += 2.0 * qk * tail + 2.0 * head * (qk - 1.0) * (qk - t)
            dHdq += 2.0 * pk * tail + 2.0 * head * ((2.0 * qk - 1.0 - t) * pk + e)
        head += U[k]
        out[k] = dHdp / den
        out[n + k] = -dHdq / den
    return out


@jit
def rhs(system, t, y, par, aux):
    if system == SCHLESINGER:
        return schlesinger_rhs(t, y, par, aux)
    return sasano_rhs(t, y, par, aux)


@jit
def dopri5(system, t0, y0, t_out, par, aux, rtol, atol, max_steps):
    """Integrate from t0 through the monotone output times ``t_out``.

    Steps are clipped to land exactly on each output time (no dense output).
    Returns (ys, status, t_last, y_last, n_steps); status 0 = ok,
    1 = step-size underflow, 2 = step budget exhausted.
    """
    dim = y0.size
    nout = t_out.size
    ys = np.zeros((nout, dim), dtype=np.complex128)
    y = y0.copy()
    t = t0
    status = 0
    nsteps = 0
    if nout == 0:
        return ys, status, t, y, nsteps
    t_final = t_out[nout - 1]
    direction = 1.0 if t_final >= t0 else -1.0
    span = abs(t_final - t0)
    h = 0.01 * span if span > 0 else 0.0
    if h > 1e-3:
        h = 1e-3
    k1 = rhs(system, t, y, par, aux)
    idx = 0
    while idx < nout and (t_out[idx] - t) * direction <= 0.0:
        ys[idx, :] = y
        idx += 1
    while idx < nout:
        target = t_out[idx]
        remaining = abs(target - t)
        if h >= remaining:
            h_try = remaining
            land = True
        else:
            h_try = h
            land = False
        if h_try < 1e-14 * max(1.0, abs(t)):
            status = 1
            break
        if nsteps >= max_steps:
            status = 2
            break
        hs = direction * h_try
        k2 = rhs(system, t + C2 * hs, y + hs * (A21 * k1), par, aux)
        k3 = rhs(system, t + C3 * hs, y + hs * (A31 * k1 + A32 * k2), par, aux)
        k4 = rhs(system, t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3), par, aux)
        k5 = rhs(system, t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
                 par, aux)
        k6 = rhs(system, t + hs, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
                 par, aux)
        y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
        t_new = target if land else t + hs
        k7 = rhs(system, t_new, y_new, par, aux)
        err_vec = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
        acc = 0.0
        for i in range(dim):
            sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            r = abs(err_vec[i]) / sc
            acc += r * r
        err = np.sqrt(acc / dim)
        nsteps += 1
        if err <= 1.0:
            t = t_new
            y = y_new
            k1 = k7
            if land:
                ys[idx, :] = y
                idx += 1
                while idx < nout and t_out[idx] == t:
                    ys[idx, :] = y
                    idx += 1
            fac = 10.0 if err == 0.0 else min(10.0, max(0.2, 0.9 * err ** -0.2))
            if land:
                fac = max(fac, 1.0)
            h = h_try * fac
        else:
            h = h_try * max(0.2, 0.9 * err ** -0.2)
    return ys, status, t, y, nsteps
