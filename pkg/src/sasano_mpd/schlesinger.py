"""Fuchsian systems with spectral type {(n,n),(n,n),(2n−1,1),(1^{2n})}, their
Schlesinger deformation, the gauge normalization and the JMMS B/C coordinates."""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels, ode
from .matkit import (all_zero, commutator, exact_array, eye, inv, is_exact, max_abs,
                     nullspace, solve, zeros)
from .matkit.jet import Jet


class GaugeError(ArithmeticError):
    """Input sits on a non-generic stratum for the normalization."""


class DecompositionError(ArithmeticError):
    pass


def _sort_key(k):
    c = complex(k)
    return (c.real, c.imag)


@dataclass(frozen=True)
class SpectralData:
    """θ_t, θ_1, θ_0 and κ_1..κ_{2n}. ``kappa`` may be None for a θ-only request."""

    n: int
    theta_t: object
    theta_1: object
    theta_0: object
    kappa: tuple = None
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.kappa is None:
            return
        object.__setattr__(self, "kappa", tuple(self.kappa))
        if len(self.kappa) != 2 * self.n:
            raise ValueError(f"expected {2 * self.n} values of κ")
        if not self.check:
            return
        r = self.fuchs_residual()
        if self.exact:
            if r != 0:
                raise ValueError(f"Fuchs relation violated by {r}")
        elif abs(r) > 1e-9 * (1 + sum(abs(complex(k)) for k in self.kappa)):
            raise ValueError(f"Fuchs relation violated by {r}")
        ks = [complex(k) for k in self.kappa]
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                if (self.kappa[i] == self.kappa[j]) if self.exact else abs(ks[i] - ks[j]) < 1e-12:
                    raise ValueError("κ values must be pairwise distinct")

    @property
    def exact(self):
        vals = (self.theta_t, self.theta_1, self.theta_0) + tuple(self.kappa or ())
        return all(isinstance(v, (int, Fraction)) for v in vals)

    def fuchs_residual(self):
        n = self.n
        return n * self.theta_t + n * self.theta_1 + self.theta_0 + sum(self.kappa)


@dataclass(frozen=True, eq=False)
class FuchsianSystem:
    A_t: np.ndarray
    A_1: np.ndarray
    A_0: np.ndarray
    t: object
    spec: SpectralData

    @property
    def n(self):
        return self.spec.n

    @property
    def exact(self):
        return is_exact(self.A_t)

    @property
    def A_inf(self):
        return -(self.A_t + self.A_1 + self.A_0)

    def residues(self):
        return {"t": self.A_t, "1": self.A_1, "0": self.A_0, "inf": self.A_inf}

    def to_float(self):
        f = lambda A: np.array(A.tolist(), dtype=complex)
        sp = self.spec
        cs = lambda v: complex(v)
        spec = SpectralData(sp.n, cs(sp.theta_t), cs(sp.theta_1), cs(sp.theta_0),
                            tuple(cs(k) for k in sp.kappa))
        return FuchsianSystem(f(self.A_t), f(self.A_1), f(self.A_0), float(self.t), spec)

    def conjugate(self, G, Ginv=None):
        """G⁻¹ A G for every residue."""
        if Ginv is None:
            Ginv = inv(G)
        c = lambda A: Ginv.dot(A).dot(G)
        return FuchsianSystem(c(self.A_t), c(self.A_1), c(self.A_0), self.t, self.spec)

    def flat(self):
        return np.concatenate([np.asarray(A, dtype=complex).reshape(-1)
                               for A in (self.A_t, self.A_1, self.A_0)])


@dataclass(frozen=True, eq=False)
class BCData:
    B_t: np.ndarray
    C_t: np.ndarray
    B_1: np.ndarray
    C_1: np.ndarray

    @property
    def n(self):
        return self.C_t.shape[0]

    @property
    def exact(self):
        return is_exact(self.C_t)

    def blocks(self):
        return (self.B_t, self.C_t, self.B_1, self.C_1)

    def to_float(self):
        return BCData(*(np.array(M.tolist(), dtype=complex) for M in self.blocks()))


# -- construction ---------------------------------------------------------

def recompose(B, C, theta):
    """[I; B]·[θI − CB, C]."""
    n = C.shape[0]
    I = eye(n, is_exact(C))
    left = np.vstack([I, B])
    right = np.hstack([theta * I - C.dot(B), C])
    return left.dot(right)


def _rand_rational(rng, shape, span=9, den=5):
    num = rng.integers(-span, span + 1, size=shape)
    dens = rng.integers(1, den + 1, size=shape)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = Fraction(int(num[idx]), int(dens[idx]))
    return out


def random_rational_matrix(rng, rows, cols=None, span=9, den=5):
    return _rand_rational(rng, (rows, cols if cols is not None else rows), span, den)


def normalized_instance(n, theta_t, theta_1, theta_0, rng, t, exact=True, max_tries=100):
    """A Fuchsian system already in normalized shape, with κ read off the construction.

    Two JMMS residues Ã_t, Ã_1 are drawn at random and conjugated by
    G = [w, (S−m_2)⁻¹w, …, (S−m_{2n})⁻¹w], S = Ã_t + Ã_1. In that basis
    −(Ã_t + Ã_1) − diag(κ) is supported on the first row and column, so Ã_0 and
    Ã_∞ come out with the required shapes and κ_j = −m_j for j ≥ 2.
    """
    m = 2 * n
    for _ in range(max_tries):
        if exact:
            draw = lambda r, c=None: random_rational_matrix(rng, r, c)
        else:
            draw = lambda r, c=None: rng.uniform(-1, 1, (r, c if c is not None else r)).astype(complex)
        At = recompose(draw(n), draw(n), theta_t)
        A1 = recompose(draw(n), draw(n), theta_1)
        S = At + A1
        w = draw(m, 1)
        if exact:
            shifts = random_rational_matrix(rng, 1, m - 1)[0]
        else:
            shifts = rng.uniform(-2, 2, m - 1)
        if len(set(complex(x) for x in shifts)) < m - 1:
            continue
        try:
            cols = [w] + [solve(S - mm * eye(m, exact), w) for mm in shifts]
            G = np.hstack(cols)
            Gi = inv(G)
        except (ArithmeticError, np.linalg.LinAlgError):
            continue
        if not exact and np.linalg.cond(G) > 1e6:
            continue
        Tt, T1 = Gi.dot(At).dot(G), Gi.dot(A1).dot(G)
        Q = -(Tt + T1)
        kappa = [Q[0, 0] - theta_0] + [-mm for mm in shifts]
        if len(set(complex(k) for k in kappa)) < m:
            continue
        Tinf = zeros((m, m), exact)
        for i in range(m):
            Tinf[i, i] = kappa[i]
        Tinf[1:, 0] = Q[1:, 0]
        T0 = Q - Tinf
        spec = SpectralData(n, theta_t, theta_1, theta_0, tuple(kappa))
        return FuchsianSystem(Tt, T1, T0, t, spec)
    raise GaugeError("could not draw a generic normalized instance")


def random_instance(spec, seed, t=Fraction(7, 20), exact=False, max_tries=200):
    """Random Fuchsian system with the θ's of ``spec``; κ is computed, not prescribed.

    Float mode follows the textbook construction A_ξ = U diag(θ_ξ I_n, 0) U⁻¹,
    A_0 = u vᵀ with vᵀu = θ_0. In exact mode the eigenvalues of a random A_∞ would be
    irrational, so a normalized rational instance is drawn instead and hidden behind a
    random rational change of basis.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n, m = spec.n, 2 * spec.n
    if exact:
        F = normalized_instance(n, spec.theta_t, spec.theta_1, spec.theta_0, rng, t, exact=True)
        while True:
            H = random_rational_matrix(rng, m)
            try:
                Hi = inv(H)
                break
            except ArithmeticError:
                continue
        Fh = F.conjugate(Hi, H)
        kappa = tuple(sorted(F.spec.kappa, key=_sort_key))
        return FuchsianSystem(Fh.A_t, Fh.A_1, Fh.A_0, t, SpectralData(n, spec.theta_t, spec.theta_1,
                                                                      spec.theta_0, kappa))
    th = [complex(spec.theta_t), complex(spec.theta_1), complex(spec.theta_0)]

    def conditioned():
        while True:
            U = rng.uniform(-1, 1, (m, m))
            if np.linalg.cond(U) <= 1e4:
                return U

    for _ in range(max_tries):
        res = []
        for theta in th[:2]:
            U = conditioned()
            D = np.diag([theta] * n + [0] * n)
            res.append(U.dot(D).dot(np.linalg.inv(U)))
        u = rng.uniform(-1, 1, m)
        v = rng.uniform(-1, 1, m)
        vu = v.dot(u)
        if abs(vu) < 0.1:
            continue
        A0 = np.outer(u, v * (th[2] / vu)).astype(complex)
        Ainf = -(res[0] + res[1] + A0)
        kap = np.linalg.eigvals(Ainf)
        gaps = [abs(a - b) for i, a in enumerate(kap) for b in kap[i + 1:]]
        if min(gaps) < 1e-3:
            continue
        kappa = tuple(sorted((complex(k) for k in kap), key=_sort_key))
        sp = SpectralData(n, th[0], th[1], th[2], kappa)
        return FuchsianSystem(res[0], res[1], A0, float(t), sp)
    raise GaugeError("degenerate samples only; raise max_tries")


# -- flow -----------------------------------------------------------------

def schlesinger_rhs(F):
    """(dA_t/dt, dA_1/dt, dA_0/dt) of the Schlesinger system."""
    t = F.t
    if t == 0 or t == 1:
        raise ValueError(f"t = {t} is a fixed singularity")
    c_t0 = commutator(F.A_t, F.A_0)
    c_t1 = commutator(F.A_t, F.A_1)
    return (-c_t0 / t - c_t1 / (t - 1), c_t1 / (t - 1), c_t0 / t)


def schlesinger_trajectory(F, times, rtol=ode.RTOL, atol=ode.ATOL):
    """FuchsianSystem states at each of ``times`` (float)."""
    Ff = F.to_float() if F.exact else F
    m = 2 * F.n
    mm = m * m
    ys = ode.integrate(_kernels.SCHLESINGER, float(np.real(Ff.t)), Ff.flat(), times,
                       np.zeros(1, dtype=complex), m, rtol, atol)
    out = []
    for t, y in zip(times, ys):
        out.append(FuchsianSystem(y[:mm].reshape(m, m), y[mm:2 * mm].reshape(m, m),
                                  y[2 * mm:].reshape(m, m), float(t), Ff.spec))
    return out


def integrate_schlesinger(F, t_end, rtol=ode.RTOL, atol=ode.ATOL):
    if t_end == F.t:
        return F
    return schlesinger_trajectory(F, [float(t_end)], rtol, atol)[-1]


def hamiltonian_K(F):
    """tr A_tA_1/(t−1) + tr A_tA_0/t."""
    t = F.t
    tr = lambda X, Y: sum(X.dot(Y).diagonal())
    return tr(F.A_t, F.A_1) / (t - 1) + tr(F.A_t, F.A_0) / t


# -- gauge ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormalizedSystem:
    At: np.ndarray
    A1: np.ndarray
    A0: np.ndarray
    Ainf: np.ndarray
    G: np.ndarray
    G1: np.ndarray
    kappa: tuple


def _eigvecs_exact(Ainf, kappa):
    m = Ainf.shape[0]
    cols = []
    for k in kappa:
        ns = nullspace(Ainf - k * eye(m, True))
        if ns.shape[1] != 1:
            raise GaugeError(f"eigenvalue {k} has geometric multiplicity {ns.shape[1]}")
        cols.append(ns)
    return np.hstack(cols)


def _eigvecs_float(Ainf, kappa, reference=None):
    vals, vecs = np.linalg.eig(np.asarray(Ainf, dtype=complex))
    m = len(vals)
    if reference is not None:
        # continuity: greedy maximal-overlap matching with the previous eigenbasis
        ref = reference / np.linalg.norm(reference, axis=0)
        cur = vecs / np.linalg.norm(vecs, axis=0)
        overlap = np.abs(ref.conj().T.dot(cur))
        order = [-1] * m
        used = set()
        for flat in np.argsort(-overlap, axis=None):
            i, j = divmod(int(flat), m)
            if order[i] < 0 and j not in used:
                order[i] = j
                used.add(j)
        return vecs[:, order]
    order = []
    for k in kappa:
        d = np.abs(vals - complex(k))
        d[order] = np.inf
        order.append(int(np.argmin(d)))
    return vecs[:, order]


def normalize_gauge(F, reference=None, tol=1e-12):
    """G = G1·G2 bringing (A_0, A_∞) to first-row / diagonal-plus-first-column shape.

    G1 diagonalizes A_∞ with eigenvalues in the order of ``F.spec.kappa``; when
    ``reference`` (a previous G1) is given, columns are matched by overlap instead.
    """
    exact = F.exact
    Ainf = F.A_inf
    m = Ainf.shape[0]
    if exact:
        G1 = _eigvecs_exact(Ainf, F.spec.kappa)
    else:
        G1 = _eigvecs_float(Ainf, F.spec.kappa, reference)
    A0 = F.A_0
    if exact:
        j = next((j for j in range(m) if any(x != 0 for x in A0[:, j])), None)
        if j is None:
            raise GaugeError("A_0 vanishes")
    else:
        j = int(np.argmax(np.linalg.norm(A0, axis=0)))
    u = A0[:, j].reshape(m, 1)
    w = solve(G1, u).reshape(-1)
    scale = max_abs(w)
    if (w[0] == 0) if exact else abs(w[0]) <= tol * scale:
        raise GaugeError("G1⁻¹u has zero first coordinate; reorder κ")
    g = w / w[0]
    g[0] = g[0] - 1
    G2 = eye(m, exact)
    G2[:, 0] = G2[:, 0] + g
    G = G1.dot(G2)
    Gi = inv(G)
    c = lambda A: Gi.dot(A).dot(G)
    At, A1, A0t = c(F.A_t), c(F.A_1), c(A0)
    kappa = tuple(F.spec.kappa) if reference is None or exact else tuple(np.diag(Gi.dot(Ainf).dot(G)))
    return NormalizedSystem(At, A1, A0t, -(At + A1 + A0t), G, G1, kappa)


def bc_decompose(A, theta, n=None, tol=1e-10):
    """(B, C) with A = [I; B]·[θI − CB, C]; B from the full top-row block."""
    m = A.shape[0]
    n = m // 2 if n is None else n
    top, bot = A[:n], A[n:]
    C = top[:, n:].copy()
    if is_exact(A):
        gram = top.dot(top.T)
        try:
            B = bot.dot(top.T).dot(inv(gram))
        except ArithmeticError as exc:
            raise DecompositionError("top rows do not span the row space") from exc
        if not all_zero(B.dot(top) - bot):
            raise DecompositionError("bottom rows are not in the span of the top rows")
        if not all_zero(top[:, :n] - (theta * eye(n, True) - C.dot(B))):
            raise DecompositionError("top-left block differs from θI − CB")
        return B, C
    sol, _, rk, _ = np.linalg.lstsq(top.T, bot.T, rcond=None)
    if rk < n:
        raise DecompositionError("top rows do not span the row space")
    B = sol.T
    scale = 1.0 + max_abs(A)
    if max_abs(B.dot(top) - bot) > tol * scale * (1 + max_abs(B)):
        raise DecompositionError("bottom rows are not in the span of the top rows")
    return B, C


# -- Poisson structure ----------------------------------------------------

BLOCKS = ("B_t", "C_t", "B_1", "C_1")


def var_index(block, i, j, n):
    """Position of entry (i, j) (0-based) of a block in the flat jet layout."""
    return BLOCKS.index(block) * n * n + i * n + j


def jet_size(n):
    return 4 * n * n


def poisson_bracket_bc(f, g, at):
    """{f, g} = Σ_{ξ,i,j} (∂f/∂c_{ji} ∂g/∂b_{ij} − ∂f/∂b_{ij} ∂g/∂c_{ji}).

    ``f`` and ``g`` are Jets over the (B_t, C_t, B_1, C_1) layout, or callables
    returning such Jets when given ``at``.
    """
    n = at.n
    fj = f(at) if callable(f) else f
    gj = g(at) if callable(g) else g
    gf, gg_ = fj.grad, gj.grad
    total = 0
    for b_blk, c_blk in (("B_t", "C_t"), ("B_1", "C_1")):
        ob, oc = BLOCKS.index(b_blk) * n * n, BLOCKS.index(c_blk) * n * n
        fb = gf[ob:ob + n * n].reshape(n, n)
        fc = gf[oc:oc + n * n].reshape(n, n)
        gb = gg_[ob:ob + n * n].reshape(n, n)
        gc = gg_[oc:oc + n * n].reshape(n, n)
        total = total + (fc.T * gb).sum() - (fb * gc.T).sum()
    return total


def poisson_bracket_fd(f, g, at, h=1e-6):
    """Central-difference bracket for arbitrary scalar callables of BCData (float)."""
    base = at.to_float() if at.exact else at
    n = base.n

    def grad(fun):
        out = np.zeros(jet_size(n), dtype=complex)
        for b, blk in enumerate(base.blocks()):
            for i in range(n):
                for j in range(n):
                    plus = [M.copy() for M in base.blocks()]
                    minus = [M.copy() for M in base.blocks()]
                    plus[b][i, j] += h
                    minus[b][i, j] -= h
                    out[b * n * n + i * n + j] = (fun(BCData(*plus)) - fun(BCData(*minus))) / (2 * h)
        return out

    return poisson_bracket_bc(Jet(f(base), grad(f)), Jet(g(base), grad(g)), base)


def bc_entry_jet(at, block, i, j):
    """The coordinate function b_{ij} or c_{ij} of a block, as a Jet."""
    n = at.n
    M = dict(zip(BLOCKS, at.blocks()))[block]
    return Jet.variable(M[i, j], var_index(block, i, j, n), jet_size(n), at.exact)
