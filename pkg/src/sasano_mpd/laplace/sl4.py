"""so8 → 7×7 → 6×6 → sl4, and the residues of the resulting Fuchsian system.

The so6 ≅ sl4 identification goes through Λ²C⁴ with the ordered basis
(e₁∧e₂, e₁∧e₃, e₁∧e₄, e₂∧e₃, −e₂∧e₄, e₃∧e₄); in that basis the wedge pairing
is the anti-diagonal form, so ρ(sl4) ⊂ so6 for the same J used everywhere else.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..matkit import eye, frac, zeros
from ..matkit.laurent import RationalZMatrix, ZMatrix, zmat_adjugate, zmat_det
from ..matkit.linalg import charpoly, inv, spectral_type
from ..matkit.poly import Laurent, rational_roots
from .chain import LaxStage, _check, _scalar_part
from .loop import ChainError, anti_diagonal, drop_zero_line, laplace_left, split_linear

PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
SIGNS = (1, 1, 1, 1, -1, 1)
EXPECTED_TYPES = {"0": (3, 1), "t": (2, 2), "1": (2, 2), "inf": (1, 1, 1, 1)}
B4_SHAPE = "B_4(x) = -M_{4,t}/(x - t) + B_{4,inf}"


def rho(A):
    """The action of A ∈ gl4 on Λ²C⁴, in the signed basis above."""
    A = np.asarray(A)
    R = zeros((6, 6), exact=True)
    for c, (i, j) in enumerate(PAIRS):
        image = {}
        for k in range(4):
            for u, v, coef in ((k, j, A[k, i]), (i, k, A[k, j])):
                if u == v or coef == 0:
                    continue
                key, sg = ((u, v), 1) if u < v else ((v, u), -1)
                image[key] = image.get(key, 0) + sg * coef
        for key, val in image.items():
            r = PAIRS.index(key)
            R[r, c] += val * SIGNS[c] * SIGNS[r]
    return R


@lru_cache(maxsize=None)
def _sl4_basis():
    B = []
    for i in range(4):
        for j in range(4):
            if i != j:
                m = zeros((4, 4), exact=True)
                m[i, j] = Fraction(1)
                B.append(m)
    for i in range(3):
        m = zeros((4, 4), exact=True)
        m[i, i], m[i + 1, i + 1] = Fraction(1), Fraction(-1)
        B.append(m)
    images = [rho(m).reshape(-1) for m in B]
    # 15 independent coordinates of the 36 suffice for a square solve
    cols = np.array(images, dtype=object).T
    rows = []
    from .loop import _IncrementalBasis
    chosen = _IncrementalBasis()
    for r in range(36):
        vec = {c: cols[r, c] for c in range(15) if cols[r, c] != 0}
        if vec and chosen.add(vec):
            rows.append(r)
    return tuple(B), tuple(rows), inv(cols[rows, :])


def psi(X):
    """ρ⁻¹ on so6; raises if X is not in the image."""
    B, rows, solver = _sl4_basis()
    X = np.asarray(X)
    coef = solver.dot(X.reshape(-1)[list(rows)])
    out = zeros((4, 4), exact=True)
    for c, m in zip(coef, B):
        out = out + c * m
    if np.any(rho(out) - X):
        raise ChainError("matrix is not in so6")
    return out


# -- the two reductions below so8 -----------------------------------------

def _poly(coeffs):
    return Laurent({k: frac(c) for k, c in enumerate(coeffs)})


def realized_det(s):
    """((sz − 1)((s − 1)z − 1))², the determinant the chain actually produces."""
    f = _poly([-1, s]) * _poly([-1, s - 1])
    return f * f


def literal_det(s):
    """(z − s)(z − s + 1)."""
    return _poly([-s, 1]) * _poly([-s + 1, 1])


def det_identities(M7):
    """det(I_7 + z·M_{7,1}) compared with the realized and the literal forms."""
    s = M7.meta["point"].time
    _, A1 = split_linear(M7.M)
    D = zmat_det(ZMatrix({0: eye(7, True), 1: A1}, 7, True))
    return {"det": D, "realized": D == realized_det(s), "literal": D == literal_det(s)}


def laplace_right_inverse(M, c):
    """(M0 + cI)(I + zM1)⁻¹ as a RationalZMatrix (here M1² ≠ 0)."""
    M0, M1 = split_linear(M)
    n = M.dim
    adj, D = zmat_adjugate(ZMatrix({0: eye(n, True), 1: M1}, n, True))
    return RationalZMatrix(ZMatrix.constant(M0 + c * eye(n, True)) @ adj, D)


def _reciprocal_in_x(p, d, s):
    """z^{-d}-scaled p at z = 1/(s·x): Σ c_k z^k ↦ Σ c_k s^{d−k} x^{d−k}."""
    return Laurent({d - k: c * s ** (d - k) for k, c in p.terms.items()})


def chain_to_sl4(stage):
    """so8 → sl4 residues at x = t, 1, 0 (and ∞).

    Returns a dict with the three residues, the residue at infinity, the
    intermediate stages and the checkpoint results. The literal determinant
    form is recorded but not required (see ``det_identities``).
    """
    if stage.label != "so8":
        raise ValueError("chain_to_sl4 expects the so8 stage")
    y = stage.point
    s = y.time
    if s == 0 or s == 1:
        raise ChainError("s must avoid 0 and 1")
    checks = {}
    M8 = stage.M
    A0, _ = split_linear(M8)
    _check(checks, "M8_0 first column clean", all(A0[i, 0] == 0 for i in range(1, 8)))
    M7 = LaxStage("mat7", drop_zero_line(laplace_left(M8, A0[0, 0]), "column", 0), stage.meta)
    dets = det_identities(M7)
    _check(checks, "det(I7 + z M7_1) = ((sz-1)((s-1)z-1))^2", dets["realized"], repr(dets["det"]))
    checks["det(I7 + z M7_1) = (z-s)(z-s+1)"] = dets["literal"]

    B0, _ = split_linear(M7.M)
    N7 = laplace_right_inverse(M7.M, -B0[6, 6])
    _check(checks, "N7 row 7 zero", N7.row_is_zero(6))
    M6 = N7.drop(6).reduce()
    root = _poly([-1, s]) * _poly([-1, s - 1])
    _check(checks, "M6 denominator", M6.den == root.monic(), repr(M6.den))
    _check(checks, "M6 numerator degree <= 2", (M6.num.degree or 0) <= 2 and (M6.num.low or 0) >= 0)
    tr = M6.num.trace()
    M6p = M6.subtract_scalar_poly(tr / 6)
    J6 = anti_diagonal(6)
    _check(checks, "M6 numerator in so6",
           all(not np.any(J6.dot(C) + C.T.dot(J6)) for C in M6p.num.coeffs.values()))
    mat6 = LaxStage("mat6", M6p, stage.meta)

    # x = 1/(s z):  M4(x) = −ψ(M6'(1/(sx)))/x = −Ñ(x)/(x·D̃(x))
    Q = _reciprocal_in_x(M6p.den, 2, s).shift(1)
    Ncoef = {2 - k: psi(C) * s ** (2 - k) for k, C in M6p.num.coeffs.items()}
    t = 1 - 1 / s
    dQ = Q.derivative()
    residues = {}
    for name, x0 in (("t", t), ("1", Fraction(1)), ("0", Fraction(0))):
        if Q(x0) != 0:
            raise ChainError(f"x = {x0} is not a pole")
        val = sum((C * x0 ** k for k, C in Ncoef.items()), zeros((4, 4), exact=True))
        residues[name] = -val / dQ(x0)
    residues["inf"] = -(residues["t"] + residues["1"] + residues["0"])
    # exact partial-fraction check: −Ñ(x) = Σ R_a · Q(x)/(x − a)
    recon = {}
    for name, x0 in (("t", t), ("1", Fraction(1)), ("0", Fraction(0))):
        cof, rem = divmod(Q, Laurent({1: Fraction(1), 0: -x0}))
        for k, c in cof.terms.items():
            recon[k] = recon.get(k, zeros((4, 4), exact=True)) + residues[name] * c
    keys = set(recon) | set(Ncoef)
    _check(checks, "partial fractions exact",
           all(not np.any(recon.get(k, zeros((4, 4), exact=True))
                          + Ncoef.get(k, zeros((4, 4), exact=True))) for k in keys))
    _check(checks, "residues traceless", all(sum(R.diagonal()) == 0 for R in residues.values()))
    types = {k: spectral_type(R) for k, R in residues.items()}
    _check(checks, "spectral type {31,22,22,1111}", types == EXPECTED_TYPES, repr(types))
    return {
        "t": t,
        "residues": residues,
        "spectral_types": types,
        "det": dets["det"],
        "stages": {"mat7": M7, "mat6": mat6},
        "checks": checks,
        "B4_shape": B4_SHAPE,
    }


def residue_exponents(R):
    """Eigenvalues with multiplicity (exact when rational), sorted."""
    roots, leftover = rational_roots(charpoly(R))
    if leftover:
        return None
    return sorted(roots)


@dataclass(frozen=True)
class ResidueReport:
    exponents: dict          # name -> sorted exact eigenvalues
    charpolys: dict          # name -> characteristic polynomial
    fuchs_sum: Fraction      # Σ over all points of the eigenvalue sums
    spectral_types: dict


def residue_eigen_report(result):
    ex, cps = {}, {}
    for name, R in result["residues"].items():
        cps[name] = charpoly(R)
        ex[name] = residue_exponents(R)
    total = sum((sum(R.diagonal()) for R in result["residues"].values()), Fraction(0))
    return ResidueReport(ex, cps, total, dict(result["spectral_types"]))


def run_chain(y, alpha):
    """build_M12 → so10 → so8 → sl4 at one exact point."""
    from .chain import build_M12, chain_to_so8, chain_to_so10

    stage = build_M12(y, alpha)
    done = {}
    for name, step in (("chain_to_so10", chain_to_so10), ("chain_to_so8", chain_to_so8),
                       ("chain_to_sl4", chain_to_sl4)):
        try:
            stage = step(stage)
        except ChainError as err:
            err.stage = name
            raise
        done[name] = stage
    s10, s8, out = done["chain_to_so10"], done["chain_to_so8"], done["chain_to_sl4"]
    out["stage_checks"] = {"so10": s10.checks, "so8": s8.checks, "sl4": out["checks"]}
    return out


def exponent_forms(y, alpha, delta=Fraction(1, 1000)):
    """Residue eigenvalues as affine functions of the free parameters α_1..α_6.

    α_0 is eliminated through the normalization. Each coordinate is nudged by
    ``delta``; since the eigenvalues are affine in α the difference quotients are
    exact, and each eigenvalue is matched to its unique nearby partner.
    Returns {point: [(constant, (c_1..c_6), multiplicity), ...]} or None when an
    eigenvalue is irrational.
    """
    from ..sasano import AlphaParams

    free = list(alpha.alpha[1:])
    base = residue_eigen_report(run_chain(y, alpha)).exponents
    if any(v is None for v in base.values()):
        return None
    shifted = []
    for j in range(6):
        f = list(free)
        f[j] += delta
        shifted.append(residue_eigen_report(run_chain(y, AlphaParams.from_free(2, f))).exponents)
    forms = {}
    for name, evs in base.items():
        rows = []
        for val, mult in evs:
            coeffs = []
            for j in range(6):
                near = [v for v, m in shifted[j][name]
                        if m == mult and abs(v - val) <= 10 * delta]
                if len(near) != 1:
                    raise ChainError(f"cannot match eigenvalue {val} at {name} along α_{j + 1}")
                coeffs.append((near[0] - val) / delta)
            const = val - sum(c * a for c, a in zip(coeffs, free))
            rows.append((const, tuple(coeffs), mult))
        forms[name] = rows
    return forms
