from .field import (all_zero, eye, exact_array, float_array, frac, is_exact,
                    max_abs, zeros)
from .jet import Jet
from .laurent import RationalZMatrix, ZMatrix, zmat_adjugate, zmat_det, zmat_mul
from .linalg import (AmbiguousSpectrum, SingularMatrix, charpoly, commutator, det,
                     eigenvalue_clusters, inv, minor, nullspace, rank, solve,
                     spectral_type)
from .poly import Laurent, interpolate, poly_gcd, rational_roots, squarefree_factorization


def plucker_alternating_sum(C, i, j):
    """Σ_{k=j}^{i} (−1)^{k−j} Δ^{i..n}_{k,i+1..n}(C) · Δ^{j+1..n}_{j..k̂..n}(C), 1 ≤ j < i ≤ n.

    This alternating sum of products of minors vanishes identically; it is the
    cancellation behind the vanishing of {λ_i, λ_j}.
    """
    n = C.shape[0]
    if not 1 <= j < i <= n:
        raise ValueError("need 1 <= j < i <= n")
    total = 0
    for k in range(j, i + 1):
        a = minor(C, range(i, n + 1), [k] + list(range(i + 1, n + 1)))
        b = minor(C, range(j + 1, n + 1), [c for c in range(j, n + 1) if c != k])
        total = total + (-1) ** (k - j) * a * b
    return total


__all__ = [
    "AmbiguousSpectrum", "Jet", "Laurent", "RationalZMatrix", "SingularMatrix", "ZMatrix",
    "all_zero", "charpoly", "commutator", "det", "eigenvalue_clusters", "exact_array", "eye",
    "float_array", "frac", "interpolate", "inv", "is_exact", "max_abs", "minor", "nullspace",
    "plucker_alternating_sum", "poly_gcd", "rank", "rational_roots", "solve", "spectral_type",
    "squarefree_factorization", "zeros", "zmat_adjugate", "zmat_det", "zmat_mul",
]
