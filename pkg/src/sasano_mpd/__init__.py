"""Sasano D(1)_{2n+2} systems as monodromy preserving deformations of 2n×2n Fuchsian systems.

Subpackages and modules:

- ``matkit``: exact/float matrices, minors, Laurent polynomials and jets.
- ``sasano``: the Hamiltonian system in the s- and t-charts.
- ``schlesinger``: Fuchsian systems, the Schlesinger flow and the gauge normalization.
- ``canonical``: the minor-determinant coordinates (λ, μ) and their checks.
- ``laplace``: the n = 2 reduction chain so12 → sl4.
- ``cli``: the ``sasano-mpd`` command.
"""
from .canonical import (CanonicalPoint, MinorVanishes, alpha_from_spectral, flow_equivalence,
                        lambda_mu_from_bc, p_matrix, random_bc, regular_flow_instance,
                        verify_canonical_brackets)
from .sasano import (S_CHART, T_CHART, AlphaParams, PhasePoint, backlund_s5, from_mpd,
                     hamiltonian_s, hamiltonian_t, to_mpd, vfield_s, vfield_t)
from .schlesinger import BCData, FuchsianSystem, SpectralData, normalize_gauge, random_instance

__version__ = "0.1.0"

__all__ = [
    "AlphaParams", "PhasePoint", "S_CHART", "T_CHART", "hamiltonian_s", "hamiltonian_t",
    "vfield_s", "vfield_t", "to_mpd", "from_mpd", "backlund_s5",
    "SpectralData", "FuchsianSystem", "BCData", "random_instance", "normalize_gauge",
    "CanonicalPoint", "MinorVanishes", "lambda_mu_from_bc", "verify_canonical_brackets",
    "p_matrix", "alpha_from_spectral", "flow_equivalence", "random_bc", "regular_flow_instance",
]
