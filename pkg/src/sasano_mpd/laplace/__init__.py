"""The n = 2 Laplace reduction chain from so12 down to a 4×4 Fuchsian system."""
from .chain import (LaxStage, build_M12, chain_to_so8, chain_to_so10, expected_M8, expected_M10,
                    gauge_so8, m8_coefficients, m12_coefficients)
from .loop import (ChainError, SoAlgebra, decompose, drop_zero_line, dynkin_flip, e_coefficient,
                   full_flip, full_flip_conjugation, in_orthogonal_algebra, laplace_left,
                   laplace_right, nested_ad, so_generators, word_basis)
from .sl4 import (EXPECTED_TYPES, ResidueReport, chain_to_sl4, det_identities, exponent_forms,
                  literal_det, psi, realized_det, residue_eigen_report, rho, run_chain)

__all__ = [
    "ChainError", "LaxStage", "SoAlgebra", "EXPECTED_TYPES", "ResidueReport",
    "so_generators", "nested_ad", "e_coefficient", "in_orthogonal_algebra",
    "laplace_left", "laplace_right", "drop_zero_line", "dynkin_flip", "full_flip",
    "full_flip_conjugation", "word_basis", "decompose",
    "build_M12", "m12_coefficients", "m8_coefficients", "expected_M10", "expected_M8",
    "gauge_so8", "chain_to_so10", "chain_to_so8", "chain_to_sl4",
    "det_identities", "realized_det", "literal_det", "rho", "psi", "residue_eigen_report",
    "run_chain", "exponent_forms",
]
