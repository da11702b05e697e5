"""Exact computations for the lamplighter Lie algebra: Chevalley-Eilenberg
homology of its truncations, the weight-strata injectivity lemmas behind its
large homology, and the finite-stage Malcev correspondence with the
lamplighter group."""

from .ce import (
    Chain, ChainMonomial, ce_differential, chain_basis, differential_matrix,
    homology_dim, homology_representatives, homology_table,
)
from .lie import (
    EMatrix, FinLieAlgebra, LampLabel, bracket, build_E_model, build_lamplighter_truncation,
    phi_check, verify_jacobi,
)
from .linalg import QMatrix, QVector, Rat, in_image, kernel_basis, mat_rank
from .malcev import (
    GroupWord, StrictTriangular, Unitriangular, bch, group_closure_probe, mat_exp, mat_log,
    psi_eval,
)
from .strata import (
    check_lemma, d_stratum, enumerate_stratum, rho_d, shift_phi, shift_psi, verify_square,
    witness_not_boundary,
)

__version__ = "0.1.0"
