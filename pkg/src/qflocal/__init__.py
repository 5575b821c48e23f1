"""Local theory of regular quadratic lattices, made executable."""
from .arith import hilbert, is_square, legendre, sc_set, square_class, vp
from .invariants import INFINITE, escalation_data, eta, h_set, is_type_A, nu_profile, rescaled_sublattice, s_eta_contains
from .jordan import hasse, is_isotropic, jordan_decompose, rational_diagonalize
from .kernels import BACKEND
from .lattice import (
    GramLattice,
    diagonal,
    enumerate_values,
    index_p_sublattices,
    make_lattice,
    ortho_sum,
    rescale,
    sublattice,
    vectors_with_value,
)
from .localrep import genus_represents, local_classes, represents_local, value_residues
from .regular import lemma_suites, newness_scan, q_structure_check, regularity_scan

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "INFINITE", "GramLattice", "diagonal", "enumerate_values", "escalation_data", "eta",
    "genus_represents", "h_set", "hasse", "hilbert", "index_p_sublattices", "is_isotropic", "is_square",
    "is_type_A", "jordan_decompose", "legendre", "lemma_suites", "local_classes", "make_lattice",
    "newness_scan", "nu_profile", "ortho_sum", "q_structure_check", "rational_diagonalize",
    "regularity_scan", "represents_local", "rescale", "rescaled_sublattice", "s_eta_contains",
    "sc_set", "square_class", "sublattice", "value_residues", "vectors_with_value", "vp",
]
