"""Quantumness of orthonormal bases of spin-j states."""
from .spin import (
    Basis,
    NonUnitaryError,
    SpinError,
    SpinState,
    StarConstellation,
    coherent_state,
    make_spin_state,
    stars_from_state,
    state_from_stars,
)
from .measures import (
    anticoherence,
    basis_quantumness,
    cue_average_estimate,
    haar_average_exact,
    quantumness_report,
    reduced_purity,
)
from .phase_space import QuadratureSpec, husimi, husimi_max, wehrl_entropy
from .rotations import EulerAngles, rotate_basis, rotate_state, wigner_d
from .optimizer import SearchConfig, certify_extremum, multi_start_search, random_walk_search
from .catalog import catalog_get, catalog_names, catalog_verify
from .fileio import FileFormatError, read_basis_file, write_basis_file

__version__ = "0.1.0"
