"""Configuration spaces of disks and segments in the unit disk: cohomology
pairings, explicit families, balanced configurations and trapping."""

from .forests import CohomClass, OrderedForest, enumerate_forests, kernel_ladder_n4
from .pairing import (PairingMatrix, Permutation, dual_basis_matrix, dual_expansion, pair_expansion,
                      pairing_forest_qn, pairing_hhat)
from .degree import ResolutionError, numeric_degree_oracle, qn_family
from .geometry import DiskConfig, SegConfig, build_hhat, build_kn, build_qn, ell, pack_disks, tau, seg_tau
from .balance import check_config, contact_graph, is_balanced, search_balanced
from .segments import hourglass_params, max_perpendicular_length, midpoint_box_sets, trap_certify

__version__ = "0.1.0"
