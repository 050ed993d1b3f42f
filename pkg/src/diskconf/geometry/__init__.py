from .configs import (DEFAULT_TOL, DiskConfig, SegConfig, angle_of, config_from_json, rotate,
                      seg_tau, segment_distance, segments_valid_batch, tau, tau_batch, unit)
from .constructions import (PACKING_CONSTANT, bound_calculators, build_hhat, build_kn, build_kn_batch,
                            build_matching_family, build_qn, build_qn_batch, d_exact, d_sequence, d_value,
                            ell, ell_exact, embed_scaled, half_inclusion, hhat_family, matching_angles,
                            matching_hosts, partition_inclusion, qn_angles)
from .packing import PackedLayout, pack_disks, smallest_enclosing_circle
