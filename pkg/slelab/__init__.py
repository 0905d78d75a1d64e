"""slelab: discrete Loewner evolution, SLE traces and their topological observables"""

from .loewner import (
    slit_forward,
    slit_inverse,
    chain_forward,
    chain_pullback,
    half_plane_capacity,
    concat,
    build_chain,
    capacity_coefficient,
)
from .driving import (
    sample_sle_driving,
    sample_sle_rho_driving,
    detect_continuation_threshold,
    refine_driving,
    rescale_driving,
)
from .trace import compute_trace, polyline_trace
from .bubbles import (
    extract_bubbles,
    indicator_sequence,
    k_r_n,
    diameter,
    window_identity_statistic,
)
from .crossings import (
    crossing_times,
    select_excursion,
    marked_points,
    crossing_counts,
    harmonic_measure_from_infinity,
    outer_boundary_measure,
    shift_matches,
)
from .hitting import beffara_F, mc_hitting, recursion_lower_bound, recursion_bound_sequence
from .config_ingest import parse_config_file, parse_config_dict, serialize_config
from .ensemble import Ensemble, run_ensemble
from .verify import cmd_verify
