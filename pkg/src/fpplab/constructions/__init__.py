"""Builders for the explicit configurations, each paired with a checkable claim."""
from .claims import Claim
from .corridor import CorridorSpec, build_corridor, build_multi_corridor, corridor_p2, multi_corridor_p2, ray_bound, verify_corridor
from .detour import DetourReport, detour_witness_check, spike_distance
from .lambda_target import LambdaSpec, Split, build_lambda_config, solve_split, target_ratio, verify_lambda
from .negative import build_negative_config, negative_claim, negative_length
from .shape_config import ShapeClaim, build_shape_config, verify_shape_config
from .uniqueness import build_isolated_point_config, monotone_path_count, refine_to_unique_geodesic, refinement_window
