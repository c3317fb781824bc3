"""Systoles, length spectra and distance bounds on hyperbolic surfaces."""
from .distance_bounds import (
    diam_lower_s3,
    diam_upper_s1,
    dist_large_lower,
    dist_s1_mid,
    dist_small_total,
    filling_lower_bound,
    thm_hole_bound,
    twist_distance_bound,
)
from .holonomy import enumerate_geodesics, representation, systole_bruteforce
from .pants_graph import build_joined_tree, build_tree_for_genus, surface_from_tree
from .reports import BoundReport
from .surface_models import ChainSpec, RotFamilySpec, TreeSpec, solve_c1, solve_c2_t2
from .wp_bounds import WpConstants, eliminate_sys, inj_profile, stated_wp_threshold

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ChainSpec",
    "RotFamilySpec",
    "TreeSpec",
    "WpConstants",
    "build_joined_tree",
    "build_tree_for_genus",
    "diam_lower_s3",
    "diam_upper_s1",
    "dist_large_lower",
    "dist_s1_mid",
    "dist_small_total",
    "eliminate_sys",
    "enumerate_geodesics",
    "filling_lower_bound",
    "inj_profile",
    "representation",
    "solve_c1",
    "solve_c2_t2",
    "stated_wp_threshold",
    "surface_from_tree",
    "systole_bruteforce",
    "thm_hole_bound",
    "twist_distance_bound",
]
