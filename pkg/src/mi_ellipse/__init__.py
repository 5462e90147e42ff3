"""Maximal-intersection, John and Loewner ellipses of centrally symmetric planar bodies."""
from .body import (
    ConvexBody,
    apply_unimodular,
    body_area,
    body_from_implicit,
    body_from_json,
    body_from_polygon,
    body_from_radial,
    builtin_body,
    linear_image,
    load_body,
    perturb_general_position,
    radial,
    random_unimodular,
)
from .conic import CenteredEllipse, ellipse_radial, normalize_to_disk, standard_ellipse, unit_disk
from .extremal import ExtremalResult, john_ellipse, loewner_ellipse
from .intersect import CrossingSet, find_crossings, intersection_area, intersection_profile, symdiff_distance
from .position import check_mi_position, converse_counterexample_check, isotropic_weights
from .solver import MIResult, displaced_center_check, mi_ellipse, mi_family, quasiconcavity_probe
from .variation import deriv1, deriv2, deriv2_lower_bound, f_gap, g_form, key_certificate, residual_D

__version__ = "0.1.0"
