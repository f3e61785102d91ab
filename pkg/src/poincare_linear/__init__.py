"""Linear classification in the Poincare ball: perceptrons, SVMs, hull-based
reference points and the tools to benchmark them."""

from .dataset import LabeledDataset, check_margin_assumption
from .geometry import (
    DomainError,
    Hyperplane,
    conformal_factor,
    dist_to_hyperplane,
    dist_to_hyperplane_tangent,
    distance,
    eta_weight,
    exp_map,
    geodesic_point,
    hyperplane_side,
    log_map,
    mobius_add,
    mobius_scalar_mul,
)

__version__ = "0.1.0"
