"""Simulation and verification of the limit law of the largest interpoint
distance for point clouds in ellipse-like planar regions."""

from .errors import (
    CapUndefinedError,
    DegenerateCloudError,
    InvalidNAParameters,
    MaxDistError,
    RegionError,
    SamplerStalledError,
    ShapeConstantError,
    StatisticUndefinedError,
    TruncationMismatchError,
    UndefinedAngleError,
)
from .experiment import ExperimentConfig, ExperimentResult, run_experiment
from .geometry import (
    FoldedAngle,
    Point,
    PolarPoint,
    convex_hull,
    diameter_bruteforce,
    diameter_calipers,
    fold_to_pole,
    pole_distance_expansion,
)
from .limit_dist import (
    LimitSample,
    NormAngleSample,
    limit_value,
    s_cross,
    sample_limit,
    sample_norm_angle,
)
from .region import (
    QuadrantConstants,
    RegionSpec,
    cap_angle,
    cap_area,
    constants,
    custom_region,
    ellipse_region,
    quarter_ellipse_region,
    validate,
)
from .rng import SeedSpec
from .sampling import (
    Cloud,
    quadrant_split_diagnostic,
    sample_cloud,
    sample_point,
    sample_points,
    scaled_deficiency,
)
from .stats import EmpiricalCDF, ecdf, evaluate, ks_distance, quantile

__version__ = "0.1.0"
