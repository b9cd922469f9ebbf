"""Dimension toolkit for solenoidal attractors.

Builds the symbolic model of a skew-product solenoid, solves the pressure
equation for the predicted slice dimension, estimates box-counting
dimensions of slice and attractor clouds, and measures transversality
margins between components — so the theory can be cross-checked against
direct numerics from one package.
"""

__version__ = "0.1.0"

from .boxdim import (
    DimFit,
    ScaleSeries,
    attractor_dimension,
    box_count,
    default_scales,
    dim_fit,
    scale_series,
    slice_dimension,
)
from .errors import (
    BudgetError,
    DomainError,
    InvalidInputError,
    InvalidSpecError,
    InvalidWindowError,
    ShapeError,
    SolenoidDimError,
    SpecParseError,
)
from .graphs import (
    GraphPatch,
    PointCloud,
    attractor_cloud,
    graph_patch,
    graph_rho_derivative,
    graph_value,
    slice_cloud,
    write_cloud_csv,
)
from .linalg import operator_norm, singular_values, smallest_singular_value
from .model import (
    HypothesisReport,
    RateBounds,
    SolenoidSpec,
    apply,
    base_map,
    check_hypotheses,
    rate_bounds,
)
from .specfile import load_spec, parse_spec, serialize_spec, spec_hash
from .symbolic import (
    CylinderSet,
    cylinder_point,
    cylinder_set,
    enumerate_words,
    inverse_branch,
    word_index,
)
from .thermo import (
    BowenResult,
    PressureCurve,
    birkhoff_sum,
    bowen_root,
    diam_proxy,
    finite_m_exponent,
    pressure_approx,
)
from .transversality import (
    OverlapCandidate,
    TransversalityReport,
    margin_at,
    overlap_scan,
)
from .trig import TrigPolynomial, constant, trig_poly, zero
