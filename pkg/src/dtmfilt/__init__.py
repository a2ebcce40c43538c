"""Distance-to-measure weighted filtrations and stability certificates."""

from .dtm import c_const, c_const_p, dtm, dtm_values, dtm_weights, simplex_filtration_value
from .errors import (
    DimensionMismatchError,
    DtmfiltError,
    IntegrityError,
    ParameterError,
    ParseError,
    SizeGuardError,
    SolverError,
)
from .filtration import (
    FilteredComplex,
    build_weighted_cech,
    build_weighted_rips,
    cech_simplex_value,
    dtm_filtration,
    edge_value,
    load_complex,
    power_value,
    radius,
    write_complex,
)
from .metrics import (
    StabilityReport,
    bottleneck,
    bound_p44,
    bound_p48,
    bound_t46,
    bound_t413,
    certify,
    combine_terms,
    wasserstein2,
)
from .minimax import miniball, weighted_one_center
from .numerics import INF
from .persistence import (
    PersistenceDiagram,
    betti,
    load_diagram_csv,
    reduce,
    write_diagram_csv,
)
from .pointcloud import (
    DiscreteMeasure,
    PointCloud,
    delay_embedding,
    hausdorff,
    load_points,
    pairwise_distances,
    save_points,
    synth,
)

__version__ = "0.1.0"

__all__ = [
    "DiscreteMeasure",
    "DimensionMismatchError",
    "DtmfiltError",
    "FilteredComplex",
    "INF",
    "IntegrityError",
    "ParameterError",
    "ParseError",
    "PersistenceDiagram",
    "PointCloud",
    "SizeGuardError",
    "SolverError",
    "StabilityReport",
    "betti",
    "bottleneck",
    "bound_p44",
    "bound_p48",
    "bound_t46",
    "bound_t413",
    "certify",
    "combine_terms",
    "wasserstein2",
    "build_weighted_cech",
    "build_weighted_rips",
    "c_const",
    "c_const_p",
    "cech_simplex_value",
    "delay_embedding",
    "dtm",
    "dtm_filtration",
    "dtm_values",
    "dtm_weights",
    "edge_value",
    "hausdorff",
    "load_complex",
    "load_diagram_csv",
    "load_points",
    "miniball",
    "pairwise_distances",
    "power_value",
    "radius",
    "reduce",
    "save_points",
    "simplex_filtration_value",
    "synth",
    "weighted_one_center",
    "write_complex",
    "write_diagram_csv",
]
