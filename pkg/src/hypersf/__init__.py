"""Surface area and volume of a one-sheet hyperboloid cap, and the special
functions behind its closed form: Gamma ratios, pFq series, Mellin-Barnes
integrals, Meijer G-functions and multivariable hypergeometric series."""

__version__ = "0.1.0"

from .errors import (
    ContourError,
    ConvergenceError,
    DomainError,
    HypersfError,
    OutOfRegionError,
    PoleError,
    PrecisionWarning,
)
from .geometry import (
    AreaResult,
    GeometryParams,
    area_region_check,
    lambda_of,
    surface_area,
    surface_area_closed,
    surface_area_triple_sum,
    volume,
    volume_decomposition,
)
from .hyp_series import PFQParams, SeriesValue, continued_2f1, gauss_sum_at_unity, hyp2f1, pfq_series

__all__ = [
    "__version__",
    "AreaResult",
    "ContourError",
    "ConvergenceError",
    "DomainError",
    "GeometryParams",
    "HypersfError",
    "OutOfRegionError",
    "PFQParams",
    "PoleError",
    "PrecisionWarning",
    "SeriesValue",
    "area_region_check",
    "continued_2f1",
    "gauss_sum_at_unity",
    "hyp2f1",
    "lambda_of",
    "pfq_series",
    "surface_area",
    "surface_area_closed",
    "surface_area_triple_sum",
    "volume",
    "volume_decomposition",
]
