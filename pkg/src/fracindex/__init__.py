"""Exact characteristic-number index formulas and a half-line Toeplitz index lab."""

from .catalog import ManifoldModel, cobordism_record, cp, hypersurface, load_manifold, point, product
from .exact_algebra import CohClass, RingModel, as_rational, exp_class, format_rational, integrate, ring_mul
from .genera import CharData, GenusSeries, chern_character, genus_class, genus_series, pontryagin_from_chern
from .index_engine import IndexReport, TwistSpec, dirac_index, dolbeault_index, fractionality_report, spinc_index

__version__ = "0.1.0"

__all__ = [
    "CharData", "CohClass", "GenusSeries", "IndexReport", "ManifoldModel", "RingModel", "TwistSpec",
    "as_rational", "chern_character", "cobordism_record", "cp", "dirac_index", "dolbeault_index",
    "exp_class", "format_rational", "fractionality_report", "genus_class", "genus_series", "hypersurface",
    "integrate", "load_manifold", "point", "pontryagin_from_chern", "product", "ring_mul", "spinc_index",
]
