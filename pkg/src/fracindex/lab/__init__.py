"""Half-line operator laboratory for the trace-commutator index."""

from ._kernels import BACKEND
from .experiments import (
    AdditivityResult,
    AdjointResult,
    GradedOperator,
    HomotopyResult,
    LinearPath,
    McKeanSingerResult,
    adjoint_index_check,
    composition_additivity_check,
    doubled_index,
    homotopy_sweep,
    mckean_singer_check,
    rotation_symbol,
)
from .gaussian import GaussianRational, parse_complex_rational
from .operators import (
    Certificate,
    HalfLineOperator,
    Parametrix,
    TraceIndex,
    certify,
    max_window,
    parametrix,
    symbol_index,
    toeplitz_compress,
    trace_commutator_index,
    winding_number,
)
from .symbols import LoopSymbol, parse_symbol, symbol_from_doc, symbol_to_doc

__all__ = [
    "BACKEND", "AdditivityResult", "AdjointResult", "Certificate", "GaussianRational", "GradedOperator",
    "HalfLineOperator", "HomotopyResult", "LinearPath", "LoopSymbol", "McKeanSingerResult", "Parametrix",
    "TraceIndex", "adjoint_index_check", "certify", "composition_additivity_check", "doubled_index",
    "homotopy_sweep", "max_window", "mckean_singer_check", "parametrix", "parse_complex_rational",
    "parse_symbol", "rotation_symbol", "symbol_from_doc", "symbol_index", "symbol_to_doc",
    "toeplitz_compress", "trace_commutator_index", "winding_number",
]
