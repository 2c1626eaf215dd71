"""PPT entangled state family: construction, detection criteria, and scans.

Everything lives in the compiled core; this package just re-exports it.
"""

from ._core import (
    __version__,
    check_ppt,
    check_realignment,
    hermitian_eigenvalues,
    min_eigenvalue,
    normalization,
    partial_transpose,
    ppt_check,
    product_vector,
    realign,
    realignment_check,
    run_dps,
    run_dps_state,
    scan,
    singular_values,
    state,
    structure_report,
    trace_norm,
    witness,
)

__all__ = [
    "__version__",
    "check_ppt",
    "check_realignment",
    "hermitian_eigenvalues",
    "min_eigenvalue",
    "normalization",
    "partial_transpose",
    "ppt_check",
    "product_vector",
    "realign",
    "realignment_check",
    "run_dps",
    "run_dps_state",
    "scan",
    "singular_values",
    "state",
    "structure_report",
    "trace_norm",
    "witness",
]
