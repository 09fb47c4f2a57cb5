"""Exact models of the odd contact superalgebra family over GF(p),
p > 3, with verification suites for the distinguished simple quotient:
spanning families of the divergence kernel, the derived series,
simplicity, the normalizer, superderivations, and the closed-form
dimension ledger."""

from .contact_ops import bracket, d_ko, div_lam
from .formulas import comparison_rows, dim_sko
from .linalg import derived_subalgebra, divergence_kernel, span_of
from .suites import SUITE_ORDER, Workspace, run_suite, run_suites
from .superalgebra import AlgebraContext

__version__ = "0.1.0"

__all__ = [
    "AlgebraContext",
    "SUITE_ORDER",
    "Workspace",
    "bracket",
    "comparison_rows",
    "d_ko",
    "derived_subalgebra",
    "dim_sko",
    "div_lam",
    "divergence_kernel",
    "run_suite",
    "run_suites",
    "span_of",
    "__version__",
]
