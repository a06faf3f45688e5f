"""fsx: symmetrizations, products and pointwise multipliers of function spaces.

Step functions carry the numerics exactly; a rewrite engine handles the
symbolic side; ``fsx.verify`` checks one against the other.
"""
from .stepfn import StepFunction, indicator, rearrange, rank_function
from .space_algebra import classify, simplify
from .syntax import parse, print_expr
from .norms import norm

__all__ = [
    "StepFunction",
    "indicator",
    "rearrange",
    "rank_function",
    "parse",
    "print_expr",
    "simplify",
    "classify",
    "norm",
]
__version__ = "0.1.0"
