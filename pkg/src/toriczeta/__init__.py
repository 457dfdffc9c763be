"""Exact Todd series of 2D cones, generalized Dedekind sums and real quadratic zeta values."""

from .contfrac import convergents, ncf_eval, ncf_expand, periodic_fixed_point
from .dedekind import classical_dedekind, dedekind_direct, dedekind_via_todd
from .exactmath import BiSeries, bernoulli_number, lambda_coeff
from .quadfield import BSeq, build
from .toddseries import todd_cf, todd_cyclotomic, todd_ppd, todd_series
from .zetavalues import zeta_field, zeta_general, zeta_zero

__version__ = "0.1.0"

__all__ = [
    "BSeq",
    "BiSeries",
    "bernoulli_number",
    "build",
    "classical_dedekind",
    "convergents",
    "dedekind_direct",
    "dedekind_via_todd",
    "lambda_coeff",
    "ncf_eval",
    "ncf_expand",
    "periodic_fixed_point",
    "todd_cf",
    "todd_cyclotomic",
    "todd_ppd",
    "todd_series",
    "zeta_field",
    "zeta_general",
    "zeta_zero",
]
