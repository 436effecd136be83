"""Representations of integers as a prime plus a squarefree number.

Exact counting of the log-weighted representation functions under
coprimality and divisibility constraints, explicit analytic lower bounds
with certified directed rounding, and the exception-set / triple-witness
scan machinery, with a CLI front end (``primesqf --help``).
"""

from . import analytic, arith, counting, search, sieve
from .analytic import (
    BoundParams,
    CThetaTable,
    Enclosure,
    Rounding,
    artin_constant,
    chen_factor_bound,
    even_lower_bound,
    load_ctheta,
    odd_lower_bound,
    zeta_ratio,
)
from .counting import R, R_bar_k, R_k, Representation, WeightedCount, theta_ap
from .search import (
    Certificate,
    ExceptionReport,
    Parity,
    TripleWitness,
    exception_set,
    find_triple,
    largest_exception_certificate,
    verify_range,
)
from .sieve import SegmentBitmap, sieve_mobius, sieve_primes, sieve_squarefree

__version__ = "0.1.0"

__all__ = [
    "analytic",
    "arith",
    "counting",
    "search",
    "sieve",
    "BoundParams",
    "CThetaTable",
    "Enclosure",
    "Rounding",
    "artin_constant",
    "chen_factor_bound",
    "even_lower_bound",
    "load_ctheta",
    "odd_lower_bound",
    "zeta_ratio",
    "R",
    "R_bar_k",
    "R_k",
    "Representation",
    "WeightedCount",
    "theta_ap",
    "Certificate",
    "ExceptionReport",
    "Parity",
    "TripleWitness",
    "exception_set",
    "find_triple",
    "largest_exception_certificate",
    "verify_range",
    "SegmentBitmap",
    "sieve_mobius",
    "sieve_primes",
    "sieve_squarefree",
    "__version__",
]
