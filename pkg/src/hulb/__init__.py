"""Universal lower bounds and refinements for the energy of codes in Hamming spaces."""
from .bounds import lev, rao, solve_s, tau_for
from .errors import DomainError, NumericFailure
from .polyengine import SpaceParams
from .quadrature import QuadratureRule, rule
from .refine import higher_degree_bound, pair_covering, scan_test_functions, test_function
from .ulb import BoundReport, Potential, hermite_certificate, ulb

__all__ = [
    "BoundReport", "DomainError", "NumericFailure", "Potential", "QuadratureRule",
    "SpaceParams", "hermite_certificate", "higher_degree_bound", "lev", "pair_covering",
    "rao", "rule", "scan_test_functions", "solve_s", "tau_for", "test_function", "ulb",
]
