"""Moments of symmetric power lifts of Hecke eigenforms.

Submodules: ``combinat`` (Kostka numbers), ``eigenform`` (Δ and CSV series),
``sympow`` (symmetric power eigenvalues and local factors), ``quadform``
(binary quadratic forms), ``moments`` (exponents and partial sums), ``cli``.
"""
from .combinat import kostka_closed_form, tensor_power_multiplicities
from .eigenform import delta_coefficients, load_coefficients
from .moments import fit_main_term, main_term_degree, moment_sum, theta, theta_bqf
from .quadform import QuadForm, class_group
from .sympow import sym_series

__all__ = [
    "QuadForm", "class_group", "delta_coefficients", "fit_main_term", "kostka_closed_form",
    "load_coefficients", "main_term_degree", "moment_sum", "sym_series", "tensor_power_multiplicities",
    "theta", "theta_bqf",
]
__version__ = "0.1.0"
