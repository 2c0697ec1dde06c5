"""Service layer: divergences, information, subadditivity checks, bounds and exponents."""

from .bounds import Direction, blocklength_lower, fano_lower, ht_bound_check, kl_comparison
from .divergence import f_div, gf_div, renyi_div
from .exponent import efsp, exponent_curve, mu_x
from .information import igf_info, max_igf_over_input
from .membership import (
    check_inv_gprime_concave,
    check_T,
    check_Tminus,
    check_Tplus,
    count_stationary_roots,
)
from .oracle import classical_sp_oracle
from .subadditivity import binary_gap_scan, div_gap, equivalence_curve

__all__: list[str] = [
    "Direction",
    "binary_gap_scan",
    "blocklength_lower",
    "check_T",
    "check_Tminus",
    "check_Tplus",
    "check_inv_gprime_concave",
    "classical_sp_oracle",
    "count_stationary_roots",
    "div_gap",
    "efsp",
    "equivalence_curve",
    "exponent_curve",
    "f_div",
    "fano_lower",
    "gf_div",
    "ht_bound_check",
    "igf_info",
    "kl_comparison",
    "max_igf_over_input",
    "mu_x",
    "renyi_div",
]
