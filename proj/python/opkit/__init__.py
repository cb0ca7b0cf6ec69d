"""Operads, Koszul duality and graded Hopf algebras over Q and F_p."""

from ._core import (
    AxiomError,
    ValidationError,
    builtin_operads,
    check_operad,
    compose,
    double_dual,
    envelope_dims,
    koszul_dual,
    milnor_moore,
    norm_is_iso,
    operad_dims,
    primitive_dims,
    truncation_tower,
    witt_number,
)

__all__ = [
    "AxiomError",
    "ValidationError",
    "builtin_operads",
    "check_operad",
    "compose",
    "double_dual",
    "envelope_dims",
    "koszul_dual",
    "milnor_moore",
    "norm_is_iso",
    "operad_dims",
    "primitive_dims",
    "truncation_tower",
    "witt_number",
]
