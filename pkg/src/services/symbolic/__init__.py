"""Exact multivariate polynomial arithmetic, resultants and the theorem eliminations."""

from src.services.symbolic.multipoly import (
    MultiPoly,
    VarSet,
    content_and_primitive,
    eval_mod_p,
    exact_div,
    poly_arith,
    rewrite_all,
    substitute_rewrite,
)
from src.services.symbolic.resultant import pseudo_rem, resultant

__all__ = [
    "MultiPoly",
    "VarSet",
    "content_and_primitive",
    "eval_mod_p",
    "exact_div",
    "poly_arith",
    "pseudo_rem",
    "resultant",
    "rewrite_all",
    "substitute_rewrite",
]
