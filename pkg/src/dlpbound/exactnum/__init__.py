"""Exact number types for certified verification: rigorous rational
intervals, the real cyclotomic field Q(cos(2*pi/m)), surd extensions of
it, and rational surd sums for reporting bounds."""

from .intervals import RInterval, cos_enclosure, sqrt_enclosure
from .minpoly import cyclotomic_poly, cos2pi_minpoly
from .cyclo import CycloReal, IndeterminateSignError, precision_schedule, DEFAULT_MAX_BITS
from .values import (
    BoundValue,
    SurdPair,
    bound_decimal,
    parse_bound_expr,
    sign,
    square_split,
)

__all__ = [
    "RInterval",
    "cos_enclosure",
    "sqrt_enclosure",
    "cyclotomic_poly",
    "cos2pi_minpoly",
    "CycloReal",
    "IndeterminateSignError",
    "precision_schedule",
    "DEFAULT_MAX_BITS",
    "BoundValue",
    "SurdPair",
    "bound_decimal",
    "parse_bound_expr",
    "sign",
    "square_split",
]
