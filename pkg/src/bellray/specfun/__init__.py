"""Scalar special functions used by the asymptotic formulas."""

from .airy import airy_ai, airy_ai_prime, airy_bi, airy_bi_prime
from .lambertw import (
    BRANCH_POINT,
    lambert_w,
    lambert_w0,
    lambert_w_complex,
    lambert_wm1,
    lw_branch_series,
)

__all__ = [
    "BRANCH_POINT",
    "airy_ai",
    "airy_ai_prime",
    "airy_bi",
    "airy_bi_prime",
    "lambert_w",
    "lambert_w0",
    "lambert_w_complex",
    "lambert_wm1",
    "lw_branch_series",
]
