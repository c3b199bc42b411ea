"""Bilateral CVA engine: first-to-default vs simplified valuation adjustments."""

from .default_model import GumbelBivariateExponential
from .engine import (
    BcvaReport,
    CreditParams,
    EquityForward,
    Market,
    ZeroCouponBond,
    bcva_full_forward,
    bcva_simplified_forward,
    bilateral_terms_forward,
    difference_forward,
    ucva_forward,
    udva_forward,
    zcb_report,
)
from .errors import ConfigError, NumericalError
from .market import DiscountCurve, GbmEquity, forward_npv
from .mc import McConfig, McEstimate, estimate

__all__ = [
    "BcvaReport",
    "ConfigError",
    "CreditParams",
    "DiscountCurve",
    "EquityForward",
    "GbmEquity",
    "GumbelBivariateExponential",
    "Market",
    "McConfig",
    "McEstimate",
    "NumericalError",
    "ZeroCouponBond",
    "bcva_full_forward",
    "bcva_simplified_forward",
    "bilateral_terms_forward",
    "difference_forward",
    "estimate",
    "forward_npv",
    "ucva_forward",
    "udva_forward",
    "zcb_report",
]
