"""Exact symbolic moment calculus: cumulants, k-statistics, compositions, polynomial families."""

from __future__ import annotations

from .kernel import CapExceeded, MomentforgeError, Poly, RationalFunctionInN, TruncatedSeries, ValidationError
from .umbral import MomentSeq, MultiMomentTable, named_umbra

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "MomentforgeError",
    "MomentSeq",
    "MultiMomentTable",
    "Poly",
    "RationalFunctionInN",
    "TruncatedSeries",
    "ValidationError",
    "named_umbra",
]
