"""Certified Mahler measures, heights and the finite checks behind an effective height lower bound."""

from __future__ import annotations

from .measure import MeasureResult, height, house, mahler_measure
from .poly import IntPolynomial, parse_polynomial

__all__ = ["IntPolynomial", "MeasureResult", "height", "house", "mahler_measure", "parse_polynomial"]
__version__ = "0.1.0"
