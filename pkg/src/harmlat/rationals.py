"""Exact rational scalars.

All quantities in this package are :class:`fractions.Fraction` values;
this module only adds the string conventions used by the CLI and the
JSON/CSV wire formats ("num/den", integers, finite decimal strings).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UsageError


def parse_rational(text: str) -> Fraction:
    """Parse "3/4", "7", "-0.25" (finite decimals) into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """Render a Fraction as "num" or "num/den" in lowest terms."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
