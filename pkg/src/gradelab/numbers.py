"""Exact score arithmetic.

Scores are ``fractions.Fraction`` everywhere inside the engine so that
totals, CSV exports, and database round-trips are exact. Only the
statistics layer converts to floating point. The canonical text form is
the ``Fraction`` string ("3", "7/2"); parsing additionally accepts plain
decimals ("3.5").
"""

from __future__ import annotations

from fractions import Fraction

Score = Fraction


def parse_score(text: str | int | float | Fraction) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        # go through str so 0.1 means 1/10, not the binary float
        return Fraction(str(text))
    return Fraction(text)


def format_score(value: Fraction) -> str:
    return str(Fraction(value))


def percentage_of(total: Fraction, max_score: Fraction) -> Fraction:
    """Exact percentage, 100 * total / max_score."""
    if max_score <= 0:
        raise ValueError("max_score must be positive")
    return Fraction(100) * Fraction(total) / Fraction(max_score)


def render_percentage(percentage: Fraction) -> str:
    """Render with exactly 2 decimal places, round-half-up."""
    cents = Fraction(percentage) * 100
    whole = cents.numerator // cents.denominator
    remainder = cents - whole
    if remainder * 2 >= 1:
        whole += 1
    sign = "-" if whole < 0 else ""
    whole = abs(whole)
    return f"{sign}{whole // 100}.{whole % 100:02d}"
