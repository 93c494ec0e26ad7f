"""Exact rationals are :class:`fractions.Fraction`; these helpers fix their text form."""

from __future__ import annotations

from fractions import Fraction


def format_fraction(x: Fraction) -> str:
    """Always ``"num/den"``, even for integers, so consumers never see a bare number."""
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    """Exact parse of ``"num/den"``, an integer or a decimal string such as ``"1.713"``."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        raise TypeError("refusing to build an exact rational from a float")
    return Fraction(str(text).strip())
