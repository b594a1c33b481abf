"""Millisecond/microsecond conversion.

Public values carry their unit in the name. Conversions go through the
shortest decimal repr so that catalog constants such as 0.49 ms land on
490.0 us exactly instead of 489.99999999999994.
"""

from __future__ import annotations

from decimal import Decimal

_THOUSAND = Decimal(1000)


def ms_to_us(value_ms: float) -> float:
    return float(Decimal(repr(float(value_ms))) * _THOUSAND)


def us_to_ms(value_us: float) -> float:
    return float(Decimal(repr(float(value_us))) / _THOUSAND)


def parse_decimal(text: str | float | int) -> float:
    """Parse a decimal string (or number) from a data file into a float."""
    return float(Decimal(str(text)))
