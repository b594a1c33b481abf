"""Synthetic PLC load generator: Leibniz partial sums of pi.

The workload size ``n`` is the upper bound of the partial sum, not a number
of digits. The digits-to-n lookup is shipped as data because the published
table mixes truncation and stability notions of "correct digits".
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import UnsupportedPrecisionError

# Results are reported as signed 64-bit integers in CSV and JSON outputs.
FLOP_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class WorkloadSpec:
    n: int

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, numbers.Integral):
            raise TypeError(f"n must be an integer, got {type(self.n).__name__}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")


@dataclass(frozen=True)
class DigitsEntry:
    digits: int
    digits_shown: str
    n: int
    flop_magnitude: int


def _as_spec(spec: WorkloadSpec | int) -> WorkloadSpec:
    return spec if isinstance(spec, WorkloadSpec) else WorkloadSpec(spec)


def leibniz_estimate(spec: WorkloadSpec | int) -> float:
    """Return ``4 * sum_{k=0..n} (-1)^k / (2k+1)`` summed in ascending k."""
    n = _as_spec(spec).n
    total = 0.0
    sign = 1.0
    for k in range(n + 1):
        total += sign / (2 * k + 1)
        sign = -sign
    return 4.0 * total


def flop_count(spec: WorkloadSpec | int) -> int:
    """Floating-point operations for a partial sum up to ``n``: ``n^2 + 3n + 1``.

    Raises:
        OverflowError: if the count exceeds the signed 64-bit range.
    """
    n = _as_spec(spec).n
    flops = n * (n + 3) + 1
    if flops > FLOP_LIMIT:
        raise OverflowError(f"FLOP count for n={n} exceeds 64-bit range")
    return flops


def flop_magnitude(spec: WorkloadSpec | int) -> int:
    return round(math.log10(flop_count(spec)))


def parse_digits_table(doc: dict) -> tuple[DigitsEntry, ...]:
    entries = tuple(
        DigitsEntry(
            digits=int(row["digits"]),
            digits_shown=str(row["digits_shown"]),
            n=int(row["n"]),
            flop_magnitude=int(row["flop_magnitude"]),
        )
        for row in doc["digits_table"]
    )
    for prev, cur in zip(entries, entries[1:]):
        if cur.n <= prev.n:
            raise ValueError("digits table must be strictly increasing in n")
    for entry in entries:
        if entry.flop_magnitude != flop_magnitude(entry.n):
            raise ValueError(
                f"flop_magnitude {entry.flop_magnitude} inconsistent with n={entry.n}"
            )
    return entries


def load_digits_table(path: str | Path | None = None) -> tuple[DigitsEntry, ...]:
    if path is None:
        return _default_digits_table()
    return parse_digits_table(json.loads(Path(path).read_text()))


@lru_cache(maxsize=1)
def _default_digits_table() -> tuple[DigitsEntry, ...]:
    text = resources.files("plcoffload.data").joinpath("workload.json").read_text()
    return parse_digits_table(json.loads(text))


def required_n_for_digits(digits: int, table: Sequence[DigitsEntry] | None = None) -> int:
    """Look up the partial-sum count listed for a prefix of ``digits`` digits."""
    table = _default_digits_table() if table is None else table
    for entry in table:
        if entry.digits == digits:
            return entry.n
    supported = sorted(e.digits for e in table)
    raise UnsupportedPrecisionError(
        f"no partial-sum count for {digits} digits (supported: {supported[0]}..{supported[-1]})"
    )
