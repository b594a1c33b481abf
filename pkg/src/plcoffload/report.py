"""CSV emitters for break-even grids and cycle-time ramps.

Exact values are written with six fractional digits and integers bare so
that repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable

from .breakeven import BreakEvenResult, BreakEvenTable
from .device_model import RampRecord

EXACT_HEADER = (
    "comm_system",
    "load",
    "payload_class",
    "column",
    "t_network_us",
    "t_update_us",
    "t_overhead_us",
    "c_plc_us",
    "c_edge_us",
    "denominator_us_per_n",
    "n_be_exact",
    "n_be",
    "note",
)


def fmt(value: float) -> str:
    return f"{value:.6f}"


def _writer(buf: io.StringIO):
    return csv.writer(buf, lineterminator="\n")


def table_csv(table: BreakEvenTable) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["comm_system", "load", "payload_class", *(c.label() for c in table.columns)])
    for r, row in enumerate(table.rows):
        cells = []
        for c in range(len(table.columns)):
            value = table.cells[(r, c)]
            cells.append(str(value.n_be) if isinstance(value, BreakEvenResult) else "")
        w.writerow([row.comm.system.value, row.comm.load.value, row.payload_class, *cells])
    return buf.getvalue()


def exact_csv(table: BreakEvenTable) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(EXACT_HEADER)
    for r, row in enumerate(table.rows):
        for c, col in enumerate(table.columns):
            value = table.cells[(r, c)]
            lead = [row.comm.system.value, row.comm.load.value, row.payload_class, col.label()]
            if isinstance(value, BreakEvenResult):
                w.writerow([
                    *lead,
                    fmt(value.t_network_us),
                    fmt(value.t_update_us),
                    fmt(value.t_overhead_us),
                    fmt(value.c_plc_us),
                    fmt(value.c_edge_us),
                    fmt(value.denominator_us_per_n),
                    fmt(value.n_be_exact),
                    value.n_be,
                    "",
                ])
            else:
                w.writerow([*lead, "", "", "", "", "", "", "", "", value])
    return buf.getvalue()


def heatmap_csv(table: BreakEvenTable) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["row_label", "col_label", "n_be"])
    for row, col, result in table.results():
        w.writerow([row.label(), col.label(), result.n_be])
    return buf.getvalue()


def ramp_csv(records: Iterable[RampRecord]) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(["n", "delta_cycle_ms", "stopped"])
    for rec in records:
        w.writerow([rec.n, fmt(rec.delta_cycle_ms), "true" if rec.stopped else "false"])
    return buf.getvalue()


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)
