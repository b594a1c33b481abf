"""Bridge probe samples into comm-system profiles and CSV files."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import ConfigError, NoDataError
from ..network_model import (
    CommSystem,
    CommSystemProfile,
    LoadCondition,
    ProfileSource,
    default_profile_name,
    summarize_rtt,
)
from .probe import ProbeSample, ProbeStatus

SAMPLES_HEADER = ("seq", "rtt_us", "status")


def export_profile(
    samples: Sequence[ProbeSample],
    system: CommSystem | str,
    load: LoadCondition | str,
    name: str | None = None,
) -> CommSystemProfile:
    received = [s.rtt_us for s in samples if s.status is ProbeStatus.RECEIVED]
    if not received:
        raise NoDataError("no received samples to export")
    stats = summarize_rtt(received, lost=len(samples) - len(received))
    system, load = CommSystem(system), LoadCondition(load)
    return CommSystemProfile(
        system=system,
        load=load,
        rtt_median_ms=stats.median_ms,
        rtt_max_ms=stats.max_ms,
        source=ProfileSource.MEASURED,
        name=name or default_profile_name(system, load) + "-measured",
        stats=stats,
    )


def write_samples_csv(samples: Iterable[ProbeSample], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SAMPLES_HEADER)
        for s in samples:
            writer.writerow([s.seq, "" if s.rtt_us is None else f"{s.rtt_us:.3f}", s.status.value])


def read_samples_csv(path: str | Path) -> list[ProbeSample]:
    """Parse a samples CSV; malformed rows raise with their line number."""
    samples = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        if tuple(h.strip() for h in header) != SAMPLES_HEADER:
            raise ConfigError(f"{path}:1: expected header {','.join(SAMPLES_HEADER)}")
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != 3:
                raise ConfigError(f"{path}:{line}: expected 3 fields, got {len(row)}")
            seq, rtt, status = (f.strip() for f in row)
            try:
                parsed_status = ProbeStatus(status)
                samples.append(ProbeSample(int(seq), float(rtt) if rtt else None, parsed_status))
            except ValueError as exc:
                raise ConfigError(f"{path}:{line}: {exc}") from None
    return samples
