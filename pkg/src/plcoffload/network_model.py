"""Factory-network delay composition and RTT statistics.

All delays returned here are in microseconds. Communication-system profiles
carry RTTs in milliseconds, as measured and published.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ConfigError, MissingStatisticError, NoDataError
from .units import ms_to_us, parse_decimal, us_to_ms

DEFAULT_PROPAGATION_SPEED_M_PER_S = 2e8


class CommSystem(str, enum.Enum):
    ETHERNET = "ETHERNET"
    WIFI = "WIFI"
    CELLULAR_4G = "CELLULAR_4G"
    CELLULAR_5G = "CELLULAR_5G"


class LoadCondition(str, enum.Enum):
    WITH_LOAD = "with_load"
    WITHOUT_LOAD = "without_load"
    UNSPECIFIED = "unspecified"


class ProfileSource(str, enum.Enum):
    MEASURED = "measured"
    PAPER = "paper"
    ASSUMED = "assumed"


class RttStatistic(str, enum.Enum):
    MEDIAN = "median"
    MAX = "max"


@dataclass(frozen=True)
class FactoryNetworkSpec:
    """Wired path between PLC and edge node.

    ``line_length_m`` and ``hop_count`` are the totals over forward and
    backward paths; ``per_hop_one_way_us`` is the delay added per hop.
    """

    line_length_m: float
    hop_count: int
    per_hop_one_way_us: float
    propagation_speed_m_per_s: float = DEFAULT_PROPAGATION_SPEED_M_PER_S

    def __post_init__(self) -> None:
        if self.line_length_m < 0 or self.hop_count < 0 or self.per_hop_one_way_us < 0:
            raise ValueError("line length, hop count and per-hop delay must be >= 0")
        if not self.propagation_speed_m_per_s > 0:
            raise ValueError("propagation speed must be > 0")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FactoryNetworkSpec":
        _reject_unknown(doc, {"line_length_m", "hop_count", "per_hop_one_way_us", "propagation_speed_m_per_s"}, "network")
        return cls(
            line_length_m=parse_decimal(doc["line_length_m"]),
            hop_count=int(doc["hop_count"]),
            per_hop_one_way_us=parse_decimal(doc["per_hop_one_way_us"]),
            propagation_speed_m_per_s=parse_decimal(
                doc.get("propagation_speed_m_per_s", DEFAULT_PROPAGATION_SPEED_M_PER_S)
            ),
        )


@dataclass(frozen=True)
class VirtualizationOverheadSpec:
    t_co_us: float
    t_nio_us: float

    def __post_init__(self) -> None:
        if self.t_co_us < 0 or self.t_nio_us < 0:
            raise ValueError("virtualization overheads must be >= 0")

    def scaled(self, factor: float) -> "VirtualizationOverheadSpec":
        return VirtualizationOverheadSpec(self.t_co_us * factor, self.t_nio_us * factor)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "VirtualizationOverheadSpec":
        _reject_unknown(doc, {"t_co_us", "t_nio_us"}, "overhead")
        return cls(t_co_us=parse_decimal(doc["t_co_us"]), t_nio_us=parse_decimal(doc["t_nio_us"]))


@dataclass(frozen=True)
class RttStats:
    count: int
    median_ms: float
    max_ms: float
    min_ms: float
    p95_ms: float
    lost: int = 0

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "median_ms": self.median_ms,
            "max_ms": self.max_ms,
            "min_ms": self.min_ms,
            "p95_ms": self.p95_ms,
            "lost": self.lost,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "RttStats":
        _reject_unknown(doc, {"count", "median_ms", "max_ms", "min_ms", "p95_ms", "lost"}, "stats")
        return cls(
            count=int(doc["count"]),
            median_ms=float(doc["median_ms"]),
            max_ms=float(doc["max_ms"]),
            min_ms=float(doc["min_ms"]),
            p95_ms=float(doc["p95_ms"]),
            lost=int(doc.get("lost", 0)),
        )


_PROFILE_KEYS = {"name", "system", "load", "rtt_median_ms", "rtt_max_ms", "source", "note", "stats"}


@dataclass(frozen=True)
class CommSystemProfile:
    system: CommSystem
    load: LoadCondition
    rtt_median_ms: float
    rtt_max_ms: float | None = None
    source: ProfileSource = ProfileSource.PAPER
    name: str = ""
    note: str = ""
    stats: RttStats | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "system", CommSystem(self.system))
        object.__setattr__(self, "load", LoadCondition(self.load))
        object.__setattr__(self, "source", ProfileSource(self.source))
        if not self.rtt_median_ms >= 0:
            raise ValueError(f"rtt_median_ms must be >= 0, got {self.rtt_median_ms}")
        if self.rtt_max_ms is not None and self.rtt_max_ms < self.rtt_median_ms:
            raise ValueError("rtt_max_ms must not be below rtt_median_ms")
        if not self.name:
            object.__setattr__(self, "name", default_profile_name(self.system, self.load))

    def rtt_ms(self, statistic: RttStatistic | str) -> float:
        statistic = RttStatistic(statistic)
        if statistic is RttStatistic.MEDIAN:
            return self.rtt_median_ms
        if self.rtt_max_ms is None:
            raise MissingStatisticError(f"profile {self.name!r} has no max RTT")
        return self.rtt_max_ms

    def label(self) -> str:
        return f"{self.system.value}/{self.load.value}"

    @classmethod
    def from_dict(cls, doc: Mapping) -> "CommSystemProfile":
        _reject_unknown(doc, _PROFILE_KEYS, "comm-system profile")
        try:
            rtt_max = doc.get("rtt_max_ms")
            return cls(
                system=CommSystem(doc["system"]),
                load=LoadCondition(doc.get("load", LoadCondition.UNSPECIFIED.value)),
                rtt_median_ms=parse_decimal(doc["rtt_median_ms"]),
                rtt_max_ms=None if rtt_max is None else parse_decimal(rtt_max),
                source=ProfileSource(doc.get("source", ProfileSource.PAPER.value)),
                name=str(doc.get("name", "")),
                note=str(doc.get("note", "")),
                stats=RttStats.from_dict(doc["stats"]) if doc.get("stats") else None,
            )
        except KeyError as exc:
            raise ConfigError(f"comm-system profile missing {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"invalid comm-system profile: {exc}") from None

    def to_dict(self) -> dict:
        doc: dict = {
            "name": self.name,
            "system": self.system.value,
            "load": self.load.value,
            "rtt_median_ms": _fmt_ms(self.rtt_median_ms),
        }
        if self.rtt_max_ms is not None:
            doc["rtt_max_ms"] = _fmt_ms(self.rtt_max_ms)
        doc["source"] = self.source.value
        if self.note:
            doc["note"] = self.note
        if self.stats is not None:
            doc["stats"] = self.stats.to_dict()
        return doc


def _fmt_ms(value: float) -> str:
    return f"{value:.6f}".rstrip("0").rstrip(".") if value else "0"


def _reject_unknown(doc: Mapping, allowed: set[str], what: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown {what} keys: {sorted(unknown)}")


def default_profile_name(system: CommSystem, load: LoadCondition) -> str:
    base = {
        CommSystem.ETHERNET: "ethernet",
        CommSystem.WIFI: "wifi",
        CommSystem.CELLULAR_4G: "4g",
        CommSystem.CELLULAR_5G: "5g",
    }[CommSystem(system)]
    suffix = {
        LoadCondition.WITH_LOAD: "-load",
        LoadCondition.WITHOUT_LOAD: "-no-load",
        LoadCondition.UNSPECIFIED: "",
    }[LoadCondition(load)]
    return base + suffix


def wired_network_delay(spec: FactoryNetworkSpec) -> float:
    """Hop delays plus propagation over the whole line, in microseconds."""
    propagation_us = spec.line_length_m * 1e6 / spec.propagation_speed_m_per_s
    return spec.hop_count * spec.per_hop_one_way_us + propagation_us


def virtualization_overhead(spec: VirtualizationOverheadSpec) -> float:
    """Container overhead in microseconds: the NIC path is crossed twice."""
    return 2 * spec.t_nio_us + spec.t_co_us


def total_network_delay(
    wired: FactoryNetworkSpec,
    comm: CommSystemProfile,
    statistic: RttStatistic | str = RttStatistic.MEDIAN,
) -> float:
    return wired_network_delay(wired) + ms_to_us(comm.rtt_ms(statistic))


def summarize_rtt(samples_us: Sequence[float], lost: int = 0) -> RttStats:
    """Order statistics over delivered RTT samples (microseconds in, ms out).

    The median averages the two central values for an even count; p95 is
    the sorted value at index ``ceil(0.95 * count) - 1``.
    """
    ordered = sorted(samples_us)
    count = len(ordered)
    if count == 0:
        raise NoDataError("no delivered samples")
    mid = count // 2
    if count % 2:
        median = ordered[mid]
    else:
        median = (ordered[mid - 1] + ordered[mid]) / 2
    # integer ceil avoids 0.95 * count landing just above an integer
    p95_index = (95 * count + 99) // 100 - 1
    return RttStats(
        count=count,
        median_ms=us_to_ms(median),
        max_ms=us_to_ms(ordered[-1]),
        min_ms=us_to_ms(ordered[0]),
        p95_ms=us_to_ms(ordered[p95_index]),
        lost=lost,
    )


def parse_comm_profiles(doc: Mapping) -> list[CommSystemProfile]:
    items = doc.get("comm_systems") if "comm_systems" in doc else [doc]
    return [CommSystemProfile.from_dict(item) for item in items]


@lru_cache(maxsize=1)
def _default_docs() -> tuple[dict, dict]:
    pkg = resources.files("plcoffload.data")
    comm = json.loads(pkg.joinpath("comm_systems.json").read_text())
    factory = json.loads(pkg.joinpath("factory.json").read_text())
    return comm, factory


def default_comm_profiles() -> list[CommSystemProfile]:
    return parse_comm_profiles(_default_docs()[0])


def default_factory_network() -> FactoryNetworkSpec:
    return FactoryNetworkSpec.from_dict(_default_docs()[1]["network"])


def default_overhead() -> VirtualizationOverheadSpec:
    return VirtualizationOverheadSpec.from_dict(_default_docs()[1]["overhead"])


def load_profile(path: str | Path) -> CommSystemProfile:
    profiles = parse_comm_profiles(json.loads(Path(path).read_text()))
    if len(profiles) != 1:
        raise ConfigError(f"{path}: expected a single profile document, found {len(profiles)}")
    return profiles[0]


def write_profile(profile: CommSystemProfile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(profile.to_dict(), indent=2) + "\n")

