"""Linear cycle-time model for PLCs and edge nodes.

Each Leibniz iteration adds a constant time ``c`` to the scan cycle, so the
workload-induced increment is ``c * n``. Controllers additionally enter a
stop state once ``n`` exceeds their watchdog-derived limit ``n_max``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ConfigError, InsufficientDataError
from .units import ms_to_us, parse_decimal


class Role(str, enum.Enum):
    CONTROLLER = "controller"
    EDGE = "edge"


class CycleState(str, enum.Enum):
    OK = "ok"
    STOP = "stop-state"


@dataclass(frozen=True)
class DeviceProfile:
    """A compute device characterised by its per-iteration cost.

    Attributes:
        id: Device name, e.g. ``"S7-1512"``.
        c_ms_per_n: Cycle-time increment per partial sum, in milliseconds.
        n_max: Largest workload the device runs without entering the stop
            state. ``None`` for devices without a watchdog limit.
        role: Controller or edge node.
    """

    id: str
    c_ms_per_n: float
    n_max: int | None = None
    role: Role = Role.CONTROLLER
    description: str = ""

    def __post_init__(self) -> None:
        if not self.c_ms_per_n > 0:
            raise ValueError(f"{self.id}: c must be > 0, got {self.c_ms_per_n}")
        if self.n_max is not None and self.n_max <= 0:
            raise ValueError(f"{self.id}: n_max must be > 0, got {self.n_max}")
        object.__setattr__(self, "role", Role(self.role))

    @property
    def c_us_per_n(self) -> float:
        return ms_to_us(self.c_ms_per_n)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "DeviceProfile":
        allowed = {"id", "c_ms_per_n", "n_max", "role", "description"}
        unknown = set(doc) - allowed
        if unknown:
            raise ConfigError(f"unknown device keys: {sorted(unknown)}")
        try:
            n_max = doc.get("n_max")
            return cls(
                id=str(doc["id"]),
                c_ms_per_n=parse_decimal(doc["c_ms_per_n"]),
                n_max=None if n_max is None else int(n_max),
                role=Role(doc.get("role", Role.CONTROLLER.value)),
                description=str(doc.get("description", "")),
            )
        except KeyError as exc:
            raise ConfigError(f"device entry missing {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"invalid device entry: {exc}") from None

    def to_dict(self) -> dict:
        doc = {"id": self.id, "c_ms_per_n": repr(self.c_ms_per_n), "role": self.role.value}
        if self.n_max is not None:
            doc["n_max"] = self.n_max
        if self.description:
            doc["description"] = self.description
        return doc


@dataclass(frozen=True)
class RampRecord:
    n: int
    delta_cycle_ms: float
    stopped: bool


def delta_cycle(device: DeviceProfile, n: float) -> float:
    """Cycle-time increment in ms for a workload of ``n`` partial sums."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return device.c_ms_per_n * n


def delta_cycle_us(device: DeviceProfile, n: float) -> float:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return device.c_us_per_n * n


def check_stop(device: DeviceProfile, n: int) -> CycleState:
    # Boundary n == n_max still runs; only exceeding it stops the PLC.
    if device.n_max is not None and n > device.n_max:
        return CycleState.STOP
    return CycleState.OK


def fit_constant(samples: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope through the origin of ``(n, delta_cycle_ms)`` pairs.

    With a single sample this is exactly ``t / n``.
    """
    sum_nt = 0.0
    sum_nn = 0.0
    for n, t in samples:
        sum_nt += n * t
        sum_nn += n * n
    if sum_nn == 0:
        raise InsufficientDataError("need at least one sample with n > 0")
    return sum_nt / sum_nn


def simulate_ramp(device: DeviceProfile, n_start: int, n_step: int, n_end: int) -> list[RampRecord]:
    """Step the workload up like the load generator does, cycle by cycle.

    Emission stops after the first record that puts the device into the
    stop state; that record is included with ``stopped=True``.
    """
    if n_step < 1:
        raise ValueError(f"n_step must be >= 1, got {n_step}")
    if n_start > n_end:
        raise ValueError(f"n_start ({n_start}) must not exceed n_end ({n_end})")
    if n_start < 0:
        raise ValueError(f"n_start must be >= 0, got {n_start}")

    records = []
    for n in range(n_start, n_end + 1, n_step):
        stopped = check_stop(device, n) is CycleState.STOP
        records.append(RampRecord(n, delta_cycle(device, n), stopped))
        if stopped:
            break
    return records
