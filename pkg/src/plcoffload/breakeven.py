"""Offload-time model and break-even solver.

Offloading ``n`` partial sums costs the edge processing time plus a fixed
budget (network delay, interface update time, virtualization overhead).
Running them locally costs ``c_plc * n``. The break-even point is where the
two lines cross:

    n_be = (t_network + t_update + t_overhead) / (c_plc - c_edge)

Everything is evaluated in microseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .comm_catalog import (
    PAYLOAD_CLASSES,
    Interface,
    InterfaceCatalog,
    InterfaceKey,
    ProtocolVariant,
    default_catalog,
)
from .device_model import DeviceProfile, delta_cycle_us
from .errors import ConfigError, NoBreakEvenError, NotFoundError, OffloadError
from .network_model import (
    CommSystemProfile,
    FactoryNetworkSpec,
    RttStatistic,
    VirtualizationOverheadSpec,
    total_network_delay,
    virtualization_overhead,
)


@dataclass(frozen=True)
class OffloadScenario:
    plc: DeviceProfile
    edge: DeviceProfile
    interface_key: InterfaceKey
    comm: CommSystemProfile
    wired: FactoryNetworkSpec
    overhead: VirtualizationOverheadSpec
    rtt_statistic: RttStatistic = RttStatistic.MEDIAN
    catalog: InterfaceCatalog | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.interface_key.device_id != self.plc.id:
            raise ConfigError(
                f"interface key is for {self.interface_key.device_id!r}, PLC is {self.plc.id!r}"
            )
        object.__setattr__(self, "rtt_statistic", RttStatistic(self.rtt_statistic))

    def t_update_us(self) -> float:
        catalog = self.catalog or default_catalog()
        return catalog.lookup_update_time(self.interface_key).t_update_us

    def t_network_us(self) -> float:
        return total_network_delay(self.wired, self.comm, self.rtt_statistic)

    def t_overhead_us(self) -> float:
        return virtualization_overhead(self.overhead)

    def fixed_cost_us(self) -> float:
        return self.t_network_us() + self.t_update_us() + self.t_overhead_us()


@dataclass(frozen=True)
class BreakEvenResult:
    n_be: int
    n_be_exact: float
    t_network_us: float
    t_update_us: float
    t_overhead_us: float
    c_plc_us: float
    c_edge_us: float

    @property
    def denominator_us_per_n(self) -> float:
        return self.c_plc_us - self.c_edge_us

    @property
    def fixed_cost_us(self) -> float:
        return self.t_network_us + self.t_update_us + self.t_overhead_us


def round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def offload_time(scenario: OffloadScenario, n: float) -> float:
    """Total time in microseconds to offload a workload of ``n`` partial sums."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    t_proc = delta_cycle_us(scenario.edge, n)
    return t_proc + scenario.t_network_us() + scenario.t_update_us() + scenario.t_overhead_us()


def is_beneficial(scenario: OffloadScenario, n: float) -> bool:
    return offload_time(scenario, n) < delta_cycle_us(scenario.plc, n)


def break_even(scenario: OffloadScenario) -> BreakEvenResult:
    c_plc = scenario.plc.c_us_per_n
    c_edge = scenario.edge.c_us_per_n
    if c_plc <= c_edge:
        raise NoBreakEvenError(
            f"{scenario.edge.id} (c={c_edge} us) is not faster than {scenario.plc.id} (c={c_plc} us)"
        )
    t_update = scenario.t_update_us()
    t_network = scenario.t_network_us()
    t_overhead = scenario.t_overhead_us()
    exact = (t_network + t_update + t_overhead) / (c_plc - c_edge)
    return BreakEvenResult(
        n_be=round_half_up(exact),
        n_be_exact=exact,
        t_network_us=t_network,
        t_update_us=t_update,
        t_overhead_us=t_overhead,
        c_plc_us=c_plc,
        c_edge_us=c_edge,
    )


@dataclass(frozen=True)
class TableColumn:
    interface: Interface
    protocol_variant: ProtocolVariant
    device_id: str

    def label(self) -> str:
        return f"{self.interface.value}/{self.protocol_variant.value}@{self.device_id}"


DEFAULT_COLUMNS: tuple[TableColumn, ...] = (
    TableColumn(Interface.OUC, ProtocolVariant.UDP, "S7-314"),
    TableColumn(Interface.OUC, ProtocolVariant.UDP, "S7-1512"),
    TableColumn(Interface.OUC, ProtocolVariant.TCP, "S7-314"),
    TableColumn(Interface.OUC, ProtocolVariant.TCP, "S7-1512"),
    TableColumn(Interface.LIBNODAVE, ProtocolVariant.ISO_ON_TCP, "S7-314"),
    TableColumn(Interface.LIBNODAVE, ProtocolVariant.ISO_ON_TCP, "S7-1512"),
    TableColumn(Interface.OPCUA_SERVER_CLIENT, ProtocolVariant.UATCP_WRITE, "S7-1512"),
    TableColumn(Interface.OPCUA_SERVER_CLIENT, ProtocolVariant.UATCP_READ, "S7-1512"),
    TableColumn(Interface.OPCUA_PUBSUB, ProtocolVariant.UADP, "S7-1512"),
)


@dataclass(frozen=True)
class TableRow:
    comm: CommSystemProfile
    payload_class: int

    def label(self) -> str:
        return f"{self.comm.name}:{self.payload_class}"


@dataclass
class BreakEvenTable:
    """Grid of break-even results; a cell holds a result or an error message."""

    rows: list[TableRow]
    columns: list[TableColumn]
    cells: dict[tuple[int, int], BreakEvenResult | str]

    def cell(self, row: int, col: int) -> BreakEvenResult | str:
        return self.cells[(row, col)]

    def results(self) -> Iterable[tuple[TableRow, TableColumn, BreakEvenResult]]:
        for (r, c), value in sorted(self.cells.items()):
            if isinstance(value, BreakEvenResult):
                yield self.rows[r], self.columns[c], value

    def populated_count(self) -> int:
        return sum(isinstance(v, BreakEvenResult) for v in self.cells.values())

    def find(self, comm_name: str, payload_class: int, column_label: str) -> BreakEvenResult | str:
        for r, row in enumerate(self.rows):
            if row.comm.name == comm_name and row.payload_class == payload_class:
                for c, col in enumerate(self.columns):
                    if col.label() == column_label:
                        return self.cells[(r, c)]
        raise KeyError((comm_name, payload_class, column_label))


def generate_table(
    comm_profiles: Sequence[CommSystemProfile],
    devices: Mapping[str, DeviceProfile],
    edge: DeviceProfile,
    wired: FactoryNetworkSpec,
    overhead: VirtualizationOverheadSpec,
    catalog: InterfaceCatalog | None = None,
    columns: Sequence[TableColumn] = DEFAULT_COLUMNS,
    payload_classes: Sequence[int] = PAYLOAD_CLASSES,
    statistic: RttStatistic | str = RttStatistic.MEDIAN,
) -> BreakEvenTable:
    """Evaluate every (comm profile, payload class) x column cell.

    Per-cell failures (unknown device, unsupported interface, missing
    statistic) are stored in the cell as a message instead of raising.
    """
    rows = [TableRow(comm, pc) for comm in comm_profiles for pc in payload_classes]
    cells: dict[tuple[int, int], BreakEvenResult | str] = {}
    for r, row in enumerate(rows):
        for c, col in enumerate(columns):
            try:
                plc = devices.get(col.device_id)
                if plc is None:
                    raise NotFoundError(f"unknown device {col.device_id!r}")
                scenario = OffloadScenario(
                    plc=plc,
                    edge=edge,
                    interface_key=InterfaceKey(col.interface, col.protocol_variant, col.device_id, row.payload_class),
                    comm=row.comm,
                    wired=wired,
                    overhead=overhead,
                    rtt_statistic=statistic,
                    catalog=catalog,
                )
                cells[(r, c)] = break_even(scenario)
            except OffloadError as exc:
                cells[(r, c)] = str(exc)
    return BreakEvenTable(rows=rows, columns=list(columns), cells=cells)
