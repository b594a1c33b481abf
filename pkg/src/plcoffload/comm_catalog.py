"""Minimum update times of PLC communication interfaces.

The catalog maps ``device -> interface -> variant -> payload class`` to the
smallest interval at which the interface delivers consecutive messages.
Values are kept as the decimal strings found in the data file so that a
dump/reload cycle reproduces them character for character.
"""

from __future__ import annotations

import copy
import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from .errors import ConfigError, InterfaceUnsupportedError, NotFoundError
from .units import ms_to_us, parse_decimal


class Interface(str, enum.Enum):
    OUC = "OUC"
    LIBNODAVE = "LIBNODAVE"
    OPCUA_SERVER_CLIENT = "OPCUA_SERVER_CLIENT"
    OPCUA_PUBSUB = "OPCUA_PUBSUB"


class ProtocolVariant(str, enum.Enum):
    UDP = "UDP"
    TCP = "TCP"
    ISO_ON_TCP = "ISO_ON_TCP"
    UATCP_WRITE = "UATCP_WRITE"
    UATCP_READ = "UATCP_READ"
    UADP = "UADP"


VARIANTS_BY_INTERFACE: dict[Interface, tuple[ProtocolVariant, ...]] = {
    Interface.OUC: (ProtocolVariant.UDP, ProtocolVariant.TCP),
    Interface.LIBNODAVE: (ProtocolVariant.ISO_ON_TCP,),
    Interface.OPCUA_SERVER_CLIENT: (ProtocolVariant.UATCP_WRITE, ProtocolVariant.UATCP_READ),
    Interface.OPCUA_PUBSUB: (ProtocolVariant.UADP,),
}

PAYLOAD_CLASSES = (1, 10, 100)


@dataclass(frozen=True)
class InterfaceKey:
    interface: Interface
    protocol_variant: ProtocolVariant
    device_id: str
    payload_class: int

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "interface", Interface(self.interface))
            object.__setattr__(self, "protocol_variant", ProtocolVariant(self.protocol_variant))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.protocol_variant not in VARIANTS_BY_INTERFACE[self.interface]:
            raise ConfigError(
                f"variant {self.protocol_variant.value} does not belong to {self.interface.value}"
            )
        if self.payload_class not in PAYLOAD_CLASSES:
            raise ConfigError(
                f"payload class must be one of {PAYLOAD_CLASSES}, got {self.payload_class}"
            )

    def label(self) -> str:
        return f"{self.interface.value}/{self.protocol_variant.value}"


@dataclass(frozen=True)
class UpdateTimeEntry:
    key: InterfaceKey
    t_update_text: str
    estimated: bool = False
    note: str = ""
    t_update_ms: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        try:
            value = parse_decimal(self.t_update_text)
        except ArithmeticError:
            raise ConfigError(f"{self.key}: t_update {self.t_update_text!r} is not a number") from None
        if not value > 0:
            raise ConfigError(f"{self.key}: t_update must be > 0, got {self.t_update_text}")
        object.__setattr__(self, "t_update_ms", value)

    @property
    def t_update_us(self) -> float:
        return ms_to_us(self.t_update_ms)


def _interface_order(iface: Interface) -> int:
    return list(Interface).index(iface)


def _variant_order(variant: ProtocolVariant) -> int:
    return list(ProtocolVariant).index(variant)


class InterfaceCatalog:
    """Immutable lookup table of update times."""

    def __init__(self, entries: Mapping[InterfaceKey, UpdateTimeEntry]):
        self._entries = dict(entries)
        self._devices = {key.device_id for key in self._entries}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "InterfaceCatalog":
        tree = doc.get("interfaces", doc)
        entries: dict[InterfaceKey, UpdateTimeEntry] = {}
        for device_id, by_iface in tree.items():
            for iface, by_variant in by_iface.items():
                for variant, by_class in by_variant.items():
                    for payload_class, cell in by_class.items():
                        key = InterfaceKey(iface, variant, device_id, int(payload_class))
                        unknown = set(cell) - {"t_update_ms", "estimated", "note"}
                        if unknown:
                            raise ConfigError(f"{key}: unknown keys {sorted(unknown)}")
                        if "t_update_ms" not in cell:
                            raise ConfigError(f"{key}: missing t_update_ms")
                        entries[key] = UpdateTimeEntry(
                            key=key,
                            t_update_text=str(cell["t_update_ms"]),
                            estimated=bool(cell.get("estimated", False)),
                            note=str(cell.get("note", "")),
                        )
        catalog = cls(entries)
        catalog._check_complete()
        return catalog

    @classmethod
    def load(cls, path: str | Path) -> "InterfaceCatalog":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def _check_complete(self) -> None:
        pairs = {(k.device_id, k.interface, k.protocol_variant) for k in self._entries}
        for device_id, iface, variant in pairs:
            for pc in PAYLOAD_CLASSES:
                if InterfaceKey(iface, variant, device_id, pc) not in self._entries:
                    raise ConfigError(
                        f"{device_id} {iface.value}/{variant.value}: missing payload class {pc}"
                    )

    def to_dict(self) -> dict:
        tree: dict = {}
        for key in self.keys():
            entry = self._entries[key]
            cell: dict = {"t_update_ms": entry.t_update_text, "estimated": entry.estimated}
            if entry.note:
                cell["note"] = entry.note
            (
                tree.setdefault(key.device_id, {})
                .setdefault(key.interface.value, {})
                .setdefault(key.protocol_variant.value, {})
            )[str(key.payload_class)] = cell
        return {"interfaces": tree}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def merged(self, override: Mapping) -> "InterfaceCatalog":
        """Return a new catalog with ``override`` cells laid over this one."""
        base = self.to_dict()["interfaces"]
        merged = copy.deepcopy(base)
        for device_id, by_iface in override.get("interfaces", override).items():
            for iface, by_variant in by_iface.items():
                for variant, by_class in by_variant.items():
                    target = merged.setdefault(device_id, {}).setdefault(iface, {}).setdefault(variant, {})
                    for payload_class, cell in by_class.items():
                        target[str(payload_class)] = dict(cell)
        return InterfaceCatalog.from_dict({"interfaces": merged})

    def devices(self) -> list[str]:
        return sorted(self._devices)

    def keys(self) -> list[InterfaceKey]:
        return sorted(
            self._entries,
            key=lambda k: (
                k.device_id,
                _interface_order(k.interface),
                _variant_order(k.protocol_variant),
                k.payload_class,
            ),
        )

    def __iter__(self) -> Iterator[UpdateTimeEntry]:
        return (self._entries[k] for k in self.keys())

    def __len__(self) -> int:
        return len(self._entries)

    def lookup_update_time(self, key: InterfaceKey) -> UpdateTimeEntry:
        entry = self._entries.get(key)
        if entry is not None:
            return entry
        if key.device_id not in self._devices:
            raise NotFoundError(f"unknown device {key.device_id!r}")
        raise InterfaceUnsupportedError(
            f"no readings are available for {key.label()} on {key.device_id}"
        )

    def list_supported(self, device_id: str) -> list[InterfaceKey]:
        if device_id not in self._devices:
            raise NotFoundError(f"unknown device {device_id!r}")
        return [k for k in self.keys() if k.device_id == device_id]


@lru_cache(maxsize=1)
def default_catalog() -> InterfaceCatalog:
    text = resources.files("plcoffload.data").joinpath("interfaces.json").read_text()
    return InterfaceCatalog.from_dict(json.loads(text))


def lookup_update_time(key: InterfaceKey, catalog: InterfaceCatalog | None = None) -> UpdateTimeEntry:
    return (catalog or default_catalog()).lookup_update_time(key)


def list_supported(device_id: str, catalog: InterfaceCatalog | None = None) -> list[InterfaceKey]:
    return (catalog or default_catalog()).list_supported(device_id)
