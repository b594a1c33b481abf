"""Loading of shipped data files, user overrides, and scenario configs.

The data directory holds ``devices.json``, ``interfaces.json``,
``comm_systems.json``, ``factory.json`` and ``workload.json``. Override
files are JSON documents with any subset of the sections ``devices``,
``interfaces``, ``comm_systems`` and ``factory``; a bare device or
comm-system profile document is also accepted. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from .breakeven import OffloadScenario
from .comm_catalog import VARIANTS_BY_INTERFACE, Interface, InterfaceCatalog, InterfaceKey, ProtocolVariant
from .device_model import DeviceProfile, Role
from .errors import ConfigError, NotFoundError
from .network_model import (
    CommSystem,
    CommSystemProfile,
    FactoryNetworkSpec,
    LoadCondition,
    RttStatistic,
    VirtualizationOverheadSpec,
    parse_comm_profiles,
)
from .workload import DigitsEntry, parse_digits_table

DATA_FILES = ("devices.json", "interfaces.json", "comm_systems.json", "factory.json", "workload.json")
OVERRIDE_SECTIONS = {"devices", "interfaces", "comm_systems", "factory"}


@dataclass
class ModelData:
    devices: dict[str, DeviceProfile]
    catalog: InterfaceCatalog
    comm_profiles: list[CommSystemProfile]
    wired: FactoryNetworkSpec
    overhead: VirtualizationOverheadSpec
    digits_table: tuple[DigitsEntry, ...] = ()

    def device(self, device_id: str) -> DeviceProfile:
        try:
            return self.devices[device_id]
        except KeyError:
            known = ", ".join(sorted(self.devices))
            raise NotFoundError(f"unknown device {device_id!r} (known: {known})") from None

    def edge_devices(self) -> list[DeviceProfile]:
        return [d for d in self.devices.values() if d.role is Role.EDGE]

    def comm_profile(self, name: str) -> CommSystemProfile:
        for profile in self.comm_profiles:
            if profile.name == name:
                return profile
        known = ", ".join(p.name for p in self.comm_profiles)
        raise NotFoundError(f"unknown comm-system profile {name!r} (known: {known})")

    def find_comm(self, system: CommSystem, load: LoadCondition) -> CommSystemProfile:
        """Resolve by (system, load); a system with only an unspecified-load
        profile serves every load condition."""
        by_key = {(p.system, p.load): p for p in self.comm_profiles}
        profile = by_key.get((system, load)) or by_key.get((system, LoadCondition.UNSPECIFIED))
        if profile is None:
            raise NotFoundError(f"no comm-system profile for {system.value}/{load.value}")
        return profile


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def _read_data_file(data_dir: Path | None, name: str) -> Any:
    if data_dir is None:
        return json.loads(resources.files("plcoffload.data").joinpath(name).read_text())
    path = Path(data_dir) / name
    if not path.exists():
        raise NotFoundError(f"data file {path} does not exist")
    return _read_json(path)


def _parse_devices(doc: Mapping) -> dict[str, DeviceProfile]:
    devices = {}
    for item in doc.get("devices", []):
        device = DeviceProfile.from_dict(item)
        devices[device.id] = device
    return devices


def normalize_override(doc: Mapping) -> dict:
    """Coerce bare profile documents into the sectioned override layout."""
    if "system" in doc:
        return {"comm_systems": [dict(doc)]}
    if "c_ms_per_n" in doc:
        return {"devices": [dict(doc)]}
    unknown = set(doc) - OVERRIDE_SECTIONS
    if unknown:
        raise ConfigError(f"unknown override sections: {sorted(unknown)}")
    return dict(doc)


def apply_override(data: ModelData, doc: Mapping) -> ModelData:
    doc = normalize_override(doc)
    devices = dict(data.devices)
    devices.update(_parse_devices(doc))

    catalog = data.catalog.merged(doc["interfaces"]) if "interfaces" in doc else data.catalog

    comm_profiles = list(data.comm_profiles)
    if "comm_systems" in doc:
        for profile in parse_comm_profiles(doc):
            names = [p.name for p in comm_profiles]
            if profile.name in names:
                comm_profiles[names.index(profile.name)] = profile
            else:
                comm_profiles.append(profile)

    wired, overhead = data.wired, data.overhead
    factory = doc.get("factory", {})
    unknown = set(factory) - {"network", "overhead"}
    if unknown:
        raise ConfigError(f"unknown factory keys: {sorted(unknown)}")
    if "network" in factory:
        merged = {
            "line_length_m": data.wired.line_length_m,
            "hop_count": data.wired.hop_count,
            "per_hop_one_way_us": data.wired.per_hop_one_way_us,
            "propagation_speed_m_per_s": data.wired.propagation_speed_m_per_s,
            **factory["network"],
        }
        wired = FactoryNetworkSpec.from_dict(merged)
    if "overhead" in factory:
        merged = {"t_co_us": data.overhead.t_co_us, "t_nio_us": data.overhead.t_nio_us, **factory["overhead"]}
        overhead = VirtualizationOverheadSpec.from_dict(merged)

    return ModelData(devices, catalog, comm_profiles, wired, overhead, data.digits_table)


def load_model_data(data_dir: str | Path | None = None, overrides: Iterable[str | Path] = ()) -> ModelData:
    data_dir = None if data_dir is None else Path(data_dir)
    factory = _read_data_file(data_dir, "factory.json")
    unknown = set(factory) - {"network", "overhead"}
    if unknown:
        raise ConfigError(f"unknown factory keys: {sorted(unknown)}")
    try:
        data = ModelData(
            devices=_parse_devices(_read_data_file(data_dir, "devices.json")),
            catalog=InterfaceCatalog.from_dict(_read_data_file(data_dir, "interfaces.json")),
            comm_profiles=parse_comm_profiles(_read_data_file(data_dir, "comm_systems.json")),
            wired=FactoryNetworkSpec.from_dict(factory["network"]),
            overhead=VirtualizationOverheadSpec.from_dict(factory["overhead"]),
            digits_table=parse_digits_table(_read_data_file(data_dir, "workload.json")),
        )
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed data file: {exc}") from None
    for path in overrides:
        path = Path(path)
        if not path.exists():
            raise NotFoundError(f"override file {path} does not exist")
        data = apply_override(data, _read_json(path))
    return data


_COMM_ALIASES = {
    "ethernet": CommSystem.ETHERNET,
    "wifi": CommSystem.WIFI,
    "wi-fi": CommSystem.WIFI,
    "4g": CommSystem.CELLULAR_4G,
    "5g": CommSystem.CELLULAR_5G,
}
_LOAD_ALIASES = {
    "load": LoadCondition.WITH_LOAD,
    "with-load": LoadCondition.WITH_LOAD,
    "no-load": LoadCondition.WITHOUT_LOAD,
    "without-load": LoadCondition.WITHOUT_LOAD,
    "unspecified": LoadCondition.UNSPECIFIED,
}


def _enum_value(enum_cls, text: str, aliases: Mapping[str, Any] = {}):
    key = str(text).strip()
    if key.lower() in aliases:
        return aliases[key.lower()]
    try:
        return enum_cls(key.upper().replace("-", "_"))
    except ValueError:
        pass
    try:
        return enum_cls(key.lower().replace("-", "_"))
    except ValueError:
        choices = sorted({*aliases, *(m.value for m in enum_cls)})
        raise ConfigError(f"unknown {enum_cls.__name__} {text!r} (choose from {choices})") from None


def parse_interface(text: str) -> Interface:
    return _enum_value(Interface, text, {"opcua": Interface.OPCUA_SERVER_CLIENT, "pubsub": Interface.OPCUA_PUBSUB})


def parse_variant(text: str) -> ProtocolVariant:
    return _enum_value(ProtocolVariant, text, {"write": ProtocolVariant.UATCP_WRITE, "read": ProtocolVariant.UATCP_READ})


def parse_comm_system(text: str) -> CommSystem:
    return _enum_value(CommSystem, text, _COMM_ALIASES)


def parse_load(text: str) -> LoadCondition:
    return _enum_value(LoadCondition, text, _LOAD_ALIASES)


@dataclass
class ScenarioConfig:
    """User-facing description of one break-even query."""

    plc_id: str
    interface: str
    protocol_variant: str | None = None
    payload_class: int = 1
    comm_system: str | None = "ethernet"
    load_condition: str = "without_load"
    comm_profile: str | None = None
    edge_id: str | None = None
    rtt_statistic: str = RttStatistic.MEDIAN.value
    overrides: list[str] = field(default_factory=list)

    @classmethod
    def from_mapping(cls, doc: Mapping) -> "ScenarioConfig":
        allowed = {f.name for f in fields(cls)}
        unknown = set(doc) - allowed
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        missing = {"plc_id", "interface"} - set(doc)
        if missing:
            raise ConfigError(f"scenario is missing {sorted(missing)}")
        return cls(**doc)

    @classmethod
    def load(cls, path: str | Path) -> "ScenarioConfig":
        doc = _read_json(Path(path))
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: scenario must be a JSON object")
        return cls.from_mapping(doc)

    def interface_key(self) -> InterfaceKey:
        interface = parse_interface(self.interface)
        if self.protocol_variant is None:
            variants = VARIANTS_BY_INTERFACE[interface]
            if len(variants) != 1:
                names = [v.value for v in variants]
                raise ConfigError(f"{interface.value} needs a protocol variant (one of {names})")
            variant = variants[0]
        else:
            variant = parse_variant(self.protocol_variant)
        return InterfaceKey(interface, variant, self.plc_id, int(self.payload_class))

    def resolve(self, data: ModelData) -> OffloadScenario:
        plc = data.device(self.plc_id)
        if self.edge_id is None:
            edges = data.edge_devices()
            if len(edges) != 1:
                raise ConfigError("edge device is ambiguous; set edge_id")
            edge = edges[0]
        else:
            edge = data.device(self.edge_id)
        if self.comm_profile is not None:
            comm = data.comm_profile(self.comm_profile)
        elif self.comm_system is not None:
            comm = data.find_comm(parse_comm_system(self.comm_system), parse_load(self.load_condition))
        else:
            raise ConfigError("scenario needs comm_system or comm_profile")
        key = self.interface_key()
        data.catalog.lookup_update_time(key)
        return OffloadScenario(
            plc=plc,
            edge=edge,
            interface_key=key,
            comm=comm,
            wired=data.wired,
            overhead=data.overhead,
            rtt_statistic=_enum_value(RttStatistic, self.rtt_statistic),
            catalog=data.catalog,
        )
