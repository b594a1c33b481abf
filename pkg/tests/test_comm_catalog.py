import json

import pytest

from plcoffload.comm_catalog import (
    Interface,
    InterfaceCatalog,
    InterfaceKey,
    ProtocolVariant,
    default_catalog,
    list_supported,
    lookup_update_time,
)
from plcoffload.errors import ConfigError, InterfaceUnsupportedError, NotFoundError

PUBLISHED = {
    ("OUC", "UDP", "S7-314"): ("1.00", "1.00", "1.00"),
    ("OUC", "UDP", "S7-1512"): ("3.61", "3.60", "3.63"),
    ("OUC", "TCP", "S7-314"): ("1.01", "1.04", "1.02"),
    ("OUC", "TCP", "S7-1512"): ("3.77", "3.78", "3.83"),
    ("LIBNODAVE", "ISO_ON_TCP", "S7-314"): ("2.00", "2.00", "4.00"),
    ("LIBNODAVE", "ISO_ON_TCP", "S7-1512"): ("1.32", "1.32", "1.40"),
    ("OPCUA_SERVER_CLIENT", "UATCP_WRITE", "S7-1512"): ("6.83", "7.36", "16.56"),
    ("OPCUA_SERVER_CLIENT", "UATCP_READ", "S7-1512"): ("9.11", "30.35", "246.1"),
    ("OPCUA_PUBSUB", "UADP", "S7-1512"): ("1.02", "1.26", "2.30"),
}


@pytest.mark.parametrize("iface, variant, device", list(PUBLISHED))
def test_shipped_values(iface, variant, device):
    for pc, text in zip((1, 10, 100), PUBLISHED[(iface, variant, device)]):
        entry = lookup_update_time(InterfaceKey(iface, variant, device, pc))
        assert entry.t_update_text == text
        assert entry.t_update_ms == float(text)


def test_examples():
    assert lookup_update_time(InterfaceKey("OUC", "UDP", "S7-314", 1)).t_update_ms == 1.0
    assert lookup_update_time(InterfaceKey("LIBNODAVE", "ISO_ON_TCP", "S7-314", 100)).t_update_us == 4000.0
    with pytest.raises(InterfaceUnsupportedError):
        lookup_update_time(InterfaceKey("OPCUA_PUBSUB", "UADP", "S7-314", 10))


@pytest.mark.parametrize("variant", ["UATCP_WRITE", "UATCP_READ"])
def test_server_client_unsupported_on_s7_314(variant):
    with pytest.raises(InterfaceUnsupportedError):
        lookup_update_time(InterfaceKey("OPCUA_SERVER_CLIENT", variant, "S7-314", 1))


def test_estimated_flag_only_on_pubsub_100():
    estimated = [e.key for e in default_catalog() if e.estimated]
    assert estimated == [InterfaceKey("OPCUA_PUBSUB", "UADP", "S7-1512", 100)]


def test_list_supported():
    s314 = list_supported("S7-314")
    assert len(s314) == 9
    assert {k.protocol_variant for k in s314} == {ProtocolVariant.UDP, ProtocolVariant.TCP, ProtocolVariant.ISO_ON_TCP}
    assert [k.payload_class for k in s314[:3]] == [1, 10, 100]
    assert len(list_supported("S7-1512")) == 18
    with pytest.raises(NotFoundError):
        list_supported("unknown-device")


def test_list_supported_is_deterministic():
    keys = list_supported("S7-1512")
    order = [(list(Interface).index(k.interface), list(ProtocolVariant).index(k.protocol_variant), k.payload_class) for k in keys]
    assert order == sorted(order)


def test_unknown_device_lookup():
    with pytest.raises(NotFoundError):
        lookup_update_time(InterfaceKey("OUC", "UDP", "S7-1200", 1))


@pytest.mark.parametrize(
    "args",
    [
        ("OUC", "UADP", "S7-314", 1),
        ("OPCUA_PUBSUB", "TCP", "S7-1512", 1),
        ("OUC", "UDP", "S7-314", 50),
        ("PROFINET", "UDP", "S7-314", 1),
    ],
)
def test_malformed_keys(args):
    with pytest.raises(ConfigError):
        InterfaceKey(*args)


def test_round_trip_is_textually_identical():
    catalog = default_catalog()
    reloaded = InterfaceCatalog.from_dict(json.loads(catalog.dumps()))
    assert reloaded.dumps() == catalog.dumps()
    for a, b in zip(catalog, reloaded):
        assert (a.key, a.t_update_text, a.estimated, a.note) == (b.key, b.t_update_text, b.estimated, b.note)


def test_every_pair_has_all_payload_classes():
    catalog = default_catalog()
    pairs = {(k.device_id, k.interface, k.protocol_variant) for k in catalog.keys()}
    for device, iface, variant in pairs:
        for pc in (1, 10, 100):
            catalog.lookup_update_time(InterfaceKey(iface, variant, device, pc))


def test_incomplete_catalog_rejected():
    doc = {"interfaces": {"X": {"OUC": {"UDP": {"1": {"t_update_ms": "1"}, "10": {"t_update_ms": "1"}}}}}}
    with pytest.raises(ConfigError, match="payload class 100"):
        InterfaceCatalog.from_dict(doc)


@pytest.mark.parametrize("value", ["0", "-1", "abc"])
def test_nonpositive_update_time_rejected(value):
    cells = {str(pc): {"t_update_ms": value} for pc in (1, 10, 100)}
    with pytest.raises(ConfigError):
        InterfaceCatalog.from_dict({"interfaces": {"X": {"OUC": {"UDP": cells}}}})


def test_override_merge_preserves_flags():
    catalog = default_catalog()
    merged = catalog.merged(
        {"S7-1512": {"OPCUA_PUBSUB": {"UADP": {"100": {"t_update_ms": "2.05", "estimated": False}}}}}
    )
    key = InterfaceKey("OPCUA_PUBSUB", "UADP", "S7-1512", 100)
    assert merged.lookup_update_time(key).t_update_text == "2.05"
    assert not merged.lookup_update_time(key).estimated
    assert catalog.lookup_update_time(key).estimated
    other = InterfaceKey("OPCUA_PUBSUB", "UADP", "S7-1512", 10)
    assert merged.lookup_update_time(other) == catalog.lookup_update_time(other)
