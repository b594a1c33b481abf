import dataclasses

import pytest
from hypothesis import assume, given, strategies as st

from plcoffload.breakeven import (
    DEFAULT_COLUMNS,
    OffloadScenario,
    break_even,
    generate_table,
    is_beneficial,
    offload_time,
    round_half_up,
)
from plcoffload.comm_catalog import Interface, InterfaceKey, ProtocolVariant
from plcoffload.device_model import DeviceProfile, Role
from plcoffload.errors import ConfigError, NoBreakEvenError
from plcoffload.network_model import FactoryNetworkSpec, VirtualizationOverheadSpec


def scenario(data, plc="S7-314", interface=Interface.OUC, variant=ProtocolVariant.UDP, payload=1,
             comm="ethernet-no-load", **changes):
    s = OffloadScenario(
        plc=data.device(plc),
        edge=data.device("mini-pc"),
        interface_key=InterfaceKey(interface, variant, plc, payload),
        comm=data.comm_profile(comm),
        wired=data.wired,
        overhead=data.overhead,
        catalog=data.catalog,
    )
    return dataclasses.replace(s, **changes) if changes else s


def test_fixed_cost_components(data):
    s = scenario(data)
    assert s.t_network_us() == pytest.approx(570.0)
    assert s.t_update_us() == 1000.0
    assert s.t_overhead_us() == 4.0


def test_offload_time_at_zero_and_at_break_even(data):
    s = scenario(data)
    assert offload_time(s, 0) == pytest.approx(1574.0)
    assert offload_time(s, 78) == pytest.approx(1574.0 + 78 * 0.0349, abs=1e-9)


def test_offload_time_rejects_negative(data):
    with pytest.raises(ValueError):
        offload_time(scenario(data), -1)


@pytest.mark.parametrize("n, expected", [(0, False), (77, False), (79, True), (1000, True)])
def test_is_beneficial(data, n, expected):
    assert is_beneficial(scenario(data), n) is expected


@pytest.mark.parametrize(
    "kwargs, expected",
    [
        ({}, 78),
        ({"comm": "wifi-load"}, 5241),
        ({"plc": "S7-1512", "interface": Interface.OPCUA_PUBSUB, "variant": ProtocolVariant.UADP, "comm": "5g"}, 85),
        ({"plc": "S7-1512", "interface": Interface.LIBNODAVE, "variant": ProtocolVariant.ISO_ON_TCP, "comm": "5g"}, 93),
    ],
)
def test_break_even_examples(data, kwargs, expected):
    assert break_even(scenario(data, **kwargs)).n_be == expected


def test_break_even_fields(data):
    r = break_even(scenario(data))
    assert r.fixed_cost_us == pytest.approx(1574.0)
    assert r.denominator_us_per_n == pytest.approx(20.2 - 0.0349)
    assert r.n_be_exact == pytest.approx(1574.0 / (20.2 - 0.0349), rel=1e-12)


def test_no_break_even_when_edge_is_not_faster(data):
    s = scenario(data)
    same = dataclasses.replace(s, edge=DeviceProfile("clone", s.plc.c_ms_per_n, role=Role.EDGE))
    with pytest.raises(NoBreakEvenError):
        break_even(same)
    slower = dataclasses.replace(s, edge=DeviceProfile("slow", 1.0, role=Role.EDGE))
    with pytest.raises(NoBreakEvenError):
        break_even(slower)


def test_key_must_match_plc(data):
    with pytest.raises(ConfigError):
        OffloadScenario(
            plc=data.device("S7-1512"),
            edge=data.device("mini-pc"),
            interface_key=InterfaceKey(Interface.OUC, ProtocolVariant.UDP, "S7-314", 1),
            comm=data.comm_profile("5g"),
            wired=data.wired,
            overhead=data.overhead,
        )


@pytest.mark.parametrize("value, expected", [(0.5, 1), (1.49, 1), (2.5, 3), (77.9, 78), (0.0, 0)])
def test_round_half_up(value, expected):
    assert round_half_up(value) == expected


def test_5g_block(data):
    table = generate_table([data.comm_profile("5g")], data.devices, data.device("mini-pc"), data.wired, data.overhead,
                           catalog=data.catalog)
    assert len(table.rows) == 3 and table.populated_count() == 27
    assert table.find("5g", 1, "LIBNODAVE/ISO_ON_TCP@S7-1512").n_be == 93


def test_empty_comm_set(data):
    table = generate_table([], data.devices, data.device("mini-pc"), data.wired, data.overhead, catalog=data.catalog)
    assert table.rows == [] and table.populated_count() == 0 and list(table.results()) == []


def test_missing_statistic_is_stored_per_cell(data):
    table = generate_table(data.comm_profiles, data.devices, data.device("mini-pc"), data.wired, data.overhead,
                           catalog=data.catalog, statistic="max")
    assert table.populated_count() == 18 * len(DEFAULT_COLUMNS)
    assert isinstance(table.find("5g", 1, "OUC/UDP@S7-314"), str)


def test_unknown_column_device_is_stored_per_cell(data):
    devices = {k: v for k, v in data.devices.items() if k != "S7-314"}
    table = generate_table([data.comm_profile("5g")], devices, data.device("mini-pc"), data.wired, data.overhead,
                           catalog=data.catalog)
    assert "S7-314" in table.find("5g", 1, "OUC/UDP@S7-314")
    assert table.populated_count() == 3 * 6


# properties over arbitrary positive inputs
costs = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)
c_plc_ms = st.floats(min_value=1e-6, max_value=1.0)


def synthetic(c_plc, ratio, rtt_ms, hops, t_co, t_nio, data):
    base = scenario(data)
    return dataclasses.replace(
        base,
        plc=DeviceProfile(base.plc.id, c_plc),
        edge=DeviceProfile("edge", c_plc * ratio, role=Role.EDGE),
        comm=dataclasses.replace(base.comm, rtt_median_ms=rtt_ms, rtt_max_ms=None),
        wired=FactoryNetworkSpec(1000, hops, 7.5),
        overhead=VirtualizationOverheadSpec(t_co, t_nio),
    )


scenarios = st.builds(
    lambda c, r, rtt, z, co, nio: (c, r, rtt, z, co, nio),
    c_plc_ms,
    st.floats(min_value=1e-6, max_value=0.5),
    st.floats(min_value=0.0, max_value=5000.0),
    st.integers(min_value=0, max_value=50),
    costs,
    costs,
)


@given(scenarios)
def test_break_even_consistency(data, params):
    s = synthetic(*params, data)
    r = break_even(s)
    assert r.n_be_exact >= 0
    assert abs(r.n_be - r.n_be_exact) <= 0.5
    # the two lines meet at the exact break-even point
    local = r.c_plc_us * r.n_be_exact
    assert offload_time(s, r.n_be_exact) == pytest.approx(local, rel=1e-9, abs=1e-6)


@given(scenarios, st.floats(min_value=0.0, max_value=1e6))
def test_beneficial_only_past_break_even(data, params, margin):
    s = synthetic(*params, data)
    r = break_even(s)
    n_above = r.n_be_exact * (1 + 1e-6) + margin + 1
    assert is_beneficial(s, n_above)
    if r.n_be_exact > 1e-3:
        assert not is_beneficial(s, r.n_be_exact * (1 - 1e-6))


@given(scenarios, st.floats(min_value=0.0, max_value=1e5))
def test_monotone_in_fixed_cost(data, params, extra):
    c, ratio, rtt, z, co, nio = params
    lo = break_even(synthetic(c, ratio, rtt, z, co, nio, data))
    hi = break_even(synthetic(c, ratio, rtt, z, co + extra, nio, data))
    assert hi.n_be_exact >= lo.n_be_exact


@given(scenarios, st.floats(min_value=1.0, max_value=1e3))
def test_invariant_under_joint_scaling(data, params, k):
    c, ratio, rtt, z, co, nio = params
    base = break_even(synthetic(c, ratio, rtt, z, co, nio, data))
    # scaling the fixed cost and both per-n costs by k leaves n_be alone
    s = synthetic(c, ratio, rtt, z, co, nio, data)
    fixed = base.fixed_cost_us
    assume(fixed > 0)
    extra_co = fixed * (k - 1)
    scaled = dataclasses.replace(
        s,
        plc=DeviceProfile(s.plc.id, c * k),
        edge=DeviceProfile("edge", c * ratio * k, role=Role.EDGE),
        overhead=VirtualizationOverheadSpec(co + extra_co, nio),
    )
    assert break_even(scaled).n_be_exact == pytest.approx(base.n_be_exact, rel=1e-9)
