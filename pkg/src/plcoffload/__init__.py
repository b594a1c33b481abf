"""Break-even analysis for offloading PLC computation to an edge node."""

from .breakeven import (
    BreakEvenResult,
    BreakEvenTable,
    OffloadScenario,
    break_even,
    generate_table,
    is_beneficial,
    offload_time,
)
from .comm_catalog import Interface, InterfaceCatalog, InterfaceKey, ProtocolVariant, default_catalog
from .config import ModelData, ScenarioConfig, load_model_data
from .device_model import DeviceProfile, check_stop, delta_cycle, fit_constant, simulate_ramp
from .network_model import (
    CommSystem,
    CommSystemProfile,
    FactoryNetworkSpec,
    LoadCondition,
    RttStatistic,
    VirtualizationOverheadSpec,
    summarize_rtt,
    total_network_delay,
    virtualization_overhead,
    wired_network_delay,
)
from .workload import WorkloadSpec, flop_count, leibniz_estimate, required_n_for_digits

__version__ = "0.1.0"
