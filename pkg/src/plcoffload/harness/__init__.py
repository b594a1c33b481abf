"""UDP round-trip measurement harness: echo responder, probe, load generator."""

from .echo import EchoResponder, parse_address, run_echo_responder
from .export import export_profile, read_samples_csv, write_samples_csv
from .loadgen import LoadGenConfig, LoadGenReport, run_load_generator, run_load_generators
from .probe import ProbeConfig, ProbeResult, ProbeSample, ProbeStatus, run_probe

__all__ = [
    "EchoResponder",
    "LoadGenConfig",
    "LoadGenReport",
    "ProbeConfig",
    "ProbeResult",
    "ProbeSample",
    "ProbeStatus",
    "export_profile",
    "parse_address",
    "read_samples_csv",
    "run_echo_responder",
    "run_load_generator",
    "run_load_generators",
    "run_probe",
    "write_samples_csv",
]
