"""Command-line interface.

Exit status: 0 success, 2 usage error, 3 resolution error (unknown device,
profile, unsupported interface, bad config), 4 model error (no break-even,
missing statistic, no data), 5 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .breakeven import BreakEvenResult, BreakEvenTable, break_even, generate_table
from .config import ModelData, ScenarioConfig, load_model_data, parse_comm_system, parse_load
from .device_model import simulate_ramp
from .errors import ModelError, NoDataError, ResolutionError
from .harness import (
    EchoResponder,
    LoadGenConfig,
    ProbeConfig,
    export_profile,
    parse_address,
    read_samples_csv,
    run_load_generators,
    run_probe,
    write_samples_csv,
)
from .network_model import CommSystemProfile, write_profile
from .report import exact_csv, heatmap_csv, ramp_csv, table_csv, write_text
from .units import us_to_ms

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOLUTION = 3
EXIT_MODEL = 4
EXIT_IO = 5

log = logging.getLogger("plcoffload")


def cmd_calc(data: ModelData, config: ScenarioConfig, out: TextIO | None = None) -> BreakEvenResult:
    out = out or sys.stdout
    scenario = config.resolve(data)
    result = break_even(scenario)
    key = scenario.interface_key
    rows = [
        ("t_network", result.t_network_us),
        ("t_update", result.t_update_us),
        ("t_overhead", result.t_overhead_us),
        ("c_plc", result.c_plc_us),
        ("c_edge", result.c_edge_us),
        ("c_plc - c_edge", result.denominator_us_per_n),
    ]
    print(f"scenario   {scenario.plc.id} -> {scenario.edge.id}, {key.label()}, "
          f"{key.payload_class} value(s), {scenario.comm.name} ({scenario.rtt_statistic.value} RTT)", file=out)
    print(f"n_be       {result.n_be}", file=out)
    print(f"n_be_exact {result.n_be_exact:.6f}", file=out)
    for name, value_us in rows:
        unit = " per n" if name.startswith("c") else ""
        print(f"{name:<15}{value_us:>16.6f} us{unit}  {us_to_ms(value_us):>14.9f} ms{unit}", file=out)
    return result


def cmd_table(
    data: ModelData,
    out_path: str | Path,
    exact_out_path: str | Path,
    heatmap_out_path: str | Path,
    comm_names: Sequence[str] | None = None,
    statistic: str = "median",
) -> BreakEvenTable:
    profiles = data.comm_profiles if comm_names is None else [data.comm_profile(n) for n in comm_names]
    edges = data.edge_devices()
    if len(edges) != 1:
        raise ResolutionError("table generation needs exactly one edge device")
    table = generate_table(
        profiles,
        data.devices,
        edges[0],
        data.wired,
        data.overhead,
        catalog=data.catalog,
        statistic=statistic,
    )
    for path, text in (
        (out_path, table_csv(table)),
        (exact_out_path, exact_csv(table)),
        (heatmap_out_path, heatmap_csv(table)),
    ):
        try:
            write_text(path, text)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    return table


def cmd_ramp(data: ModelData, device_id: str, n_end: int, step: int, out_path: str | Path | None, n_start: int = 0):
    if step < 1:
        raise ValueError("step must be >= 1")
    records = simulate_ramp(data.device(device_id), n_start, step, n_end)
    text = ramp_csv(records)
    if out_path is None or str(out_path) == "-":
        sys.stdout.write(text)
    else:
        write_text(out_path, text)
    return records


def cmd_import_rtt(samples_csv: str | Path, system: str, load: str, out_path: str | Path, name: str | None = None) -> CommSystemProfile:
    samples = read_samples_csv(samples_csv)
    if not samples:
        raise NoDataError(f"{samples_csv}: no samples")
    profile = export_profile(samples, parse_comm_system(system), parse_load(load), name=name)
    write_profile(profile, out_path)
    return profile


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plcoffload", description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", help="directory with devices/interfaces/comm_systems/factory JSON")
    parser.add_argument("--override", action="append", default=[], metavar="FILE",
                        help="JSON override merged over the data files (repeatable)")
    parser.add_argument("--statistic", choices=["median", "max"],
                        help="RTT statistic used for the network delay (default: median)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calc", help="break-even point for one scenario")
    p.add_argument("--config", help="scenario JSON document")
    p.add_argument("--plc")
    p.add_argument("--edge")
    p.add_argument("--interface", help="OUC, LIBNODAVE, OPCUA_SERVER_CLIENT, OPCUA_PUBSUB")
    p.add_argument("--variant", help="UDP, TCP, ISO_ON_TCP, UATCP_WRITE, UATCP_READ, UADP")
    p.add_argument("--payload", type=int, default=1, choices=[1, 10, 100])
    p.add_argument("--comm-system", default="ethernet", help="ethernet, wifi, 4g, 5g")
    p.add_argument("--load", default="no-load", help="load, no-load, unspecified")
    p.add_argument("--comm", metavar="NAME", help="comm-system profile by name (overrides --comm-system/--load)")

    p = sub.add_parser("table", help="full break-even grid and heatmap CSVs")
    p.add_argument("--out", default="breakeven.csv")
    p.add_argument("--exact-out", default="breakeven_exact.csv")
    p.add_argument("--heatmap-out", default="heatmap.csv")
    p.add_argument("--comm", action="append", metavar="NAME", help="restrict to these profiles (repeatable)")

    p = sub.add_parser("ramp", help="cycle-time ramp CSV for one device")
    p.add_argument("--device", required=True)
    p.add_argument("--n-end", type=int, required=True)
    p.add_argument("--step", type=int, default=1000)
    p.add_argument("--n-start", type=int, default=0)
    p.add_argument("--out", default="-")

    p = sub.add_parser("import-rtt", help="summarize a samples CSV into a comm-system profile")
    p.add_argument("samples_csv")
    p.add_argument("--system", required=True)
    p.add_argument("--load", required=True)
    p.add_argument("--name")
    p.add_argument("--out", required=True)

    p = sub.add_parser("measure", help="probe an echo responder and record RTT samples")
    p.add_argument("--target", required=True, metavar="HOST:PORT")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--interval-us", type=int, default=1000)
    p.add_argument("--payload-bytes", type=int, default=4)
    p.add_argument("--timeout-ms", type=float, default=1000.0)
    p.add_argument("--out", required=True, help="samples CSV")
    p.add_argument("--profile-out", help="also write a comm-system profile")
    p.add_argument("--system", default="ethernet")
    p.add_argument("--load", default="no-load")

    p = sub.add_parser("echo-server", help="run a UDP echo responder")
    p.add_argument("--listen", default="0.0.0.0:9000", metavar="HOST:PORT")
    p.add_argument("--max-datagram", type=int, default=1472)

    p = sub.add_parser("loadgen", help="paced UDP background traffic")
    p.add_argument("--target", required=True, metavar="HOST:PORT")
    p.add_argument("--rate", type=float, required=True, help="bytes per second per generator")
    p.add_argument("--seconds", type=float, default=10.0)
    p.add_argument("--packet-size", type=int, default=1024)
    p.add_argument("--parallel", type=int, default=1, help="number of concurrent generators")
    return parser


def _scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        config = ScenarioConfig.load(args.config)
    else:
        if not args.plc or not args.interface:
            raise ValueError("calc needs --config or both --plc and --interface")
        config = ScenarioConfig(
            plc_id=args.plc,
            interface=args.interface,
            protocol_variant=args.variant,
            payload_class=args.payload,
            comm_system=args.comm_system,
            load_condition=args.load,
            comm_profile=args.comm,
            edge_id=args.edge,
        )
    if args.statistic:
        config.rtt_statistic = args.statistic
    return config


def _dispatch(args: argparse.Namespace) -> int:
    if args.command in {"calc", "table", "ramp"}:
        overrides = list(args.override)
        config = _scenario_from_args(args) if args.command == "calc" else None
        if config is not None:
            overrides = list(config.overrides) + overrides
        data = load_model_data(args.data_dir, overrides)
        if args.command == "calc":
            cmd_calc(data, config)
        elif args.command == "table":
            table = cmd_table(data, args.out, args.exact_out, args.heatmap_out, args.comm, args.statistic or "median")
            print(f"wrote {table.populated_count()} cells to {args.out}, {args.exact_out}, {args.heatmap_out}")
        else:
            cmd_ramp(data, args.device, args.n_end, args.step, args.out, args.n_start)
    elif args.command == "import-rtt":
        profile = cmd_import_rtt(args.samples_csv, args.system, args.load, args.out, args.name)
        print(f"wrote profile {profile.name!r} (median {profile.rtt_median_ms:.6f} ms) to {args.out}")
    elif args.command == "measure":
        config = ProbeConfig(
            target=parse_address(args.target),
            sample_count=args.samples,
            send_interval_s=args.interval_us / 1e6,
            payload_bytes=args.payload_bytes,
            timeout_s=args.timeout_ms / 1e3,
        )
        result = run_probe(config)
        write_samples_csv(result.samples, args.out)
        print(f"received {result.received}, lost {result.lost}, late {result.discarded_late}, "
              f"duplicates {result.duplicates}")
        if args.profile_out:
            profile = export_profile(result.samples, parse_comm_system(args.system), parse_load(args.load))
            write_profile(profile, args.profile_out)
        if not result.valid:
            print(f"error: {result.error}", file=sys.stderr)
            return EXIT_IO
    elif args.command == "echo-server":
        responder = EchoResponder(parse_address(args.listen, "0.0.0.0"), args.max_datagram)
        print(f"echo responder on {responder.address[0]}:{responder.address[1]}", flush=True)
        try:
            responder.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            responder.sock.close()
        c = responder.counters
        print(f"echoed {c.echoed}, dropped {c.dropped_oversize}")
    elif args.command == "loadgen":
        target = parse_address(args.target)
        configs = [LoadGenConfig(target, args.rate, args.packet_size, args.seconds) for _ in range(args.parallel)]
        for i, report in enumerate(run_load_generators(configs)):
            print(f"generator {i}: {report.packets_sent} packets, {report.bytes_sent} bytes, "
                  f"{report.achieved_bps:.1f} B/s, {report.send_errors} send errors")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _dispatch(args)
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
