"""Background UDP traffic generator paced by a token bucket."""

from __future__ import annotations

import socket
import threading
import time
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class LoadGenConfig:
    target: tuple[str, int]
    bandwidth_bps: float  # bytes per second
    packet_size: int = 1024
    duration_s: float = 10.0
    burst_bytes: int | None = None

    def __post_init__(self) -> None:
        if not self.bandwidth_bps > 0:
            raise ValueError("bandwidth must be > 0")
        if self.packet_size < 1:
            raise ValueError("packet_size must be >= 1")
        if self.duration_s < 0:
            raise ValueError("duration must be >= 0")


@dataclass
class LoadGenReport:
    packets_sent: int
    bytes_sent: int
    send_errors: int
    elapsed_s: float

    @property
    def achieved_bps(self) -> float:
        return self.bytes_sent / self.elapsed_s if self.elapsed_s > 0 else 0.0


def run_load_generator(config: LoadGenConfig, stop: threading.Event | None = None) -> LoadGenReport:
    """Transmit at ``bandwidth_bps`` for ``duration_s`` seconds.

    The bucket starts empty, so the first packet leaves after one packet's
    worth of tokens has accumulated. Send errors are counted and the
    generator keeps going.
    """
    if config.duration_s == 0:
        return LoadGenReport(0, 0, 0, 0.0)

    rate = float(config.bandwidth_bps)
    size = config.packet_size
    capacity = max(size, config.burst_bytes or 0)
    payload = bytes(size)
    family = socket.AF_INET6 if ":" in config.target[0] else socket.AF_INET

    packets = sent = errors = 0
    tokens = 0.0
    with socket.socket(family, socket.SOCK_DGRAM) as sock:
        start = last = time.monotonic()
        end = start + config.duration_s
        while True:
            now = time.monotonic()
            if now >= end or (stop is not None and stop.is_set()):
                break
            tokens = min(capacity, tokens + (now - last) * rate)
            last = now
            if tokens < size:
                time.sleep(min((size - tokens) / rate, end - now))
                continue
            tokens -= size
            try:
                sock.sendto(payload, config.target)
                packets += 1
                sent += size
            except OSError:
                errors += 1
        elapsed = time.monotonic() - start
    return LoadGenReport(packets, sent, errors, elapsed)


def run_load_generators(configs: Sequence[LoadGenConfig]) -> list[LoadGenReport]:
    """Run independent generators concurrently, one thread each."""
    reports: list[LoadGenReport | None] = [None] * len(configs)

    def work(i: int) -> None:
        reports[i] = run_load_generator(configs[i])

    threads = [threading.Thread(target=work, args=(i,), daemon=True) for i in range(len(configs))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return [r for r in reports if r is not None]
