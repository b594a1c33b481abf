"""Timestamping UDP probe client.

Wire format of every probe datagram (big-endian)::

    offset 0   uint64  sequence number
    offset 8   uint64  send timestamp, monotonic nanoseconds
    offset 16  zero padding up to the configured payload size

A sender and a receiver thread share a pending table keyed by sequence
number. RTTs come exclusively from the injected monotonic clock.
"""

from __future__ import annotations

import enum
import logging
import socket
import struct
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

log = logging.getLogger(__name__)

HEADER = struct.Struct("!QQ")
_U64 = 2**64 - 1


class ProbeStatus(str, enum.Enum):
    RECEIVED = "received"
    LOST = "lost"
    # echo arrived after the timeout; not used for statistics
    LATE = "late"


@dataclass(frozen=True)
class ProbeConfig:
    target: tuple[str, int]
    sample_count: int = 10_000
    send_interval_s: float = 0.001
    payload_bytes: int = 4
    timeout_s: float = 1.0

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError("sample_count must be >= 1")
        if not self.send_interval_s > 0:
            raise ValueError("send_interval must be > 0")
        if not self.timeout_s > self.send_interval_s:
            raise ValueError("timeout must exceed send_interval")
        if self.payload_bytes < 0:
            raise ValueError("payload_bytes must be >= 0")

    @property
    def datagram_size(self) -> int:
        return max(HEADER.size, self.payload_bytes)


@dataclass(frozen=True)
class ProbeSample:
    seq: int
    rtt_us: float | None
    status: ProbeStatus

    def __post_init__(self) -> None:
        if (self.rtt_us is not None) != (self.status is ProbeStatus.RECEIVED):
            raise ValueError("rtt_us must be present exactly for received samples")
        if self.rtt_us is not None and not self.rtt_us > 0:
            raise ValueError(f"rtt_us must be > 0, got {self.rtt_us}")


@dataclass
class ProbeResult:
    samples: list[ProbeSample]
    duplicates: int = 0
    foreign: int = 0
    invalid_rtts: int = 0
    valid: bool = True
    error: str = ""
    sent_ns: list[int] = field(default_factory=list, repr=False)

    def count(self, status: ProbeStatus) -> int:
        return sum(s.status is status for s in self.samples)

    @property
    def received(self) -> int:
        return self.count(ProbeStatus.RECEIVED)

    @property
    def lost(self) -> int:
        return self.count(ProbeStatus.LOST)

    @property
    def discarded_late(self) -> int:
        return self.count(ProbeStatus.LATE)


def encode_probe(seq: int, send_ns: int, size: int) -> bytes:
    header = HEADER.pack(seq & _U64, send_ns & _U64)
    return header + bytes(max(0, size - HEADER.size))


def decode_probe(data: bytes) -> tuple[int, int]:
    if len(data) < HEADER.size:
        raise ValueError(f"probe datagram too short ({len(data)} bytes)")
    return HEADER.unpack_from(data)


class _PendingTable:
    """Send timestamps and outcomes, shared by the sender and receiver."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.sent: dict[int, int] = {}
        self.outcome: dict[int, tuple[ProbeStatus, int | None]] = {}
        self.duplicates = 0
        self.foreign = 0
        self.invalid = 0

    def register(self, seq: int, send_ns: int) -> None:
        with self._lock:
            self.sent[seq] = send_ns

    def resolve(self, seq: int, recv_ns: int, timeout_ns: int) -> None:
        with self._lock:
            send_ns = self.sent.get(seq)
            if send_ns is None:
                self.foreign += 1
            elif seq in self.outcome:
                self.duplicates += 1
            elif recv_ns - send_ns > timeout_ns:
                self.outcome[seq] = (ProbeStatus.LATE, None)
            elif recv_ns <= send_ns:
                # a non-advancing clock cannot yield a usable RTT
                self.invalid += 1
            else:
                self.outcome[seq] = (ProbeStatus.RECEIVED, recv_ns - send_ns)

    def note_foreign(self) -> None:
        with self._lock:
            self.foreign += 1

    def outstanding(self) -> int:
        with self._lock:
            return len(self.sent) - len(self.outcome)


def run_probe(
    config: ProbeConfig,
    clock: Callable[[], int] = time.monotonic_ns,
    sleep: Callable[[float], None] = time.sleep,
) -> ProbeResult:
    """Send ``sample_count`` probes at a fixed interval and collect RTTs.

    Unanswered probes are reported lost once ``timeout_s`` has passed after
    the last send. A socket failure stops the run; the partial result is
    returned with ``valid=False``.
    """
    family = socket.AF_INET6 if ":" in config.target[0] else socket.AF_INET
    sock = socket.socket(family, socket.SOCK_DGRAM)
    sock.settimeout(0.02)
    table = _PendingTable()
    stop = threading.Event()
    timeout_ns = int(config.timeout_s * 1e9)
    receiver_error: list[BaseException] = []

    def receive() -> None:
        while not stop.is_set():
            try:
                data = sock.recv(65535)
            except socket.timeout:
                continue
            except ConnectionRefusedError:
                continue
            except OSError as exc:
                if not stop.is_set():
                    receiver_error.append(exc)
                return
            recv_ns = clock()
            try:
                seq, _ = decode_probe(data)
            except ValueError:
                table.note_foreign()
                continue
            table.resolve(seq, recv_ns, timeout_ns)

    receiver = threading.Thread(target=receive, name="probe-receiver", daemon=True)
    receiver.start()

    interval_ns = int(config.send_interval_s * 1e9)
    size = config.datagram_size
    sent_ns: list[int] = []
    error = ""
    try:
        start_ns = clock()
        for seq in range(config.sample_count):
            delay_ns = start_ns + seq * interval_ns - clock()
            if delay_ns > 0:
                sleep(delay_ns / 1e9)
            send_ns = clock()
            table.register(seq, send_ns)
            try:
                sock.sendto(encode_probe(seq, send_ns, size), config.target)
            except ConnectionRefusedError:
                pass
            sent_ns.append(send_ns)
            if receiver_error:
                raise receiver_error[0]
        deadline = clock() + timeout_ns
        while table.outstanding() and clock() < deadline:
            sleep(min(0.01, config.timeout_s))
    except OSError as exc:
        error = f"socket failure after {len(sent_ns)} probes: {exc}"
        log.warning(error)
    finally:
        stop.set()
        receiver.join(timeout=1)
        sock.close()

    samples = []
    with table._lock:
        for seq in sorted(table.sent):
            status, rtt_ns = table.outcome.get(seq, (ProbeStatus.LOST, None))
            samples.append(ProbeSample(seq, None if rtt_ns is None else rtt_ns / 1e3, status))
    return ProbeResult(
        samples=samples,
        duplicates=table.duplicates,
        foreign=table.foreign,
        invalid_rtts=table.invalid,
        valid=not error,
        error=error,
        sent_ns=sent_ns,
    )
