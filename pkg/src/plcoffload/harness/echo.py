"""UDP echo responder used as the far end of RTT probes."""

from __future__ import annotations

import logging
import socket
import threading
from dataclasses import dataclass

log = logging.getLogger(__name__)

DEFAULT_MAX_DATAGRAM = 1472  # fits a 1500-byte Ethernet MTU


def parse_address(text: str, default_host: str = "127.0.0.1") -> tuple[str, int]:
    """Parse ``host:port`` (or bare ``port``) into a socket address."""
    host, sep, port = text.rpartition(":")
    if not sep:
        host, port = default_host, text
    host = host.strip("[]") or default_host
    try:
        return host, int(port)
    except ValueError:
        raise ValueError(f"invalid address {text!r}, expected HOST:PORT") from None


@dataclass
class EchoCounters:
    echoed: int = 0
    dropped_oversize: int = 0
    send_errors: int = 0


class EchoResponder:
    """Echo every datagram back to its sender, unchanged.

    Datagrams longer than ``max_datagram`` bytes are dropped and counted.
    """

    def __init__(self, listen: tuple[str, int], max_datagram: int = DEFAULT_MAX_DATAGRAM):
        self.max_datagram = max_datagram
        self.counters = EchoCounters()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        family = socket.AF_INET6 if ":" in listen[0] else socket.AF_INET
        self.sock = socket.socket(family, socket.SOCK_DGRAM)
        try:
            self.sock.bind(listen)
        except OSError as exc:
            self.sock.close()
            raise OSError(exc.errno, f"cannot bind echo responder to {listen[0]}:{listen[1]}: {exc.strerror}") from exc
        self.sock.settimeout(0.05)

    @property
    def address(self) -> tuple[str, int]:
        return self.sock.getsockname()[:2]

    def serve_forever(self) -> None:
        # one extra byte tells an oversized datagram apart from a full one
        bufsize = self.max_datagram + 1
        while not self._stop.is_set():
            try:
                data, peer = self.sock.recvfrom(bufsize)
            except socket.timeout:
                continue
            except OSError:
                if self._stop.is_set():
                    break
                raise
            if len(data) > self.max_datagram:
                self.counters.dropped_oversize += 1
                continue
            try:
                self.sock.sendto(data, peer)
                self.counters.echoed += 1
            except OSError as exc:
                self.counters.send_errors += 1
                log.debug("echo to %s failed: %s", peer, exc)

    def start(self) -> "EchoResponder":
        self._thread = threading.Thread(target=self.serve_forever, name="echo-responder", daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2)
        self.sock.close()

    def __enter__(self) -> "EchoResponder":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def run_echo_responder(listen: tuple[str, int], max_datagram: int = DEFAULT_MAX_DATAGRAM) -> EchoCounters:
    """Serve in the foreground until interrupted; returns the final counters."""
    responder = EchoResponder(listen, max_datagram)
    log.info("echo responder listening on %s:%d", *responder.address)
    try:
        responder.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        responder.sock.close()
    return responder.counters
