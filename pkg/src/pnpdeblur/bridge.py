"""Client side of the external-denoiser wire protocol.

A bridge is any subprocess that answers binary requests on its standard
streams: request = ``PNPD`` + version byte 0x01 + height (u32 LE) + width
(u32 LE) + strength (f64 LE) + height*width pixels (f64 LE, row-major);
response = ``PNPR`` + version byte + the same-shape pixel payload. The
bridge must flush after every response. One session owns one subprocess;
exchanges are serialized internally so a session-backed denoiser can be
handed to a solver run as-is.
"""

import shlex
import struct
import subprocess
import threading

import numpy as np

from .errors import BridgeError, ProtocolError
from .grid import ImageGrid
from .proximal import Denoiser

__all__ = [
    "MAGIC_REQUEST",
    "MAGIC_RESPONSE",
    "PROTOCOL_VERSION",
    "BridgeSession",
    "external_denoise",
    "external_bridge_denoiser",
]

MAGIC_REQUEST = b"PNPD"
MAGIC_RESPONSE = b"PNPR"
PROTOCOL_VERSION = 1

_HEADER = struct.Struct("<4sBIId")


def encode_request(v: ImageGrid, strength: float) -> bytes:
    h, w = v.shape
    payload = np.ascontiguousarray(v, dtype="<f8").tobytes()
    return _HEADER.pack(MAGIC_REQUEST, PROTOCOL_VERSION, h, w, float(strength)) + payload


class BridgeSession:
    """A live bridge subprocess plus the request/response bookkeeping."""

    def __init__(self, command):
        if isinstance(command, str):
            command = shlex.split(command)
        self.command = list(command)
        self._lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
            )
        except OSError as exc:
            raise BridgeError(f"cannot launch bridge {self.command}: {exc}") from exc

    def _fail(self, reason: str):
        """Classify a stream failure: crashed bridge vs corrupt stream."""
        diag = b""
        rc = self._proc.poll()
        if rc is None:
            self._proc.kill()
        try:
            _, diag = self._proc.communicate(timeout=5)
        except Exception:
            pass
        rc = self._proc.returncode
        detail = diag.decode(errors="replace").strip()
        if rc is not None and rc > 0:
            raise BridgeError(
                f"bridge {self.command[0]!r} exited with status {rc}: {detail or reason}"
            )
        raise ProtocolError(f"bridge {self.command[0]!r}: {reason}" + (f" [{detail}]" if detail else ""))

    def _read_exact(self, n: int) -> bytes:
        chunks = []
        remaining = n
        while remaining > 0:
            chunk = self._proc.stdout.read(remaining)
            if not chunk:
                self._fail(f"short read: expected {n} more bytes, stream ended")
            chunks.append(chunk)
            remaining -= len(chunk)
        return b"".join(chunks)

    def denoise(self, v: ImageGrid, strength: float) -> ImageGrid:
        """One request/response exchange; returns the same-shape grid."""
        h, w = v.shape
        with self._lock:
            try:
                self._proc.stdin.write(encode_request(v, strength))
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError):
                self._fail("request pipe closed")
            header = self._read_exact(5)
            if header[:4] != MAGIC_RESPONSE:
                self._fail(f"bad response magic {header[:4]!r}")
            if header[4] != PROTOCOL_VERSION:
                self._fail(f"unsupported protocol version {header[4]}")
            payload = self._read_exact(h * w * 8)
        out = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(h, w)
        if not np.isfinite(out).all():
            raise ProtocolError(f"bridge {self.command[0]!r} returned non-finite values")
        return out

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except Exception:
                self._proc.kill()
                self._proc.wait()
        for stream in (self._proc.stdout, self._proc.stderr):
            try:
                stream.close()
            except Exception:
                pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def external_denoise(command, v: ImageGrid, strength: float) -> ImageGrid:
    """One-shot exchange: launch, denoise one grid, shut down."""
    with BridgeSession(command) as session:
        return session.denoise(v, strength)


def external_bridge_denoiser(command) -> tuple[Denoiser, BridgeSession]:
    """Wrap a persistent session as a Denoiser; caller closes the session."""
    session = BridgeSession(command)
    d = Denoiser(
        name=f"external:{session.command[0]}",
        claims_firmly_nonexpansive=False,
        fn=session.denoise,
    )
    return d, session
