"""Soft-threshold bridge with its own matrix-based orthonormal cosine transform.

Independent of the package's transform path on purpose: used for the
cross-implementation comparison test.
"""

import math
import struct
import sys

import numpy as np

HEADER = struct.Struct("<4sBIId")


def dct_matrix(n):
    mat = np.zeros((n, n))
    for k in range(n):
        scale = math.sqrt((1.0 if k == 0 else 2.0) / n)
        for i in range(n):
            mat[k, i] = scale * math.cos(math.pi * (2 * i + 1) * k / (2 * n))
    return mat


def main():
    stdin = sys.stdin.buffer
    stdout = sys.stdout.buffer
    while True:
        head = stdin.read(HEADER.size)
        if not head:
            return 0
        magic, version, h, w, strength = HEADER.unpack(head)
        if magic != b"PNPD" or version != 1:
            print("malformed request header", file=sys.stderr)
            return 2
        payload = stdin.read(h * w * 8)
        if len(payload) != h * w * 8:
            print("short request payload", file=sys.stderr)
            return 2
        v = np.frombuffer(payload, dtype="<f8").reshape(h, w)
        ch = dct_matrix(h)
        cw = dct_matrix(w)
        coeffs = ch @ v @ cw.T
        shrunk = np.sign(coeffs) * np.maximum(np.abs(coeffs) - strength, 0.0)
        out = ch.T @ shrunk @ cw
        stdout.write(b"PNPR" + bytes([version]) + out.astype("<f8").tobytes())
        stdout.flush()


if __name__ == "__main__":
    sys.exit(main())
