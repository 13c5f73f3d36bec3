"""Readers for the sampling toolkit's file formats.

The harness talks to the sampler exclusively through its CLI and files,
so the QLS1 batch format and the key=value sidecars are re-implemented
here rather than imported.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

_MAGIC = b"QLS1"


def read_qls(path) -> np.ndarray:
    """Read a QLS1 batch as float64 (i32 and f32 payloads both upcast)."""
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise ValueError(f"{path}: not a QLS1 file")
    version, rows, cols, code = struct.unpack("<IIII", raw[4:20])
    if version != 1:
        raise ValueError(f"{path}: unsupported QLS1 version {version}")
    dtype = {0: "<f4", 1: "<i4"}.get(code)
    if dtype is None:
        raise ValueError(f"{path}: unknown dtype code {code}")
    payload = np.frombuffer(raw[20:], dtype=dtype)
    if payload.size != rows * cols:
        raise ValueError(f"{path}: truncated payload for {rows} x {cols}")
    return payload.reshape(rows, cols).astype(np.float64)


def read_meta(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
