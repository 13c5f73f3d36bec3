"""File formats: QUM1 unitaries, QLS1 sample batches, CSV and key=value sidecars.

QUM1: magic ``QUM1`` | u32 N | N*N complex128 entries as interleaved
(re, im) little-endian f64, row-major.  Round-trips bit-exactly.

QLS1: magic ``QLS1`` | u32 version=1 | u32 rows | u32 cols | u32 dtype
(0 = f32, 1 = i32) | row-major payload, little-endian.

Sidecars are plain ``key=value`` text files, one pair per line, keys
sorted; they carry provenance and run metadata and never contain
timestamps, so identical runs produce identical bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .linalg import validate_unitary

QUM1_MAGIC = b"QUM1"
QLS1_MAGIC = b"QLS1"
QLS1_VERSION = 1
QLS1_F32 = 0
QLS1_I32 = 1


def write_unitary(path, u: np.ndarray) -> None:
    u = validate_unitary(u)
    n = u.shape[0]
    payload = np.ascontiguousarray(u, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(QUM1_MAGIC)
        fh.write(struct.pack("<I", n))
        fh.write(payload)


def read_unitary(path, validate: bool = True) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != QUM1_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {QUM1_MAGIC!r}")
        (n,) = struct.unpack("<I", fh.read(4))
        data = fh.read(16 * n * n)
    if len(data) != 16 * n * n:
        raise ValueError(f"{path}: truncated payload for N = {n}")
    u = np.frombuffer(data, dtype="<c16").reshape(n, n).astype(np.complex128)
    if validate:
        validate_unitary(u)
    return u


def write_samples(path, samples: np.ndarray, dtype: str = "i32") -> None:
    """Write a (rows, cols) batch; dtype 'i32' requires integer-valued entries."""
    arr = np.asarray(samples)
    if arr.ndim != 2:
        raise ValueError(f"samples must be 2-D, got shape {arr.shape}")
    if dtype == "i32":
        as_int = np.asarray(arr, dtype=np.float64)
        rounded = np.rint(as_int)
        if not np.array_equal(as_int, rounded):
            raise ValueError("refusing lossy i32 export of non-integer samples")
        payload = rounded.astype("<i4")
        code = QLS1_I32
    elif dtype == "f32":
        payload = np.asarray(arr, dtype="<f4")
        code = QLS1_F32
    else:
        raise ValueError(f"unknown QLS1 dtype {dtype!r} (expected 'f32' or 'i32')")
    rows, cols = payload.shape
    with open(path, "wb") as fh:
        fh.write(QLS1_MAGIC)
        fh.write(struct.pack("<IIII", QLS1_VERSION, rows, cols, code))
        fh.write(np.ascontiguousarray(payload).tobytes())


def read_samples(path) -> tuple[np.ndarray, str]:
    """Read a QLS1 file, returning (array, 'f32'|'i32')."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != QLS1_MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {QLS1_MAGIC!r}")
        version, rows, cols, code = struct.unpack("<IIII", fh.read(16))
        if version != QLS1_VERSION:
            raise ValueError(f"{path}: unsupported QLS1 version {version}")
        if code == QLS1_I32:
            dt, name = "<i4", "i32"
        elif code == QLS1_F32:
            dt, name = "<f4", "f32"
        else:
            raise ValueError(f"{path}: unknown dtype code {code}")
        data = fh.read(rows * cols * 4)
    if len(data) != rows * cols * 4:
        raise ValueError(f"{path}: truncated payload for {rows} x {cols}")
    return np.frombuffer(data, dtype=dt).reshape(rows, cols), name


def write_samples_csv(path, samples: np.ndarray) -> None:
    arr = np.asarray(samples)
    header = ",".join(f"t{i + 1}" for i in range(arr.shape[1]))
    if np.issubdtype(arr.dtype, np.integer):
        np.savetxt(path, arr, fmt="%d", delimiter=",", header=header, comments="")
    else:
        np.savetxt(path, arr, fmt="%.9g", delimiter=",", header=header, comments="")


def write_distribution_csv(path, configs: np.ndarray, probs: np.ndarray) -> None:
    n = configs.shape[1]
    with open(path, "w") as fh:
        fh.write(",".join(f"t{i + 1}" for i in range(n)) + ",probability\n")
        for row, p in zip(configs, probs):
            fh.write(",".join(str(int(v)) for v in row) + f",{float(p)!r}\n")


def write_histogram_csv(path, configs: np.ndarray, counts: np.ndarray,
                        shots: int) -> None:
    """Plot-ready empirical histogram: one row per observed configuration."""
    n = configs.shape[1]
    with open(path, "w") as fh:
        fh.write(",".join(f"t{i + 1}" for i in range(n)) + ",count,frequency\n")
        for row, c in zip(configs, counts):
            fh.write(",".join(str(int(v)) for v in row)
                     + f",{int(c)},{int(c) / shots!r}\n")


def read_distribution_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header[-1] != "probability" or not header[0].startswith("t"):
            raise ValueError(f"{path}: not a distribution table")
        configs, probs = [], []
        for line in fh:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            configs.append([int(v) for v in parts[:-1]])
            probs.append(float(parts[-1]))
    return np.asarray(configs, dtype=np.int32), np.asarray(probs, dtype=np.float64)


def write_kv(path, mapping: dict) -> None:
    lines = []
    for key in sorted(mapping):
        value = mapping[key]
        if isinstance(value, float):
            value = repr(float(value))
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_kv(path) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
