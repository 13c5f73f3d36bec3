"""Validation statistics and the scaling benchmark.

Total-variation distance against exact tables, the integer-distance
metric for generator outputs, bunching statistics, and wall-time
benchmarks of the boson sampler across backends.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .circuits import CircuitSpec, build_unitary
from .sampling import DistributionTable, InputSpec, sample_boson


@dataclass
class EmpiricalDistribution:
    """Exact-match counts of occupation vectors."""

    counts: dict[tuple[int, ...], int]
    shots: int
    modes: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalDistribution":
        arr = np.asarray(samples)
        if arr.ndim != 2:
            raise ValueError(f"samples must be 2-D, got shape {arr.shape}")
        configs, counts = np.unique(arr.astype(np.int64), axis=0, return_counts=True)
        table = {tuple(map(int, row)): int(c) for row, c in zip(configs, counts)}
        return cls(counts=table, shots=arr.shape[0], modes=arr.shape[1])

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {k: c / self.shots for k, c in self.counts.items()}


def _prob_dict(dist) -> tuple[dict[tuple[int, ...], float], int]:
    if isinstance(dist, EmpiricalDistribution):
        return dist.as_dict(), dist.modes
    if isinstance(dist, DistributionTable):
        return dist.as_dict(), dist.modes
    raise TypeError(f"expected EmpiricalDistribution or DistributionTable, got {type(dist)!r}")


def tvd(a, b) -> float:
    """Total variation distance, 1/2 sum |p - q| over the union of configurations."""
    pa, na = _prob_dict(a)
    pb, nb = _prob_dict(b)
    if na != nb:
        raise ValueError(f"mode-count mismatch: {na} vs {nb}")
    keys = pa.keys() | pb.keys()
    return 0.5 * sum(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in keys)


def l1_to_nearest_integer(batch) -> float:
    """Mean |x - round(x)| over every entry; 0 for integer batches, 1/4 for uniform."""
    arr = np.asarray(getattr(batch, "samples", batch), dtype=np.float64)
    return float(np.mean(np.abs(arr - np.rint(arr))))


def bunching_fraction(samples) -> float:
    """Fraction of shots with at least one doubly occupied output."""
    arr = getattr(samples, "occupations", None)
    if arr is None:
        arr = getattr(samples, "samples", samples)
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise ValueError(f"samples must be 2-D, got shape {arr.shape}")
    return float(np.mean((arr >= 2).any(axis=1)))


@dataclass
class BenchResult:
    """Wall-time measurements of one (photons, modes) sampling workload."""

    photons: int
    modes: int
    shots: int
    repeats: int
    backend: str
    times: list[float] = field(default_factory=list)

    @property
    def median_seconds(self) -> float:
        return float(np.median(self.times))

    def kv(self, prefix: str = "") -> dict:
        tag = f"{prefix}k{self.photons}_n{self.modes}"
        return {
            f"{tag}_backend": self.backend,
            f"{tag}_shots": self.shots,
            f"{tag}_repeats": self.repeats,
            f"{tag}_median_s": repr(self.median_seconds),
            f"{tag}_times_s": ",".join(repr(t) for t in self.times),
        }

    def line(self) -> str:
        return (
            f"k={self.photons:2d} N={self.modes:2d} shots={self.shots} "
            f"backend={self.backend}: median {self.median_seconds * 1e3:10.3f} ms "
            f"({self.repeats} repeats)"
        )


def bench_sampling(photons: int, modes: int, shots: int = 500, repeats: int = 5,
                   seed: int = 2024, backend: str | None = None) -> BenchResult:
    """Median wall time of ``shots`` boson samples on a Haar circuit.

    Reports the median of ``repeats`` runs; absolute times are hardware
    dependent and only ratios between sizes are meaningful.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    previous = _kernels.backend_name()
    if backend is not None:
        _kernels.set_backend(backend)
    try:
        u = build_unitary(CircuitSpec(kind="haar", modes=modes, seed=seed))
        spec = InputSpec(modes=modes, input_modes=tuple(range(photons)))
        result = BenchResult(photons=photons, modes=modes, shots=shots,
                             repeats=repeats, backend=_kernels.backend_name())
        sample_boson(u, spec, min(shots, 8), seed)  # warm-up
        for rep in range(repeats):
            t0 = time.perf_counter()
            sample_boson(u, spec, shots, seed + rep)
            result.times.append(time.perf_counter() - t0)
    finally:
        _kernels.set_backend(previous)
    return result


def bench_scaling(pairs=((8, 16), (16, 32)), shots: int = 500, repeats: int = 5,
                  seed: int = 2024, backend: str | None = None) -> list[BenchResult]:
    """Benchmark several (photons, modes) sizes with one backend."""
    return [bench_sampling(k, n, shots=shots, repeats=repeats, seed=seed, backend=backend)
            for k, n in pairs]
