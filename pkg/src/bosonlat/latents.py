"""Latent-distribution generators: Gaussian, Bernoulli, distinguishable, boson.

All four produce an (M, L) real batch with full provenance.  The photonic
kinds wrap the samplers, with the circuit either supplied explicitly or
re-randomized per seed (the default for benchmarking sweeps).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .circuits import (
    HAAR,
    LOOP,
    CircuitSpec,
    build_unitary,
    default_input_modes,
    random_loop_spec,
)
from .sampling import BOSON, DISTINGUISHABLE, InputSpec, sample_boson, sample_distinguishable

GAUSSIAN = "gaussian"
BERNOULLI = "bernoulli"

KINDS = (GAUSSIAN, BERNOULLI, DISTINGUISHABLE, BOSON)

_MASK64 = (1 << 64) - 1
#: salt separating derived circuit seeds from sampling streams
_CIRCUIT_SALT = 0x0C19C517B1A5ED42


@dataclass
class LatentBatch:
    """M x L batch of latent samples plus generation provenance."""

    samples: np.ndarray  # (M, L) float64
    kind: str
    seed: int
    centered: bool = False
    offset: np.ndarray | None = None
    circuit: CircuitSpec | None = None
    input_spec: InputSpec | None = None
    acceptance_rate: float | None = None

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def count(self) -> int:
        return self.samples.shape[0]

    def metadata(self) -> dict:
        data = {"kind": self.kind, "seed": self.seed, "count": self.count,
                "dim": self.dim, "centered": self.centered}
        if self.offset is not None:
            data["offset"] = ",".join(repr(float(v)) for v in self.offset)
        if self.circuit is not None:
            data["circuit_kind"] = self.circuit.kind
            data["circuit_seed"] = self.circuit.seed
            if self.circuit.delays:
                data["circuit_delays"] = ",".join(str(d) for d in self.circuit.delays)
        if self.input_spec is not None:
            data["input_modes"] = ",".join(str(m) for m in self.input_spec.input_modes)
            data["transmission"] = repr(self.input_spec.transmission)
            data["postselect_min"] = self.input_spec.postselect_min
        if self.acceptance_rate is not None:
            data["acceptance_rate"] = repr(self.acceptance_rate)
        return data


def gen_gaussian(dim: int, count: int, seed: int) -> LatentBatch:
    """i.i.d. standard normal entries, deterministic per seed."""
    if dim < 1 or count < 1:
        raise ValueError(f"dim and count must be >= 1, got {dim}, {count}")
    rng = np.random.default_rng(seed)
    return LatentBatch(samples=rng.standard_normal((count, dim)), kind=GAUSSIAN, seed=seed)


def gen_bernoulli(dim: int, count: int, seed: int) -> LatentBatch:
    """i.i.d. fair bits from the portable per-row integer streams."""
    if dim < 1 or count < 1:
        raise ValueError(f"dim and count must be >= 1, got {dim}, {count}")
    bits = _kernels.active().bit_matrix(count, dim, seed & _MASK64)
    return LatentBatch(samples=bits.astype(np.float64), kind=BERNOULLI, seed=seed)


def derive_circuit_seed(seed: int) -> int:
    """Circuit seed derived from the batch seed (per-seed re-randomization)."""
    z = (seed ^ _CIRCUIT_SALT) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def photonic_circuit(family: str, modes: int, seed: int, delays=None) -> CircuitSpec:
    """Convenience circuit constructor for the latent CLI and sweeps."""
    if family == HAAR:
        return CircuitSpec(kind=HAAR, modes=modes, seed=seed)
    if family == LOOP:
        if not delays:
            raise ValueError("loop circuits need delays")
        return random_loop_spec(modes, delays, seed)
    raise ValueError(f"unknown circuit family {family!r}")


def gen_photonic(kind: str, circuit: CircuitSpec, input_spec: InputSpec | None,
                 count: int, seed: int, threads: int = 1) -> LatentBatch:
    """Occupation-vector latents from the boson or distinguishable sampler.

    The latent dimension equals the circuit's mode count.  When
    ``input_spec`` is omitted, photons fill half the modes in the default
    placement for the circuit kind.
    """
    if kind not in (BOSON, DISTINGUISHABLE):
        raise ValueError(f"photonic kind must be boson or distinguishable, got {kind!r}")
    if input_spec is None:
        photons = circuit.modes // 2
        input_spec = InputSpec(
            modes=circuit.modes,
            input_modes=default_input_modes(circuit.kind, circuit.modes, photons),
        )
    if input_spec.modes != circuit.modes:
        raise ValueError(
            f"latent dim mismatch: circuit has {circuit.modes} modes, "
            f"input spec has {input_spec.modes}"
        )
    u = build_unitary(circuit)
    sampler = sample_boson if kind == BOSON else sample_distinguishable
    batch = sampler(u, input_spec, count, seed, threads=threads)
    return LatentBatch(
        samples=batch.occupations.astype(np.float64),
        kind=kind,
        seed=seed,
        circuit=circuit,
        input_spec=input_spec,
        acceptance_rate=batch.acceptance_rate,
    )


def center(batch: LatentBatch, policy: str = "batch-mean",
           offset: np.ndarray | None = None) -> LatentBatch:
    """Subtract a per-column offset, recording it so the shift is invertible.

    policy 'batch-mean' uses the batch's column means, 'fixed' uses the
    supplied vector, 'none' returns the batch unchanged.
    """
    if policy == "none":
        return batch
    if policy == "batch-mean":
        off = batch.samples.mean(axis=0)
    elif policy == "fixed":
        if offset is None:
            raise ValueError("fixed centering needs an offset vector")
        off = np.asarray(offset, dtype=np.float64)
        if off.shape != (batch.dim,):
            raise ValueError(f"offset must have shape ({batch.dim},), got {off.shape}")
    else:
        raise ValueError(f"unknown centering policy {policy!r}")
    if batch.centered:
        raise ValueError("batch is already centered; uncenter it first")
    return replace(batch, samples=batch.samples - off, centered=True, offset=off)


def uncenter(batch: LatentBatch) -> LatentBatch:
    """Invert a recorded centering shift exactly."""
    if not batch.centered:
        return batch
    return replace(batch, samples=batch.samples + batch.offset, centered=False, offset=None)
