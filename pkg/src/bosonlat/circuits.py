"""Interferometer construction: Haar-random circuits and loop-based time-bin circuits.

A loop-based circuit with delay ``l`` couples time bins (t, t + l) for
t = 0 .. N-l-1 in ascending order (first-in-first-out through the delay
line); a full circuit is the chain of its loops, first listed loop
applied first.  Couplings are real rotations
``[[cos a, -sin a], [sin a, cos a]]`` on the coupled pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .io import read_kv, write_kv
from .linalg import haar_unitary, validate_unitary

HAAR = "haar"
LOOP = "loop"

#: conventional delay configurations
DELAYS_1_1 = (1, 1)
DELAYS_1_3_9 = (1, 3, 9)


@dataclass(frozen=True)
class CircuitSpec:
    """Provenance of a unitary: either Haar-random or a loop cascade."""

    kind: str
    modes: int
    delays: tuple[int, ...] = ()
    coupling_angles: tuple[tuple[float, ...], ...] = field(default=())
    seed: int = 0

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError(f"modes must be >= 1, got {self.modes}")
        if self.kind == HAAR:
            if self.delays or self.coupling_angles:
                raise ValueError("haar circuits take no delays or angles")
        elif self.kind == LOOP:
            if not self.delays:
                raise ValueError("loop circuits need at least one delay")
            for d in self.delays:
                if not 1 <= d < self.modes:
                    raise ValueError(f"delay {d} out of range for {self.modes} modes")
            if len(self.coupling_angles) != len(self.delays):
                raise ValueError("one angle list per loop required")
            for d, angles in zip(self.delays, self.coupling_angles):
                if len(angles) != self.modes - d:
                    raise ValueError(
                        f"loop with delay {d} needs {self.modes - d} angles, got {len(angles)}"
                    )
        else:
            raise ValueError(f"unknown circuit kind {self.kind!r}")


def random_loop_spec(modes: int, delays, seed: int) -> CircuitSpec:
    """Loop circuit with i.i.d. uniform [0, 2pi) couplings from the seeded stream."""
    rng = np.random.default_rng(seed)
    angles = tuple(
        tuple(float(a) for a in rng.uniform(0.0, 2.0 * math.pi, modes - d))
        for d in delays
    )
    return CircuitSpec(kind=LOOP, modes=modes, delays=tuple(delays),
                       coupling_angles=angles, seed=seed)


def build_unitary(spec: CircuitSpec) -> np.ndarray:
    """Compile a circuit spec to its N x N transfer matrix."""
    if spec.kind == HAAR:
        return haar_unitary(spec.modes, spec.seed)
    n = spec.modes
    u = np.eye(n, dtype=np.complex128)
    for delay, angles in zip(spec.delays, spec.coupling_angles):
        for t in range(n - delay):
            c = math.cos(angles[t])
            s = math.sin(angles[t])
            a, b = t, t + delay
            row_a = u[a].copy()
            u[a] = c * row_a - s * u[b]
            u[b] = s * row_a + c * u[b]
    return validate_unitary(u)


def default_input_modes(spec_kind: str, modes: int, photons: int) -> tuple[int, ...]:
    """Default photon placement: first k bins for Haar, evenly spread for loops.

    Even spreading (every other bin at half filling) keeps adjacent photons
    one delay-1 step apart, maximizing interference in loop circuits.
    """
    if photons < 0 or photons > modes:
        raise ValueError(f"photons must be in [0, {modes}], got {photons}")
    if spec_kind == LOOP:
        return tuple(i * modes // photons for i in range(photons))
    return tuple(range(photons))


def write_spec(path, spec: CircuitSpec) -> None:
    data = {
        "kind": spec.kind,
        "modes": spec.modes,
        "delays": ",".join(str(d) for d in spec.delays),
        "seed": spec.seed,
    }
    for i, angles in enumerate(spec.coupling_angles):
        data[f"angles{i}"] = ",".join(repr(a) for a in angles)
    write_kv(path, data)


def read_spec(path) -> CircuitSpec:
    data = read_kv(path)
    kind = data["kind"]
    modes = int(data["modes"])
    seed = int(data["seed"])
    delays = tuple(int(d) for d in data["delays"].split(",") if d)
    if kind == HAAR:
        return CircuitSpec(kind=HAAR, modes=modes, seed=seed)
    angle_keys = sorted(k for k in data if k.startswith("angles"))
    if angle_keys:
        angles = tuple(
            tuple(float(a) for a in data[key].split(",") if a) for key in angle_keys
        )
        return CircuitSpec(kind=LOOP, modes=modes, delays=delays,
                           coupling_angles=angles, seed=seed)
    return random_loop_spec(modes, delays, seed)
