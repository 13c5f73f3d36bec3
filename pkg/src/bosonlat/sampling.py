"""Exact enumeration and sampling of interferometer output distributions.

Boson statistics: p(t) = |Perm(U_sub)|^2 / prod(t_i!) with U_sub the
row-repeated submatrix of the input columns.  Distinguishable photons
route independently with probabilities |u_ji|^2; their exact law is the
same expression with the elementwise |u|^2 submatrix.

Sampling draws one photon position at a time; the conditional after
j-1 placed photons is proportional to the squared modulus of the
Laplace expansion of the growing permanent over a uniformly permuted
column order.  Each trial s consumes a private random stream derived
from (seed, s), so batches are reproducible and independent of worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from . import _kernels
from .errors import GuardError, NormalizationError
from .linalg import as_complex_matrix, permanent_fast, repeated_submatrix

BOSON = "boson"
DISTINGUISHABLE = "distinguishable"

#: enumeration guards for exact tables
MAX_EXACT_PHOTONS = 5
MAX_EXACT_MODES = 12

#: chain-rule sampler guard (cost ~ k * 2^k per sample)
MAX_SAMPLE_PHOTONS = 26

#: unit-sum check tolerance for exact tables
TABLE_TOL = 1e-9

_WAVE_CAP = 1 << 21
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class InputSpec:
    """Photon input placement plus the loss / post-selection regime."""

    modes: int
    input_modes: tuple[int, ...]
    transmission: float = 1.0
    postselect_min: int = 0

    def __post_init__(self):
        object.__setattr__(self, "input_modes", tuple(int(m) for m in self.input_modes))
        if self.modes < 1:
            raise ValueError(f"modes must be >= 1, got {self.modes}")
        k = len(self.input_modes)
        if k > self.modes:
            raise ValueError(f"{k} photons exceed {self.modes} modes")
        if len(set(self.input_modes)) != k:
            raise ValueError("input modes must be distinct (one photon per input bin)")
        if any(m < 0 or m >= self.modes for m in self.input_modes):
            raise ValueError(f"input modes out of range: {self.input_modes}")
        if not 0.0 < self.transmission <= 1.0:
            raise ValueError(f"transmission must be in (0, 1], got {self.transmission}")
        if not 0 <= self.postselect_min <= k:
            raise ValueError(
                f"postselect_min must be in [0, {k}], got {self.postselect_min}"
            )

    @property
    def photons(self) -> int:
        return len(self.input_modes)

    @property
    def lossless(self) -> bool:
        return self.transmission == 1.0


@dataclass
class DistributionTable:
    """Exhaustive (configuration, probability) table for fixed circuit and input."""

    configs: np.ndarray  # (C, N) int32, lexicographic by output multiset
    probs: np.ndarray    # (C,) float64
    photons: int
    modes: int
    statistics: str = BOSON
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {tuple(map(int, row)): i for i, row in enumerate(self.configs)}

    def __len__(self) -> int:
        return len(self.probs)

    def prob(self, config) -> float:
        key = tuple(int(v) for v in config)
        idx = self._index.get(key)
        return float(self.probs[idx]) if idx is not None else 0.0

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return {k: float(self.probs[i]) for k, i in self._index.items()}


@dataclass
class SampleBatch:
    """Occupation samples plus the provenance needed to reproduce them."""

    occupations: np.ndarray  # (M, N) int32
    spec: InputSpec
    seed: int
    statistics: str
    trials: int
    accepted: int

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.trials

    def metadata(self) -> dict:
        return {
            "statistics": self.statistics,
            "modes": self.spec.modes,
            "input_modes": ",".join(str(m) for m in self.spec.input_modes),
            "photons": self.spec.photons,
            "transmission": repr(self.spec.transmission),
            "postselect_min": self.spec.postselect_min,
            "seed": self.seed,
            "samples": self.occupations.shape[0],
            "trials": self.trials,
            "acceptance_rate": repr(self.acceptance_rate),
        }


def enumerate_configs(modes: int, photons: int) -> np.ndarray:
    """All weak compositions of ``photons`` over ``modes``, C(N+k-1, k) rows."""
    out = np.zeros((math.comb(modes + photons - 1, photons), modes), dtype=np.int32)
    for i, combo in enumerate(combinations_with_replacement(range(modes), photons)):
        for m in combo:
            out[i, m] += 1
    return out


def exact_distribution(u, spec: InputSpec, statistics: str = BOSON) -> DistributionTable:
    """Exhaustive output distribution by direct permanent evaluation.

    Enumerates every configuration, so it is guarded at k <= 5, N <= 12;
    the unit-sum check is an error, never a rescaling.
    """
    if statistics not in (BOSON, DISTINGUISHABLE):
        raise ValueError(f"unknown statistics {statistics!r}")
    if not spec.lossless:
        raise ValueError("exact tables are defined for transmission = 1 only")
    u = as_complex_matrix(u)
    k, n = spec.photons, spec.modes
    if u.shape[0] != n:
        raise ValueError(f"unitary is {u.shape[0]} x {u.shape[1]} but spec has {n} modes")
    if k > MAX_EXACT_PHOTONS:
        raise GuardError(f"exact enumeration is limited to k <= {MAX_EXACT_PHOTONS}, got {k}")
    if n > MAX_EXACT_MODES:
        raise GuardError(f"exact enumeration is limited to N <= {MAX_EXACT_MODES}, got {n}")
    base = u if statistics == BOSON else np.abs(u) ** 2
    configs = enumerate_configs(n, k)
    probs = np.empty(len(configs), dtype=np.float64)
    for i, t in enumerate(configs):
        sub = repeated_submatrix(base, spec.input_modes, t)
        if k > 1:
            # content-sort the rows: the permanent is row-order invariant,
            # and a canonical order makes mode relabeling bit-exact
            keys = np.ascontiguousarray(sub).view(np.float64).reshape(k, -1)
            sub = sub[np.lexsort(keys.T[::-1])]
        perm = permanent_fast(sub)
        weight = 1.0
        for ti in t:
            weight *= math.factorial(int(ti))
        if statistics == BOSON:
            probs[i] = (perm.real**2 + perm.imag**2) / weight
        else:
            probs[i] = perm.real / weight
    total = float(probs.sum())
    if abs(total - 1.0) > TABLE_TOL:
        raise NormalizationError(
            f"exact table sums to {total!r}, off by more than {TABLE_TOL:g}"
        )
    return DistributionTable(configs=configs, probs=probs, photons=k, modes=n,
                             statistics=statistics)


def _expected_acceptance(spec: InputSpec) -> float:
    """Binomial upper tail P(survivors >= postselect_min)."""
    k, eta, d = spec.photons, spec.transmission, spec.postselect_min
    if eta == 1.0 or d == 0:
        return 1.0
    return float(sum(math.comb(k, j) * eta**j * (1 - eta) ** (k - j) for j in range(d, k + 1)))


def _run_wave(kernel_fn, args, start: int, count: int, threads: int):
    if threads <= 1 or count < 4 * threads:
        return kernel_fn(*args, start, count)
    bounds = np.linspace(0, count, threads + 1, dtype=np.int64)
    chunks = [(int(b0), int(b1 - b0)) for b0, b1 in zip(bounds, bounds[1:]) if b1 > b0]
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: kernel_fn(*args, start + c[0], c[1]), chunks))
    occ = np.concatenate([p[0] for p in parts], axis=0)
    acc = np.concatenate([p[1] for p in parts], axis=0)
    return occ, acc


def _collect(kernel_fn, args, spec: InputSpec, count: int, seed: int,
             threads: int, max_trials: int) -> SampleBatch:
    """Run trials in waves until ``count`` accepted samples exist."""
    p_est = _expected_acceptance(spec)
    rows, accepted_total, trials = [], 0, 0
    while accepted_total < count:
        need = count - accepted_total
        wave = need if spec.lossless or spec.postselect_min == 0 else (
            int(need / max(p_est, 1e-12) * 1.1) + 64
        )
        wave = min(wave, _WAVE_CAP)
        if trials + wave > max_trials:
            wave = max_trials - trials
            if wave <= 0:
                raise RuntimeError(
                    f"gave up after {trials} trials with {accepted_total} accepted "
                    f"(estimated acceptance {p_est:.3g}); raise max_trials"
                )
        occ, acc = _run_wave(kernel_fn, args, trials, wave, threads)
        trials += wave
        mask = acc.astype(bool)
        accepted_total += int(mask.sum())
        rows.append(occ[mask])
        # adapt the estimate once real data exists
        if trials >= 4096 and accepted_total:
            p_est = accepted_total / trials
    occupations = np.concatenate(rows, axis=0)[:count]
    return SampleBatch(occupations=occupations, spec=spec, seed=seed,
                       statistics="", trials=trials, accepted=accepted_total)


def sample_boson(u, spec: InputSpec, count: int, seed: int,
                 threads: int = 1, max_trials: int = 1 << 40) -> SampleBatch:
    """Exact boson-statistics samples via chain-rule permanent sampling.

    Per-sample cost grows as k * 2^k; guarded at k <= 26.  With
    transmission < 1 each photon first survives independently, shots
    with fewer than ``postselect_min`` survivors are discarded, and
    trials continue until ``count`` accepted samples exist.
    """
    u = as_complex_matrix(u)
    if u.shape[0] != spec.modes:
        raise ValueError(f"unitary is {u.shape[0]} x {u.shape[1]} but spec has {spec.modes} modes")
    if spec.photons > MAX_SAMPLE_PHOTONS:
        raise GuardError(
            f"chain-rule sampling is limited to k <= {MAX_SAMPLE_PHOTONS}, got {spec.photons}"
        )
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    cols = np.ascontiguousarray(u[:, list(spec.input_modes)])
    kernel = _kernels.active()
    batch = _collect(kernel.boson_batch,
                     (cols, spec.transmission, spec.postselect_min, seed & _MASK64),
                     spec, count, seed, threads, max_trials)
    batch.statistics = BOSON
    return batch


def sample_distinguishable(u, spec: InputSpec, count: int, seed: int,
                           threads: int = 1, max_trials: int = 1 << 40) -> SampleBatch:
    """Independent-photon samples: photon from input i exits j with |u_ji|^2."""
    u = as_complex_matrix(u)
    if u.shape[0] != spec.modes:
        raise ValueError(f"unitary is {u.shape[0]} x {u.shape[1]} but spec has {spec.modes} modes")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    cols = u[:, list(spec.input_modes)]
    cdfs = np.ascontiguousarray(np.cumsum(np.abs(cols) ** 2, axis=0).T)
    kernel = _kernels.active()
    batch = _collect(kernel.dist_batch,
                     (cdfs, spec.transmission, spec.postselect_min, seed & _MASK64),
                     spec, count, seed, threads, max_trials)
    batch.statistics = DISTINGUISHABLE
    return batch


@dataclass
class LossShots:
    """Per-shot survival draws for the loss + post-selection stage."""

    spec: InputSpec
    survivors: np.ndarray  # (shots, k) bool
    accepted: np.ndarray   # (shots,) bool

    @property
    def acceptance_rate(self) -> float:
        return float(self.accepted.mean())

    def surviving_spec(self, shot: int) -> InputSpec:
        """InputSpec restricted to the photons that survived shot ``shot``."""
        modes = tuple(
            m for m, alive in zip(self.spec.input_modes, self.survivors[shot]) if alive
        )
        return InputSpec(modes=self.spec.modes, input_modes=modes)


def apply_loss_and_postselect(spec: InputSpec, shots: int, seed: int) -> LossShots:
    """Draw per-photon survival for ``shots`` trials and mark accepted shots.

    Lost photons behave as if never present, so loss acts on the inputs;
    shot s uses the same (seed, s) stream prefix as the samplers, which
    therefore accept exactly the same shots for the same seed.
    """
    if spec.postselect_min > spec.photons:
        raise ValueError("postselect_min exceeds photon count: shots can never be accepted")
    kernel = _kernels.active()
    surv = kernel.survival_mask(spec.photons, spec.transmission, seed & _MASK64, 0, shots)
    accepted = surv.sum(axis=1) >= spec.postselect_min
    return LossShots(spec=spec, survivors=surv, accepted=accepted)


def expected_acceptance(spec: InputSpec) -> float:
    """Exact binomial-tail acceptance probability for the loss regime."""
    return _expected_acceptance(spec)
