"""Pure-numpy kernels, used when the compiled extension is unavailable.

Implements the same contract as ``_core``:

* ``permanent(m)``                      -- Glynn permanent of a square complex matrix
* ``boson_batch(cols, eta, dmin, seed, start, count)``
* ``dist_batch(cdfs, eta, dmin, seed, start, count)``
* ``survival_mask(k, eta, seed, start, count)``
* ``bit_matrix(rows, cols, seed)``

Per-trial randomness comes from a splitmix64 stream keyed by
(seed, absolute trial index), identical bit-for-bit to the compiled
backend, so survival masks, shuffles and the distinguishable sampler
agree exactly across backends.  The boson chain sampler evaluates the
Glynn sums in vectorised ±1 blocks rather than sequential Gray-code
updates, so its floating-point results can differ from the compiled
kernel in the last bits (the sampled distributions agree).
"""

from __future__ import annotations

import numpy as np

NAME = "fallback"

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53

# delta-block size for the vectorised Glynn sums; bounds peak memory
_BLOCK = 1 << 15


def _mix64_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class _Stream:
    """Scalar splitmix64 stream for one trial."""

    __slots__ = ("state",)

    def __init__(self, seed: int, trial: int):
        self.state = _mix64_int((seed + _GAMMA * (trial + 1)) & _MASK)

    def next_double(self) -> float:
        self.state = (self.state + _GAMMA) & _MASK
        return (_mix64_int(self.state) >> 11) * _INV_2_53


def _stream_states(seed: int, start: int, count: int) -> np.ndarray:
    trials = np.arange(start, start + count, dtype=np.uint64)
    init = np.uint64(seed & _MASK) + np.uint64(_GAMMA) * (trials + np.uint64(1))
    return _mix64_vec(init)


def _next_double_vec(states: np.ndarray) -> np.ndarray:
    # advances states in place, column of uniforms out
    states += np.uint64(_GAMMA)
    return (_mix64_vec(states) >> np.uint64(11)).astype(np.float64) * _INV_2_53


# ---------------------------------------------------------------------------
# permanent
# ---------------------------------------------------------------------------

def _sign_block(n_free: int, base: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """±1 rows (count, n_free+1) with first column fixed +1, and row parities."""
    t = np.arange(base, base + count, dtype=np.uint64)
    d = np.empty((count, n_free + 1), dtype=np.float64)
    d[:, 0] = 1.0
    for b in range(n_free):
        d[:, b + 1] = 1.0 - 2.0 * ((t >> np.uint64(b)) & np.uint64(1)).astype(np.float64)
    parity = 1.0 - 2.0 * (np.bitwise_count(t) & np.uint64(1)).astype(np.float64)
    return d, parity


def permanent(m: np.ndarray) -> complex:
    n = m.shape[0]
    if n == 0:
        return complex(1.0)
    if n == 1:
        return complex(m[0, 0])
    total = 0.0 + 0.0j
    n_terms = 1 << (n - 1)
    for base in range(0, n_terms, _BLOCK):
        count = min(_BLOCK, n_terms - base)
        d, parity = _sign_block(n - 1, base, count)
        s = d.astype(np.complex128) @ m  # (count, n) row sums per delta
        total += parity @ np.prod(s, axis=1)
    return complex(total * 2.0 ** (1 - n))


def _col_deleted_perms(b: np.ndarray) -> np.ndarray:
    """Permanents of ``b`` ((nr, nr+1) complex) with one column deleted each.

    Returns out[c] = Perm(b without column c), via Glynn sums shared across
    the nr+1 deletions (products-except-one by prefix/suffix cumprods).
    """
    nr, nc = b.shape
    out = np.zeros(nc, dtype=np.complex128)
    n_terms = 1 << (nr - 1)
    for base in range(0, n_terms, _BLOCK):
        count = min(_BLOCK, n_terms - base)
        d, parity = _sign_block(nr - 1, base, count)
        s = d.astype(np.complex128) @ b  # (count, nc)
        pre = np.ones((count, nc + 1), dtype=np.complex128)
        np.cumprod(s, axis=1, out=pre[:, 1:])
        suf = np.ones((count, nc + 1), dtype=np.complex128)
        np.cumprod(s[:, ::-1], axis=1, out=suf[:, 1:])
        suf = suf[:, ::-1]
        out += parity @ (pre[:, :nc] * suf[:, 1:])
    return out * 2.0 ** (1 - nr)


# ---------------------------------------------------------------------------
# boson chain sampler
# ---------------------------------------------------------------------------

def boson_batch(
    cols: np.ndarray,
    eta: float,
    dmin: int,
    seed: int,
    start: int,
    count: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Chain-rule samples for trials [start, start+count).

    cols: (N, k) complex columns of the unitary for the input modes.
    Returns (occupations (count, N) int32, accepted (count,) uint8).
    """
    n_modes, k = cols.shape
    occ = np.zeros((count, n_modes), dtype=np.int32)
    accepted = np.zeros(count, dtype=np.uint8)
    for i in range(count):
        stream = _Stream(seed, start + i)
        if eta < 1.0:
            alive = [c for c in range(k) if stream.next_double() < eta]
        else:
            alive = list(range(k))
        if len(alive) < dmin:
            continue
        accepted[i] = 1
        if not alive:
            continue
        # uniformly permute the surviving columns
        for a in range(len(alive) - 1, 0, -1):
            j = int(stream.next_double() * (a + 1))
            if j > a:
                j = a
            alive[a], alive[j] = alive[j], alive[a]
        a_cols = np.ascontiguousarray(cols[:, alive])
        _chain_sample(a_cols, stream, occ[i])
    return occ, accepted


def _chain_sample(a_cols: np.ndarray, stream: _Stream, occ_row: np.ndarray) -> None:
    n_modes, kk = a_cols.shape
    pmf = np.abs(a_cols[:, 0]) ** 2
    rows = [_draw_categorical(pmf, stream.next_double())]
    for j in range(2, kk + 1):
        sub = a_cols[rows, : j]  # (j-1, j)
        pm = _col_deleted_perms(sub)
        amp = a_cols[:, :j] @ pm
        pmf = amp.real**2 + amp.imag**2
        rows.append(_draw_categorical(pmf, stream.next_double()))
    np.add.at(occ_row, rows, 1)


def _draw_categorical(pmf: np.ndarray, u: float) -> int:
    cdf = np.cumsum(pmf)
    idx = int(np.searchsorted(cdf, u * cdf[-1], side="right"))
    return min(idx, len(pmf) - 1)


# ---------------------------------------------------------------------------
# distinguishable sampler
# ---------------------------------------------------------------------------

def dist_batch(
    cdfs: np.ndarray,
    eta: float,
    dmin: int,
    seed: int,
    start: int,
    count: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Independent-photon samples for trials [start, start+count).

    cdfs: (k, N) float64; row i is the cumulative |u[:, input_i]|^2.
    Stream layout per trial: k survival draws when eta < 1, then exactly
    k routing draws (draws for lost photons are burned, keeping the
    layout fixed).
    """
    k, n_modes = cdfs.shape
    occ = np.zeros((count, n_modes), dtype=np.int32)
    states = _stream_states(seed, start, count)
    if eta < 1.0:
        surv = np.empty((count, k), dtype=bool)
        for i in range(k):
            surv[:, i] = _next_double_vec(states) < eta
    else:
        surv = np.ones((count, k), dtype=bool)
    accepted = (surv.sum(axis=1) >= dmin).astype(np.uint8)
    rows = np.arange(count)
    for i in range(k):
        u = _next_double_vec(states)
        idx = np.searchsorted(cdfs[i], u * cdfs[i, -1], side="right")
        np.minimum(idx, n_modes - 1, out=idx)
        use = surv[:, i] & (accepted == 1)
        np.add.at(occ, (rows[use], idx[use]), 1)
    return occ, accepted


def survival_mask(k: int, eta: float, seed: int, start: int, count: int) -> np.ndarray:
    """Per-photon survival draws, (count, k) bool; same draws as the samplers."""
    states = _stream_states(seed, start, count)
    surv = np.empty((count, k), dtype=bool)
    for i in range(k):
        surv[:, i] = _next_double_vec(states) < eta
    return surv


# ---------------------------------------------------------------------------
# portable fair bits (Bernoulli latents)
# ---------------------------------------------------------------------------

def bit_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """(rows, cols) int8 fair bits; row r uses the (seed, r) stream."""
    states = _stream_states(seed, 0, rows)
    bits = np.empty((rows, cols), dtype=np.int8)
    for c in range(cols):
        states += np.uint64(_GAMMA)
        bits[:, c] = (_mix64_vec(states) >> np.uint64(63)).astype(np.int8)
    return bits
