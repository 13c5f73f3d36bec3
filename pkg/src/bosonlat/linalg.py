"""Complex matrix primitives: permanents, Haar unitaries, row-repeated submatrices.

All matrices are plain ``numpy.ndarray`` of complex128.  Mode and column
indices are 0-based throughout.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import GuardError

#: construction tolerance for max|U^H U - I|
UNITARY_TOL = 1e-10

#: cost guards: factorial-time oracle / 2^n evaluator
MAX_NAIVE_SIZE = 8
MAX_FAST_SIZE = 30


def as_complex_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a finite complex128 2-D array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError("matrix entries must be finite")
    return arr


def _require_square(arr: np.ndarray) -> int:
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    return arr.shape[0]


def unitarity_defect(u: np.ndarray) -> float:
    """max|U^H U - I|, the deviation from unitarity."""
    u = np.asarray(u, dtype=np.complex128)
    n = _require_square(u)
    return float(np.abs(u.conj().T @ u - np.eye(n)).max())


def validate_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``u`` as complex128 after checking shape, finiteness and unitarity."""
    arr = as_complex_matrix(u)
    _require_square(arr)
    defect = unitarity_defect(arr)
    if defect > tol:
        raise ValueError(f"matrix is not unitary: max|U^H U - I| = {defect:.3e} > {tol:g}")
    return arr


def permanent_naive(m) -> complex:
    """Permutation-sum permanent, the oracle for the fast evaluator.

    Evaluates sum over all permutations of prod_i m[i, sigma(i)] literally;
    guarded at n <= 8 because of the factorial cost.
    """
    arr = as_complex_matrix(m)
    n = _require_square(arr)
    if n > MAX_NAIVE_SIZE:
        raise GuardError(f"permanent_naive is limited to n <= {MAX_NAIVE_SIZE}, got n = {n}")
    if n == 0:
        return complex(1.0)
    perms = np.array(list(permutations(range(n))), dtype=np.intp)
    terms = arr[np.arange(n), perms]  # (n!, n) entries m[i, sigma(i)]
    return complex(terms.prod(axis=1).sum())


def permanent_fast(m) -> complex:
    """Glynn-formula permanent, O(n * 2^n) in the compiled backend."""
    arr = as_complex_matrix(m)
    n = _require_square(arr)
    if n > MAX_FAST_SIZE:
        raise GuardError(f"permanent_fast is limited to n <= {MAX_FAST_SIZE}, got n = {n}")
    return complex(_kernels.active().permanent(np.ascontiguousarray(arr)))


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-distributed n x n unitary, deterministic per seed.

    QR of a complex Ginibre matrix with the R-diagonal phase correction
    (Mezzadri construction); without the correction QR alone is not
    Haar-distributed.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return validate_unitary(q)


def repeated_submatrix(u: np.ndarray, input_modes: Sequence[int], occupations) -> np.ndarray:
    """k x k submatrix: selected input columns, output row i repeated t_i times.

    ``occupations`` is the output configuration (t_0, ..., t_{N-1}); rows with
    t_i = 0 are omitted.  Generalizes the first-k-columns convention to
    arbitrary input modes.
    """
    u = as_complex_matrix(u)
    n = u.shape[0]
    t = np.asarray(occupations, dtype=np.int64)
    if t.ndim != 1 or t.shape[0] != n:
        raise ValueError(f"occupations must have one entry per mode ({n}), got shape {t.shape}")
    if np.any(t < 0):
        raise ValueError("occupations must be non-negative")
    cols = list(input_modes)
    if any(c < 0 or c >= u.shape[1] for c in cols):
        raise ValueError(f"input modes out of range for {u.shape[1]} columns: {cols}")
    k = len(cols)
    total = int(t.sum())
    if total != k:
        raise ValueError(f"photon-count mismatch: {k} input modes but occupations sum to {total}")
    rows = np.repeat(np.arange(n), t)
    return u[np.ix_(rows, np.asarray(cols, dtype=np.intp))]
