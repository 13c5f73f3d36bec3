"""Run metrics and cross-seed aggregation."""

from __future__ import annotations

import math

import numpy as np


def l1_to_nearest_integer(samples: np.ndarray) -> float:
    """Mean |x - round(x)|; 0 for integer outputs, 1/4 for uniform-mod-1."""
    arr = np.asarray(samples, dtype=np.float64)
    return float(np.mean(np.abs(arr - np.rint(arr))))


def mode_masses(samples: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Fraction of samples nearest each mixture center."""
    arr = np.asarray(samples, dtype=np.float64)
    d2 = ((arr[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    nearest = d2.argmin(axis=1)
    return np.bincount(nearest, minlength=len(centers)) / len(arr)


def mode_coverage(samples: np.ndarray, centers: np.ndarray,
                  threshold: float = 0.01) -> tuple[int, np.ndarray]:
    """Number of centers holding at least ``threshold`` of the mass."""
    masses = mode_masses(samples, centers)
    return int((masses >= threshold).sum()), masses


def mean_sem(values) -> tuple[float, float | None]:
    """Mean and standard error of the mean; SEM is None for a single value."""
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to aggregate")
    mean = float(arr.mean())
    if arr.size == 1:
        return mean, None
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))
