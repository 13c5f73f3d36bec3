from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonlat import haar_unitary, repeated_submatrix


def test_identity_single_occupancy():
    u = np.eye(4, dtype=complex)
    sub = repeated_submatrix(u, [0, 1], [1, 1, 0, 0])
    assert np.array_equal(sub, np.eye(2, dtype=complex))


def test_row_repetition():
    u = np.eye(4, dtype=complex)
    sub = repeated_submatrix(u, [0, 1], [2, 0, 0, 0])
    assert np.array_equal(sub, np.array([[1, 0], [1, 0]], dtype=complex))


def test_direct_index_check():
    u = haar_unitary(4, 11)
    sub = repeated_submatrix(u, [0, 1], [0, 1, 1, 0])
    expected = np.array([[u[1, 0], u[1, 1]], [u[2, 0], u[2, 1]]])
    assert np.array_equal(sub, expected)


def test_arbitrary_input_modes():
    u = haar_unitary(5, 3)
    sub = repeated_submatrix(u, [4, 2], [0, 0, 1, 0, 1])
    expected = np.array([[u[2, 4], u[2, 2]], [u[4, 4], u[4, 2]]])
    assert np.array_equal(sub, expected)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_row_multiset_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    k = int(rng.integers(1, n + 1))
    cols = list(rng.choice(n, size=k, replace=False))
    t = np.bincount(rng.choice(n, size=k, replace=True), minlength=n)
    u = haar_unitary(n, seed)
    sub = repeated_submatrix(u, cols, t)
    assert sub.shape == (k, k)
    got = Counter(tuple(row) for row in sub)
    want = Counter()
    for mode, count in enumerate(t):
        if count:
            want[tuple(u[mode, cols])] += int(count)
    assert got == want


def test_photon_count_mismatch():
    u = np.eye(4, dtype=complex)
    with pytest.raises(ValueError):
        repeated_submatrix(u, [0, 1], [1, 1, 1, 0])
    with pytest.raises(ValueError):
        repeated_submatrix(u, [0, 9], [1, 1, 0, 0])
    with pytest.raises(ValueError):
        repeated_submatrix(u, [0, 1], [1, -1, 2, 0])
