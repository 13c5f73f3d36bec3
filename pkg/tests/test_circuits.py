import math

import numpy as np
import pytest

from bosonlat import (
    CircuitSpec,
    build_unitary,
    default_input_modes,
    random_loop_spec,
    unitarity_defect,
)
from bosonlat.circuits import read_spec, write_spec


def test_zero_angles_give_identity():
    for modes, delays in [(8, (1, 1)), (16, (1, 3, 9))]:
        spec = CircuitSpec(
            kind="loop", modes=modes, delays=delays,
            coupling_angles=tuple(tuple([0.0] * (modes - d)) for d in delays),
        )
        assert np.array_equal(build_unitary(spec), np.eye(modes, dtype=complex))


def test_single_beamsplitter():
    spec = CircuitSpec(kind="loop", modes=2, delays=(1,),
                       coupling_angles=((math.pi / 4,),))
    u = build_unitary(spec)
    r = 1 / math.sqrt(2)
    assert np.allclose(u, np.array([[r, -r], [r, r]]), atol=1e-15)


def test_loop_builds_are_unitary():
    for modes in (16, 32):
        for delays in ((1, 1), (1, 3, 9)):
            spec = random_loop_spec(modes, delays, seed=99)
            assert unitarity_defect(build_unitary(spec)) <= 1e-10


def test_haar_branch():
    spec = CircuitSpec(kind="haar", modes=8, seed=5)
    u = build_unitary(spec)
    assert u.shape == (8, 8)
    assert unitarity_defect(u) <= 1e-10


def test_angle_counts():
    spec = random_loop_spec(32, (1, 1), seed=0)
    assert [len(a) for a in spec.coupling_angles] == [31, 31]
    spec = random_loop_spec(16, (1, 3, 9), seed=0)
    assert [len(a) for a in spec.coupling_angles] == [15, 13, 7]


def test_spec_determinism():
    a = random_loop_spec(16, (1, 3, 9), seed=4)
    b = random_loop_spec(16, (1, 3, 9), seed=4)
    assert a == b
    assert a != random_loop_spec(16, (1, 3, 9), seed=5)


def test_loop_order_matters():
    # permuting the delay list generally changes the compiled unitary
    base = random_loop_spec(10, (1, 3), seed=8)
    swapped = CircuitSpec(kind="loop", modes=10, delays=(3, 1),
                          coupling_angles=(base.coupling_angles[1],
                                           base.coupling_angles[0]),
                          seed=8)
    assert not np.allclose(build_unitary(base), build_unitary(swapped))


def test_half_pi_delay_one_is_cyclic_permutation():
    modes = 6
    spec = CircuitSpec(kind="loop", modes=modes, delays=(1,),
                       coupling_angles=(tuple([math.pi / 2] * (modes - 1)),))
    u = build_unitary(spec)
    perm = np.zeros((modes, modes))
    perm[modes - 1, 0] = 1  # first bin exits last
    for i in range(1, modes):
        perm[i - 1, i] = 1
    assert np.abs(np.abs(u) ** 2 - perm).max() <= 1e-12


def test_spec_roundtrip(tmp_path):
    spec = random_loop_spec(16, (1, 3, 9), seed=77)
    path = tmp_path / "circuit.spec"
    write_spec(path, spec)
    loaded = read_spec(path)
    assert loaded == spec
    assert np.array_equal(build_unitary(loaded), build_unitary(spec))

    haar = CircuitSpec(kind="haar", modes=12, seed=3)
    write_spec(path, haar)
    assert read_spec(path) == haar


def test_spec_validation():
    with pytest.raises(ValueError):
        CircuitSpec(kind="loop", modes=4, delays=(4,), coupling_angles=((0.0,),))
    with pytest.raises(ValueError):
        CircuitSpec(kind="loop", modes=4, delays=(1,), coupling_angles=((0.0,),))
    with pytest.raises(ValueError):
        CircuitSpec(kind="haar", modes=4, delays=(1,), coupling_angles=((0.0,) * 3,))
    with pytest.raises(ValueError):
        CircuitSpec(kind="mystery", modes=4)


def test_default_input_modes():
    assert default_input_modes("haar", 16, 8) == tuple(range(8))
    assert default_input_modes("loop", 16, 8) == (0, 2, 4, 6, 8, 10, 12, 14)
    assert default_input_modes("loop", 32, 16) == tuple(range(0, 32, 2))
    with pytest.raises(ValueError):
        default_input_modes("haar", 4, 5)
