import numpy as np
import pytest

from bosonlat import (
    EmpiricalDistribution,
    InputSpec,
    bench_sampling,
    bunching_fraction,
    exact_distribution,
    haar_unitary,
    l1_to_nearest_integer,
    sample_boson,
    sample_distinguishable,
    tvd,
)
from bosonlat.sampling import DistributionTable, enumerate_configs

HOM = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _uniform_table(modes, photons):
    configs = enumerate_configs(modes, photons)
    probs = np.full(len(configs), 1.0 / len(configs))
    return DistributionTable(configs=configs, probs=probs, photons=photons, modes=modes)


def test_tvd_trivial_cases():
    table = _uniform_table(4, 2)
    assert tvd(table, table) == 0.0
    # all mass on one configuration vs uniform over K: 1 - 1/K
    k_configs = len(table)
    one = np.tile(table.configs[0], (50, 1))
    emp = EmpiricalDistribution.from_samples(one)
    assert tvd(emp, table) == pytest.approx(1 - 1 / k_configs)


def test_tvd_sampling_noise_shrinks():
    u = haar_unitary(6, 5)
    spec = InputSpec(modes=6, input_modes=(0, 1, 2))
    table = exact_distribution(u, spec)
    small = sample_boson(u, spec, 2_000, seed=1)
    large = sample_boson(u, spec, 200_000, seed=1)
    t_small = tvd(EmpiricalDistribution.from_samples(small.occupations), table)
    t_large = tvd(EmpiricalDistribution.from_samples(large.occupations), table)
    assert t_large < t_small
    assert t_large <= 0.01


def test_tvd_context_mismatch():
    with pytest.raises(ValueError):
        tvd(_uniform_table(4, 2), _uniform_table(5, 2))
    with pytest.raises(TypeError):
        tvd(_uniform_table(4, 2), np.zeros(3))


def test_l1_metric():
    assert l1_to_nearest_integer(np.arange(12).reshape(3, 4)) == 0.0
    assert l1_to_nearest_integer(np.full((5, 5), 0.5)) == pytest.approx(0.5)
    rng = np.random.default_rng(3)
    arr = rng.uniform(0, 1, size=(2_000, 50))
    assert l1_to_nearest_integer(arr) == pytest.approx(0.25, abs=0.005)
    # invariant under adding integer vectors to all rows
    shift = rng.integers(-5, 5, size=50).astype(float)
    assert l1_to_nearest_integer(arr + shift) == pytest.approx(
        l1_to_nearest_integer(arr), abs=1e-12
    )


def test_bunching_fraction():
    assert bunching_fraction(np.array([[2, 0], [0, 2]])) == 1.0
    assert bunching_fraction(np.array([[1, 1], [1, 1]])) == 0.0
    assert bunching_fraction(np.array([[1, 0], [0, 2]])) == 0.5


def test_hom_bunching_separates_statistics():
    spec = InputSpec(modes=2, input_modes=(0, 1))
    boson = sample_boson(HOM, spec, 100_000, seed=3)
    dist = sample_distinguishable(HOM, spec, 100_000, seed=3)
    b_frac = bunching_fraction(boson.occupations)
    d_frac = bunching_fraction(dist.occupations)
    assert b_frac == 1.0
    assert d_frac == pytest.approx(0.5, abs=3 * np.sqrt(0.25 / 100_000))
    assert b_frac > d_frac


def test_single_photons_never_bunch():
    u = haar_unitary(5, 1)
    spec = InputSpec(modes=5, input_modes=(2,))
    batch = sample_boson(u, spec, 5_000, seed=0)
    assert bunching_fraction(batch.occupations) == 0.0


def test_bench_reports():
    res = bench_sampling(3, 6, shots=50, repeats=3, seed=1)
    assert len(res.times) == 3
    assert res.median_seconds > 0
    kv = res.kv()
    assert kv["k3_n6_shots"] == 50
    assert "median" in res.line() or "ms" in res.line()
    with pytest.raises(ValueError):
        bench_sampling(3, 6, repeats=0)
