"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import time

import numpy as np
import pytest
from click.testing import CliRunner
from scipy import stats

from bosonlat import (
    CircuitSpec,
    EmpiricalDistribution,
    InputSpec,
    apply_loss_and_postselect,
    bench_sampling,
    build_unitary,
    exact_distribution,
    haar_unitary,
    permanent_fast,
    permanent_naive,
    random_loop_spec,
    sample_boson,
    sample_distinguishable,
    tvd,
    unitarity_defect,
)
from bosonlat.cli import main

HOM = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def test_permanent_oracle_equivalence():
    rng = np.random.default_rng(20240811)
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(200):
        n = 2 + trial % 7
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        expected = permanent_naive(m)
        got = permanent_fast(m)
        worst = max(worst, abs(got - expected) / abs(expected))
    elapsed = time.perf_counter() - t0
    _report(
        "permanent-oracle-equivalence",
        worst <= 1e-10 and elapsed < 10.0,
        f"200 matrices n=2..8, worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_hom_exactness():
    spec = InputSpec(modes=2, input_modes=(0, 1))
    table = exact_distribution(HOM, spec)
    dist = exact_distribution(HOM, spec, statistics="distinguishable")
    ok = (
        abs(table.prob((1, 1))) <= 1e-12
        and abs(table.prob((2, 0)) - 0.5) <= 1e-12
        and abs(table.prob((0, 2)) - 0.5) <= 1e-12
        and abs(dist.prob((1, 1)) - 0.5) <= 1e-12
    )
    _report(
        "hom-exactness",
        ok,
        f"boson P(1,1)={table.prob((1, 1)):.2e}, P(2,0)={table.prob((2, 0))!r}, "
        f"distinguishable P(1,1)={dist.prob((1, 1))!r}",
    )


def test_normalization_without_rescaling():
    worst = 0.0
    for seed in range(20):
        u = haar_unitary(6, seed)
        table = exact_distribution(u, InputSpec(modes=6, input_modes=(0, 1, 2)))
        assert len(table) == 56
        worst = max(worst, abs(float(table.probs.sum()) - 1.0))
    _report(
        "exact-table-normalization",
        worst <= 1e-9,
        f"20 circuits k=3 N=6, 56 entries, worst |sum-1| = {worst:.2e}",
    )


def test_sampler_oracle_tvd():
    u = haar_unitary(6, 5)
    spec = InputSpec(modes=6, input_modes=(0, 1, 2))
    boson_table = exact_distribution(u, spec)
    boson = sample_boson(u, spec, 1_000_000, seed=17)
    t_boson = tvd(EmpiricalDistribution.from_samples(boson.occupations), boson_table)
    dist_table = exact_distribution(u, spec, statistics="distinguishable")
    dist = sample_distinguishable(u, spec, 1_000_000, seed=18)
    t_dist = tvd(EmpiricalDistribution.from_samples(dist.occupations), dist_table)
    _report(
        "sampler-oracle-tvd",
        t_boson <= 0.01 and t_dist <= 0.01,
        f"1e6 samples k=3 N=6: boson {t_boson:.4f}, distinguishable {t_dist:.4f} (<= 0.01)",
    )


def test_interference_separation():
    spec = InputSpec(modes=6, input_modes=(0, 1, 2))
    separated = 0
    lows = []
    for seed in range(20):
        u = haar_unitary(6, seed)
        gap = tvd(exact_distribution(u, spec),
                  exact_distribution(u, spec, statistics="distinguishable"))
        lows.append(gap)
        if gap > 0.05:
            separated += 1
    _report(
        "interference-separation",
        separated >= 18,
        f"{separated}/20 circuits with TVD(boson, distinguishable) > 0.05, "
        f"min {min(lows):.3f}",
    )


def test_loop_circuit_unitarity_and_identity():
    worst = 0.0
    for modes in (16, 32):
        for delays in ((1, 1), (1, 3, 9)):
            u = build_unitary(random_loop_spec(modes, delays, seed=2024))
            worst = max(worst, unitarity_defect(u))
    identity_ok = True
    for modes, delays in ((16, (1, 1)), (32, (1, 3, 9))):
        spec = CircuitSpec(
            kind="loop", modes=modes, delays=delays,
            coupling_angles=tuple(tuple([0.0] * (modes - d)) for d in delays),
        )
        identity_ok &= bool(np.array_equal(build_unitary(spec), np.eye(modes)))
    _report(
        "loop-circuit-unitarity",
        worst <= 1e-10 and identity_ok,
        f"1-1 and 1-3-9 at N=16,32: worst defect {worst:.2e}, zero angles exact identity: {identity_ok}",
    )


def test_scaling_trend():
    small = bench_sampling(8, 16, shots=500, repeats=5, seed=2024)
    large = bench_sampling(16, 32, shots=500, repeats=5, seed=2024)
    ratio = large.median_seconds / small.median_seconds
    _report(
        "scaling-trend",
        ratio >= 50.0,
        f"500 samples: (8,16) {small.median_seconds * 1e3:.1f} ms, "
        f"(16,32) {large.median_seconds:.2f} s, ratio {ratio:.0f} (>= 50)",
    )


def test_postselection_acceptance():
    spec = InputSpec(modes=32, input_modes=tuple(range(32)),
                     transmission=0.5, postselect_min=16)
    shots = apply_loss_and_postselect(spec, 100_000, seed=10)
    tail = stats.binom.sf(15, 32, 0.5)
    sigma = np.sqrt(tail * (1 - tail) / 100_000)
    dev = abs(shots.acceptance_rate - tail)
    _report(
        "postselection-acceptance",
        dev <= 3 * sigma,
        f"measured {shots.acceptance_rate:.5f} vs Binomial(32,0.5) tail {tail:.5f}, "
        f"|diff| = {dev:.5f} <= 3 sigma = {3 * sigma:.5f}",
    )


def test_cli_reproducibility(tmp_path, monkeypatch):
    runner = CliRunner()

    def run(*args):
        res = runner.invoke(main, [str(a) for a in args])
        assert res.exit_code == 0, res.output
        return res

    def artifacts(tag, threads):
        # identical flags per run: only the working directory changes,
        # plus --threads, which must not influence any byte
        d = tmp_path / tag
        d.mkdir()
        monkeypatch.chdir(d)
        run("unitary", "--modes", 16, "--kind", "haar", "--seed", 7,
            "--out", "h.qum")
        run("unitary", "--modes", 16, "--kind", "loop", "--delays", "1,3,9",
            "--seed", 7, "--out", "l.qum")
        run("unitary", "--modes", 6, "--kind", "haar", "--seed", 9,
            "--out", "h6.qum")
        run("sample", "--unitary", "h.qum", "--photons", 4, "--count", 2000,
            "--seed", 3, "--threads", threads, "--out", "boson.qls")
        run("sample", "--unitary", "l.qum", "--photons", 8, "--count", 500,
            "--mode", "dist", "--eta", 0.6, "--postselect-min", 4, "--seed", 4,
            "--threads", threads, "--out", "lossy.qls", "--csv-out", "lossy.csv")
        run("exact", "--unitary", "h6.qum", "--photons", 2, "--out", "exact.csv")
        run("latent", "--kind", "gaussian", "--dim", 16, "--count", 500,
            "--seed", 1, "--out", "g.qls")
        run("latent", "--kind", "bernoulli", "--dim", 16, "--count", 500,
            "--seed", 1, "--out", "be.qls")
        run("latent", "--kind", "boson", "--dim", 16, "--count", 300, "--seed", 2,
            "--circuit", "loop", "--delays", "1,1", "--threads", threads,
            "--dtype", "i32", "--out", "bz.qls")
        return {p.name: p.read_bytes() for p in sorted(d.iterdir())}

    first = artifacts("run1", 1)
    second = artifacts("run2", 1)
    threaded = artifacts("run3", 8)
    same_rerun = first == second
    same_threads = first == threaded
    _report(
        "cli-reproducibility",
        same_rerun and same_threads,
        f"{len(first)} artifacts; rerun identical: {same_rerun}, "
        f"threads 1 vs 8 identical: {same_threads}",
    )
