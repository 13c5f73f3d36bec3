import numpy as np
import pytest
from click.testing import CliRunner

from bosonlat import bunching_fraction, unitarity_defect
from bosonlat.cli import main
from bosonlat.io import read_kv, read_samples, read_unitary, write_unitary
from bosonlat.circuits import read_spec

HOM = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    result = runner.invoke(main, [str(a) for a in args])
    if result.exit_code != 0 and result.exception is not None:
        if not isinstance(result.exception, SystemExit):
            raise result.exception
    return result


def test_unitary_haar(tmp_path, runner):
    out = tmp_path / "u.qum"
    res = _invoke(runner, "unitary", "--modes", 16, "--kind", "haar",
                  "--seed", 7, "--out", out)
    assert res.exit_code == 0
    u = read_unitary(out)
    assert u.shape == (16, 16)
    assert unitarity_defect(u) <= 1e-10
    assert read_kv(tmp_path / "u.qum.meta")["command"] == "unitary"


def test_unitary_loop_spec_sidecar(tmp_path, runner):
    out = tmp_path / "l.qum"
    res = _invoke(runner, "unitary", "--modes", 16, "--kind", "loop",
                  "--delays", "1,3,9", "--seed", 7, "--out", out)
    assert res.exit_code == 0
    spec = read_spec(tmp_path / "l.qum.spec")
    assert sum(len(a) for a in spec.coupling_angles) == 35


def test_byte_identical_reruns(tmp_path, runner):
    a, b = tmp_path / "a.qum", tmp_path / "b.qum"
    for out in (a, b):
        _invoke(runner, "unitary", "--modes", 8, "--kind", "haar",
                "--seed", 3, "--out", out)
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.qum.spec").read_text() == (tmp_path / "b.qum.spec").read_text()


def test_sample_identity_circuit(tmp_path, runner):
    upath = tmp_path / "id.qum"
    write_unitary(upath, np.eye(6, dtype=complex))
    out = tmp_path / "s.qls"
    res = _invoke(runner, "sample", "--unitary", upath, "--photons", 2,
                  "--count", 50, "--seed", 1, "--out", out)
    assert res.exit_code == 0
    occ, dtype = read_samples(out)
    assert dtype == "i32"
    assert np.array_equal(occ, np.tile([1, 1, 0, 0, 0, 0], (50, 1)))


def test_sample_modes_differ_on_hom(tmp_path, runner):
    upath = tmp_path / "hom.qum"
    write_unitary(upath, HOM)
    frac = {}
    for mode in ("boson", "dist"):
        out = tmp_path / f"{mode}.qls"
        res = _invoke(runner, "sample", "--unitary", upath, "--photons", 2,
                      "--count", 20000, "--mode", mode, "--seed", 5, "--out", out)
        assert res.exit_code == 0
        occ, _ = read_samples(out)
        frac[mode] = bunching_fraction(occ)
    assert frac["boson"] == 1.0
    assert abs(frac["dist"] - 0.5) <= 0.02


def test_sample_threads_reproducible(tmp_path, runner):
    upath = tmp_path / "u.qum"
    _invoke(runner, "unitary", "--modes", 8, "--kind", "haar", "--seed", 2,
            "--out", upath)
    outs = []
    for threads in (1, 8):
        out = tmp_path / f"t{threads}.qls"
        res = _invoke(runner, "sample", "--unitary", upath, "--photons", 4,
                      "--count", 3000, "--seed", 9, "--threads", threads,
                      "--out", out)
        assert res.exit_code == 0
        outs.append(out.read_bytes())
        meta = read_kv(tmp_path / f"t{threads}.qls.meta")
        assert "threads" not in meta  # non-semantic flag stays out of provenance
    assert outs[0] == outs[1]
    assert (tmp_path / "t1.qls.meta").read_text() == (tmp_path / "t8.qls.meta").read_text()


def test_postselection_acceptance_reported(tmp_path, runner):
    upath = tmp_path / "u32.qum"
    _invoke(runner, "unitary", "--modes", 32, "--kind", "haar", "--seed", 1,
            "--out", upath)
    out = tmp_path / "ps.qls"
    res = _invoke(runner, "sample", "--unitary", upath, "--input-modes",
                  ",".join(str(i) for i in range(32)), "--count", 200,
                  "--mode", "dist", "--eta", 0.5, "--postselect-min", 16,
                  "--seed", 4, "--out", out)
    assert res.exit_code == 0
    meta = read_kv(out.with_name(out.name + ".meta"))
    assert abs(float(meta["acceptance_rate"]) - 0.5699749670457095) < 0.12
    occ, _ = read_samples(out)
    assert occ.sum(axis=1).min() >= 16


def test_exact_validate_pipeline(tmp_path, runner):
    upath = tmp_path / "u.qum"
    _invoke(runner, "unitary", "--modes", 6, "--kind", "haar", "--seed", 5,
            "--out", upath)
    table = tmp_path / "exact.csv"
    res = _invoke(runner, "exact", "--unitary", upath, "--photons", 3,
                  "--out", table)
    assert res.exit_code == 0
    samples = tmp_path / "s.qls"
    _invoke(runner, "sample", "--unitary", upath, "--photons", 3,
            "--count", 100000, "--seed", 6, "--out", samples)
    hist = tmp_path / "hist.csv"
    res = _invoke(runner, "validate", "--samples", samples, "--exact", table,
                  "--tvd-max", 0.01, "--hist-out", hist)
    assert res.exit_code == 0
    assert "PASS" in res.output
    lines = hist.read_text().splitlines()
    assert lines[0].endswith("count,frequency")
    counts = [int(line.split(",")[-2]) for line in lines[1:]]
    assert sum(counts) == 100000
    # mismatched statistics must fail at a tight threshold
    dist_table = tmp_path / "dist.csv"
    _invoke(runner, "exact", "--unitary", upath, "--photons", 3,
            "--mode", "dist", "--out", dist_table)
    res = _invoke(runner, "validate", "--samples", samples, "--exact", dist_table,
                  "--tvd-max", 0.01)
    assert res.exit_code == 1
    assert "FAIL" in res.output


def test_guard_exit_code(tmp_path, runner):
    upath = tmp_path / "u.qum"
    _invoke(runner, "unitary", "--modes", 16, "--kind", "haar", "--seed", 5,
            "--out", upath)
    res = runner.invoke(main, ["exact", "--unitary", str(upath), "--photons", "3",
                               "--out", str(tmp_path / "x.csv")])
    assert res.exit_code == 4


def test_io_exit_code(tmp_path, runner):
    res = runner.invoke(main, ["sample", "--unitary", str(tmp_path / "nope.qum"),
                               "--photons", "2", "--count", "10", "--seed", "0",
                               "--out", str(tmp_path / "s.qls")])
    assert res.exit_code == 3


def test_usage_exit_code(runner):
    res = runner.invoke(main, ["sample", "--count", "10"])
    assert res.exit_code == 2


def test_latent_kinds(tmp_path, runner):
    gauss = tmp_path / "g.qls"
    res = _invoke(runner, "latent", "--kind", "gaussian", "--dim", 16,
                  "--count", 1000, "--seed", 1, "--out", gauss)
    assert res.exit_code == 0
    arr, dtype = read_samples(gauss)
    assert dtype == "f32" and arr.shape == (1000, 16)

    boson = tmp_path / "b.qls"
    res = _invoke(runner, "latent", "--kind", "boson", "--dim", 16, "--count", 500,
                  "--seed", 2, "--dtype", "i32", "--out", boson)
    assert res.exit_code == 0
    arr, dtype = read_samples(boson)
    assert dtype == "i32" and (arr.sum(axis=1) == 8).all()
    meta = read_kv(boson.with_name(boson.name + ".meta"))
    assert meta["circuit_kind"] == "haar"
    assert meta["input_modes"] == ",".join(str(i) for i in range(8))

    centered = tmp_path / "c.qls"
    res = _invoke(runner, "latent", "--kind", "bernoulli", "--dim", 8,
                  "--count", 400, "--seed", 3, "--center",
                  "--csv-out", tmp_path / "c.csv", "--out", centered)
    assert res.exit_code == 0
    arr, _ = read_samples(centered)
    assert abs(arr.mean(axis=0)).max() <= 1e-5
    assert (tmp_path / "c.csv").read_text().startswith("t1,")


def test_latent_circuit_seed_flag(tmp_path, runner):
    a, b, c = (tmp_path / n for n in ("a.qls", "b.qls", "c.qls"))
    _invoke(runner, "latent", "--kind", "boson", "--dim", 8, "--count", 200,
            "--seed", 1, "--circuit-seed", 42, "--out", a)
    _invoke(runner, "latent", "--kind", "boson", "--dim", 8, "--count", 200,
            "--seed", 2, "--circuit-seed", 42, "--out", b)
    _invoke(runner, "latent", "--kind", "boson", "--dim", 8, "--count", 200,
            "--seed", 2, "--out", c)
    meta_a = read_kv(tmp_path / "a.qls.meta")
    meta_b = read_kv(tmp_path / "b.qls.meta")
    meta_c = read_kv(tmp_path / "c.qls.meta")
    assert meta_a["circuit_seed"] == meta_b["circuit_seed"] == "42"
    assert meta_c["circuit_seed"] != "42"  # re-randomized from the batch seed


def test_outdir_env(tmp_path, runner, monkeypatch):
    monkeypatch.setenv("BOSONLAT_OUTDIR", str(tmp_path))
    res = _invoke(runner, "latent", "--kind", "gaussian", "--dim", 4,
                  "--count", 10, "--seed", 0, "--out", "rel.qls")
    assert res.exit_code == 0
    assert (tmp_path / "rel.qls").exists()


def test_bench_command(tmp_path, runner):
    from bosonlat import backend_name

    report = tmp_path / "bench.kv"
    res = _invoke(runner, "bench", "--photons", 3, "--modes", 6, "--shots", 50,
                  "--repeats", 2, "--out", report)
    assert res.exit_code == 0
    data = read_kv(report)
    assert float(data[f"{backend_name()}_k3_n6_median_s"]) > 0
