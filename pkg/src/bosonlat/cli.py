"""Command-line surface for scripted experiment pipelines.

Exit codes: 0 success, 1 failed validation, 2 usage error, 3 I/O error,
4 cost-guard refusal.  Artifacts are byte-identical across runs with the
same flags; ``--threads`` only affects wall time, never output, and is
therefore excluded from the provenance echo.
"""

from __future__ import annotations

import functools
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, _kernels, io
from .circuits import HAAR, LOOP, CircuitSpec, random_loop_spec, build_unitary, \
    default_input_modes, read_spec, write_spec
from .diagnostics import EmpiricalDistribution, bench_sampling, tvd
from .errors import GuardError
from .latents import (
    BERNOULLI,
    GAUSSIAN,
    center,
    derive_circuit_seed,
    gen_bernoulli,
    gen_gaussian,
    gen_photonic,
    photonic_circuit,
)
from .sampling import (
    BOSON,
    DISTINGUISHABLE,
    DistributionTable,
    InputSpec,
    exact_distribution,
    sample_boson,
    sample_distinguishable,
)

_MODE_NAMES = {"boson": BOSON, "dist": DISTINGUISHABLE}


def _resolve_out(path: str) -> Path:
    base = os.environ.get("BOSONLAT_OUTDIR", "")
    p = Path(path)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip() != "")
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated integers, got {text!r}")


def _write_meta(out: Path, command: str, flags: dict, extra: dict | None = None) -> None:
    record = {"command": command, "version": __version__}
    record.update({k: v for k, v in flags.items() if v is not None})
    if extra:
        record.update(extra)
    io.write_kv(out.with_name(out.name + ".meta"), record)


def _guarded(func):
    """Map failures onto the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except GuardError as exc:
            click.echo(f"refused: {exc}", err=True)
            sys.exit(4)
        except OSError as exc:
            click.echo(f"I/O error: {exc}", err=True)
            sys.exit(3)
        except (ValueError, RuntimeError) as exc:
            raise click.UsageError(str(exc))

    return wrapper


@click.group()
@click.version_option(__version__)
def main():
    """Linear-optical sampling toolkit: circuits, samplers, latent exports."""


@main.command("unitary")
@click.option("--modes", type=int, required=True, help="Number of optical modes N.")
@click.option("--kind", type=click.Choice([HAAR, LOOP]), default=HAAR, show_default=True)
@click.option("--delays", default="", help="Loop delays, e.g. 1,1 or 1,3,9.")
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", required=True, help="QUM1 output path.")
@_guarded
def cmd_unitary(modes, kind, delays, seed, out_path):
    """Build a circuit and export its transfer matrix (QUM1 + spec sidecar)."""
    out = _resolve_out(out_path)
    if kind == HAAR:
        if delays:
            raise click.UsageError("--delays only applies to --kind loop")
        spec = CircuitSpec(kind=HAAR, modes=modes, seed=seed)
    else:
        delay_list = _parse_ints(delays, "--delays")
        if not delay_list:
            raise click.UsageError("--kind loop requires --delays")
        spec = random_loop_spec(modes, delay_list, seed)
    u = build_unitary(spec)
    io.write_unitary(out, u)
    write_spec(out.with_name(out.name + ".spec"), spec)
    _write_meta(out, "unitary",
                {"modes": modes, "kind": kind, "delays": delays or None, "seed": seed,
                 "out": str(out_path)})
    click.echo(f"wrote {out} ({modes} modes, {kind})")


def _load_input_spec(unitary_path: Path, u: np.ndarray, photons: int,
                     input_modes: str, eta: float, postselect_min: int
                     ) -> tuple[InputSpec, dict]:
    n = u.shape[0]
    spec_path = unitary_path.with_name(unitary_path.name + ".spec")
    circuit = read_spec(spec_path) if spec_path.exists() else None
    if input_modes:
        modes_list = _parse_ints(input_modes, "--input-modes")
        if photons and photons != len(modes_list):
            raise click.UsageError("--photons disagrees with --input-modes")
    else:
        kind = circuit.kind if circuit is not None else HAAR
        modes_list = default_input_modes(kind, n, photons)
    provenance = {}
    if circuit is not None:
        provenance["circuit_kind"] = circuit.kind
        provenance["circuit_seed"] = circuit.seed
        if circuit.delays:
            provenance["circuit_delays"] = ",".join(str(d) for d in circuit.delays)
    spec = InputSpec(modes=n, input_modes=modes_list, transmission=eta,
                     postselect_min=postselect_min)
    return spec, provenance


@main.command("sample")
@click.option("--unitary", "unitary_path", required=True, help="QUM1 file.")
@click.option("--photons", type=int, default=0, help="Photon count k (default: from --input-modes).")
@click.option("--count", type=int, required=True, help="Accepted samples to produce.")
@click.option("--mode", type=click.Choice(sorted(_MODE_NAMES)), default="boson", show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--eta", type=float, default=1.0, show_default=True, help="Per-photon transmission.")
@click.option("--postselect-min", type=int, default=0, show_default=True,
              help="Discard shots with fewer detected photons.")
@click.option("--input-modes", default="", help="Explicit comma-separated input modes.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--dtype", type=click.Choice(["i32", "f32"]), default="i32", show_default=True)
@click.option("--csv-out", default="", help="Also write a CSV copy.")
@click.option("--out", "out_path", required=True, help="QLS1 output path.")
@_guarded
def cmd_sample(unitary_path, photons, count, mode, seed, eta, postselect_min,
               input_modes, threads, dtype, csv_out, out_path):
    """Sample output configurations from a stored circuit (QLS1 + metadata)."""
    upath = _resolve_out(unitary_path)
    out = _resolve_out(out_path)
    u = io.read_unitary(upath)
    if not input_modes and photons <= 0:
        raise click.UsageError("give --photons or --input-modes")
    spec, provenance = _load_input_spec(upath, u, photons, input_modes, eta,
                                        postselect_min)
    sampler = sample_boson if _MODE_NAMES[mode] == BOSON else sample_distinguishable
    batch = sampler(u, spec, count, seed, threads=threads)
    io.write_samples(out, batch.occupations, dtype=dtype)
    if csv_out:
        io.write_samples_csv(_resolve_out(csv_out), batch.occupations)
    _write_meta(out, "sample",
                {"unitary": str(unitary_path), "mode": mode, "count": count,
                 "seed": seed, "dtype": dtype, **provenance},
                batch.metadata())
    click.echo(f"wrote {out} ({count} x {spec.modes}, {mode}, "
               f"acceptance {batch.acceptance_rate:.6g})")


@main.command("exact")
@click.option("--unitary", "unitary_path", required=True, help="QUM1 file.")
@click.option("--photons", type=int, default=0)
@click.option("--mode", type=click.Choice(sorted(_MODE_NAMES)), default="boson", show_default=True)
@click.option("--input-modes", default="")
@click.option("--out", "out_path", required=True, help="CSV output path.")
@_guarded
def cmd_exact(unitary_path, photons, mode, input_modes, out_path):
    """Exhaustively enumerate the exact output distribution (CSV)."""
    upath = _resolve_out(unitary_path)
    out = _resolve_out(out_path)
    u = io.read_unitary(upath)
    if not input_modes and photons <= 0:
        raise click.UsageError("give --photons or --input-modes")
    spec, provenance = _load_input_spec(upath, u, photons, input_modes, 1.0, 0)
    table = exact_distribution(u, spec, statistics=_MODE_NAMES[mode])
    io.write_distribution_csv(out, table.configs, table.probs)
    _write_meta(out, "exact",
                {"unitary": str(unitary_path), "mode": mode,
                 "photons": spec.photons,
                 "input_modes": ",".join(str(m) for m in spec.input_modes),
                 "entries": len(table), **provenance})
    click.echo(f"wrote {out} ({len(table)} configurations)")


@main.command("validate")
@click.option("--samples", "samples_path", required=True, help="QLS1 sample batch.")
@click.option("--exact", "exact_path", required=True, help="Exact-table CSV.")
@click.option("--tvd-max", type=float, default=0.01, show_default=True)
@click.option("--hist-out", default="", help="Also write the empirical histogram CSV.")
@_guarded
def cmd_validate(samples_path, exact_path, tvd_max, hist_out):
    """Compare an empirical batch against an exact table (exit 1 on FAIL)."""
    samples, _ = io.read_samples(_resolve_out(samples_path))
    configs, probs = io.read_distribution_csv(_resolve_out(exact_path))
    photons = int(configs[0].sum()) if len(configs) else 0
    table = DistributionTable(configs=configs, probs=probs,
                              photons=photons, modes=configs.shape[1])
    emp = EmpiricalDistribution.from_samples(samples)
    if hist_out:
        keys = sorted(emp.counts)
        io.write_histogram_csv(_resolve_out(hist_out),
                               np.asarray(keys, dtype=np.int32),
                               np.asarray([emp.counts[k] for k in keys]),
                               emp.shots)
    distance = tvd(emp, table)
    verdict = "PASS" if distance <= tvd_max else "FAIL"
    click.echo(f"tvd={distance:.6f} threshold={tvd_max:g} {verdict}")
    if verdict == "FAIL":
        sys.exit(1)


@main.command("latent")
@click.option("--kind", type=click.Choice([GAUSSIAN, BERNOULLI, "dist", "boson"]),
              required=True)
@click.option("--dim", type=int, required=True, help="Latent dimension L.")
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--photons", type=int, default=0, help="Photonic kinds: photon count (default L/2).")
@click.option("--circuit", type=click.Choice([HAAR, LOOP]), default=HAAR, show_default=True)
@click.option("--delays", default="", help="Loop delays for --circuit loop.")
@click.option("--circuit-seed", type=int, default=None,
              help="Fix the circuit instead of re-randomizing it per seed.")
@click.option("--eta", type=float, default=1.0, show_default=True)
@click.option("--postselect-min", type=int, default=0, show_default=True)
@click.option("--center", "do_center", is_flag=True, help="Subtract the batch column means.")
@click.option("--dtype", type=click.Choice(["f32", "i32"]), default="f32", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--csv-out", default="", help="Also write a CSV copy.")
@click.option("--out", "out_path", required=True, help="QLS1 output path.")
@_guarded
def cmd_latent(kind, dim, count, seed, photons, circuit, delays, circuit_seed,
               eta, postselect_min, do_center, dtype, threads, csv_out, out_path):
    """Generate a latent batch of any of the four supported kinds."""
    out = _resolve_out(out_path)
    if kind == GAUSSIAN:
        batch = gen_gaussian(dim, count, seed)
    elif kind == BERNOULLI:
        batch = gen_bernoulli(dim, count, seed)
    else:
        photon_count = photons if photons > 0 else dim // 2
        cseed = derive_circuit_seed(seed) if circuit_seed is None else circuit_seed
        delay_list = _parse_ints(delays, "--delays") if delays else None
        circ = photonic_circuit(circuit, dim, cseed, delays=delay_list)
        input_spec = InputSpec(
            modes=dim,
            input_modes=default_input_modes(circ.kind, dim, photon_count),
            transmission=eta,
            postselect_min=postselect_min,
        )
        batch = gen_photonic(_MODE_NAMES[kind] if kind in _MODE_NAMES else kind,
                             circ, input_spec, count, seed, threads=threads)
    if do_center:
        batch = center(batch, policy="batch-mean")
    io.write_samples(out, batch.samples, dtype=dtype)
    if csv_out:
        io.write_samples_csv(_resolve_out(csv_out), batch.samples)
    _write_meta(out, "latent",
                {"dim": dim, "count": count, "seed": seed, "dtype": dtype,
                 "photons": photons or None, "circuit": circuit if kind in ("dist", "boson") else None,
                 "delays": delays or None,
                 "circuit_seed_flag": circuit_seed},
                batch.metadata())
    click.echo(f"wrote {out} ({count} x {dim}, {batch.kind})")


@main.command("bench")
@click.option("--photons", type=int, default=None)
@click.option("--modes", type=int, default=None)
@click.option("--shots", type=int, default=500, show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--backend", type=click.Choice(["compiled", "fallback", "both", "active"]),
              default="active", show_default=True)
@click.option("--out", "out_path", default="", help="Optional key=value report file.")
@_guarded
def cmd_bench(photons, modes, shots, repeats, backend, out_path):
    """Time the boson sampler; default sizes (8,16) and (16,32) with ratio."""
    if (photons is None) != (modes is None):
        raise click.UsageError("give both --photons and --modes, or neither")
    pairs = [(photons, modes)] if photons is not None else [(8, 16), (16, 32)]
    backends: list[str | None]
    if backend == "both":
        backends = [b for b in ("compiled", "fallback") if b in _kernels.available_backends()]
    elif backend == "active":
        backends = [None]
    else:
        backends = [backend]
    report: dict = {"shots": shots, "repeats": repeats}
    for be in backends:
        results = [bench_sampling(k, n, shots=shots, repeats=repeats, backend=be)
                   for k, n in pairs]
        for res in results:
            click.echo(res.line())
            report.update(res.kv(prefix=f"{res.backend}_"))
        if len(results) == 2:
            ratio = results[1].median_seconds / results[0].median_seconds
            click.echo(f"scaling ratio ({results[1].photons},{results[1].modes}) / "
                       f"({results[0].photons},{results[0].modes}) = {ratio:.1f}")
            report[f"ratio_{results[0].backend}"] = repr(ratio)
    if out_path:
        io.write_kv(_resolve_out(out_path), report)


if __name__ == "__main__":
    main()
