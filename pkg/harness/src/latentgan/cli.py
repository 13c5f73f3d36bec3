"""latentgan command line: datasets, training runs, sweeps, reports.

Exit codes: 0 success, 2 usage error, 5 training divergence.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import (
    BERNOULLI_TOY,
    DATASETS,
    GAUSSIANS_2D,
    LATENTS,
    QUANTUM_TOY,
    ExperimentConfig,
    blobs_config,
    reduced_toy_config,
)
from .data import make_toy_dataset, mixture_centers
from .experiments import run_single, sweep
from .report import (
    aggregate,
    collect_results,
    plot_curves,
    plot_generated_2d,
    render_table,
    write_summary,
)
from .wgan import TrainingDiverged


@click.group()
def main():
    """GAN benchmarking over exported latent distributions."""


@main.command("make-data")
@click.option("--kind", type=click.Choice([QUANTUM_TOY, BERNOULLI_TOY]), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--size", type=int, default=200_000, show_default=True)
@click.option("--out", "out_path", required=True)
def cmd_make_data(kind, seed, size, out_path):
    """Produce a toy dataset file through the sampling CLI."""
    path = make_toy_dataset(kind, seed, size, Path(out_path))
    click.echo(f"wrote {path}")


def _build_config(dataset, latent, preset, iterations, hidden, batch_size,
                  learning_rate=None):
    if preset == "reduced":
        cfg = reduced_toy_config(latent, dataset=dataset)
    elif preset == "blobs":
        cfg = blobs_config(latent)
    elif preset == "full-scale":
        cfg = ExperimentConfig(dataset=dataset, latent_kind=latent)
    else:
        raise click.UsageError(f"unknown preset {preset}")
    if iterations is not None:
        cfg.iterations = iterations
    if hidden is not None:
        cfg.hidden = hidden
    if batch_size is not None:
        cfg.batch_size = batch_size
    if learning_rate is not None:
        cfg.learning_rate = learning_rate
    return cfg


@main.command("train")
@click.option("--dataset", type=click.Choice(sorted(DATASETS)), default=QUANTUM_TOY,
              show_default=True)
@click.option("--latent", type=click.Choice(LATENTS), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--preset", type=click.Choice(["reduced", "blobs", "full-scale"]),
              default="reduced", show_default=True)
@click.option("--iterations", type=int, default=None)
@click.option("--hidden", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--learning-rate", type=float, default=None)
@click.option("--outdir", required=True)
def cmd_train(dataset, latent, seed, preset, iterations, hidden, batch_size,
              learning_rate, outdir):
    """Run one training experiment and log its metric trajectory."""
    if dataset == GAUSSIANS_2D and preset != "blobs":
        preset = "blobs"
    cfg = _build_config(dataset, latent, preset, iterations, hidden, batch_size,
                        learning_rate)
    try:
        result = run_single(cfg, seed, outdir)
    except TrainingDiverged as exc:
        click.echo(f"diverged: {exc}", err=True)
        sys.exit(5)
    click.echo(f"final metric: {result['final_metric']!r} "
               f"({result['dataset']}, {result['latent_kind']}, seed {seed})")


@main.command("sweep")
@click.option("--dataset", type=click.Choice(sorted(DATASETS)), default=QUANTUM_TOY,
              show_default=True)
@click.option("--latents", default="boson,gaussian", show_default=True,
              help="Comma-separated latent kinds.")
@click.option("--seeds", type=int, default=6, show_default=True)
@click.option("--preset", type=click.Choice(["reduced", "blobs", "full-scale"]),
              default="reduced", show_default=True)
@click.option("--iterations", type=int, default=None)
@click.option("--hidden", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--outdir", required=True)
def cmd_sweep(dataset, latents, seeds, preset, iterations, hidden, batch_size,
              jobs, outdir):
    """Train every (latent, seed) combination and print the summary table."""
    if dataset == GAUSSIANS_2D and preset != "blobs":
        preset = "blobs"
    kinds = [k.strip() for k in latents.split(",") if k.strip()]
    configs = [_build_config(dataset, k, preset, iterations, hidden, batch_size)
               for k in kinds]
    try:
        sweep(configs, range(seeds), outdir, jobs=jobs)
    except TrainingDiverged as exc:
        click.echo(f"diverged: {exc}", err=True)
        sys.exit(5)
    rows = aggregate(collect_results(outdir))
    click.echo(render_table(rows))
    write_summary(outdir, rows)


@main.command("report")
@click.option("--outdir", required=True)
def cmd_report(outdir):
    """Aggregate finished runs into summary.csv and figures."""
    results = collect_results(outdir)
    if not results:
        raise click.UsageError(f"no result.json files under {outdir}")
    rows = aggregate(results)
    click.echo(render_table(rows))
    summary = write_summary(outdir, rows)
    click.echo(f"wrote {summary}")
    curve = plot_curves(outdir)
    if curve:
        click.echo(f"wrote {curve}")
    if any(r["dataset"] == GAUSSIANS_2D for r in results):
        for path in plot_generated_2d(outdir, mixture_centers(blobs_config("boson"))):
            click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
