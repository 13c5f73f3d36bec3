"""End-to-end experiment runs: data via the sampling CLI, training, logs."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from multiprocessing import get_context
from pathlib import Path

import numpy as np
import torch

from .config import GAUSSIANS_2D, ExperimentConfig, write_config
from .data import mixture_centers, prepare_run_files
from .metrics import l1_to_nearest_integer, mode_coverage
from .wgan import MetricLog, Trainer, TrainingDiverged


def run_dir(outdir, config: ExperimentConfig, seed: int) -> Path:
    return Path(outdir) / f"{config.dataset}_{config.latent_kind}_s{seed}"


def _write_metric_csv(path: Path, log: MetricLog) -> None:
    lines = ["iteration,metric"]
    lines += [f"{it},{val!r}" for it, val in log.rows()]
    path.write_text("\n".join(lines) + "\n")


def run_single(config: ExperimentConfig, seed: int, outdir) -> dict:
    """One training run; writes config, metric log and result next to its data."""
    rdir = run_dir(outdir, config, seed)
    rdir.mkdir(parents=True, exist_ok=True)
    write_config(rdir / "config.json", config)

    files = prepare_run_files(config, seed, rdir)
    if config.dataset == GAUSSIANS_2D:
        centers = mixture_centers(config)
        metric_fn = lambda samples: float(mode_coverage(samples, centers)[1].min())
    else:
        metric_fn = l1_to_nearest_integer

    trainer = Trainer(config, files["data"], files["latents"], seed,
                      metric_fn=metric_fn)
    result = {
        "dataset": config.dataset,
        "latent_kind": config.latent_kind,
        "seed": seed,
        "iterations": config.iterations,
        "data_circuit_seed": files["data_circuit_seed"],
        "latent_circuit_seed": files["latent_circuit_seed"],
    }
    try:
        log = trainer.train()
    except TrainingDiverged as exc:
        result["status"] = "diverged"
        result["error"] = str(exc)
        (rdir / "result.json").write_text(json.dumps(result, indent=2) + "\n")
        raise
    _write_metric_csv(rdir / "metrics.csv", log)
    result["status"] = "ok"
    result["final_metric"] = log.final
    if config.dataset == GAUSSIANS_2D:
        samples = trainer.generate(config.eval_count)
        covered, masses = mode_coverage(samples, mixture_centers(config))
        result["modes_covered"] = covered
        result["mode_masses"] = [float(m) for m in masses]
        np.save(rdir / "generated.npy", samples)
    (rdir / "result.json").write_text(json.dumps(result, indent=2) + "\n")
    return result


def _sweep_worker(args) -> dict:
    config_json, seed, outdir, threads = args
    torch.set_num_threads(threads)
    config = ExperimentConfig.from_json(config_json)
    return run_single(config, seed, outdir)


def sweep(configs: list[ExperimentConfig], seeds, outdir, jobs: int = 1) -> list[dict]:
    """All (config, seed) runs; multi-seed sweeps parallelize across processes."""
    tasks = [(c.to_json(), s, str(outdir)) for c in configs for s in seeds]
    if jobs <= 1:
        return [_sweep_worker((cj, s, od, torch.get_num_threads()))
                for cj, s, od in tasks]
    per_proc = max(1, (os.cpu_count() or 1) // jobs)
    work = [(cj, s, od, per_proc) for cj, s, od in tasks]
    with ProcessPoolExecutor(max_workers=jobs, mp_context=get_context("spawn")) as pool:
        return list(pool.map(_sweep_worker, work))
