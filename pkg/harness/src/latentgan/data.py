"""Dataset and latent-pool construction.

All photonic data (and for uniformity every latent pool) is produced by
the sampling CLI and read back from QLS1 files; only the 2D Gaussian
mixture is synthesized locally.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import BERNOULLI_TOY, GAUSSIANS_2D, QUANTUM_TOY, ExperimentConfig
from .primary import run_cli
from .qls import read_meta, read_qls


def make_toy_dataset(kind: str, seed: int, size: int, out: Path,
                     circuit: str = "haar", delays=()) -> Path:
    """Write a toy dataset file via the sampling CLI and return its path."""
    out = Path(out)
    if kind == QUANTUM_TOY:
        args = ["latent", "--kind", "boson", "--dim", 16, "--count", size,
                "--seed", seed, "--dtype", "i32", "--circuit", circuit]
        if delays:
            args += ["--delays", ",".join(str(d) for d in delays)]
        run_cli(*args, "--out", out)
    elif kind == BERNOULLI_TOY:
        run_cli("latent", "--kind", "bernoulli", "--dim", 16, "--count", size,
                "--seed", seed, "--dtype", "i32", "--out", out)
    else:
        raise ValueError(f"not a CLI-backed toy dataset: {kind!r}")
    return out


def make_latent_pool(config: ExperimentConfig, seed: int, out: Path) -> Path:
    """Write the latent pool for one run via the sampling CLI."""
    out = Path(out)
    args = ["latent", "--kind", config.latent_kind, "--dim", config.latent_dim,
            "--count", config.pool_size, "--seed", seed]
    if config.latent_kind in ("dist", "boson"):
        args += ["--circuit", config.circuit]
        if config.delays:
            args += ["--delays", ",".join(str(d) for d in config.delays)]
    if config.center_latents:
        args.append("--center")
    run_cli(*args, "--out", out)
    return out


def gaussian_mixture(config: ExperimentConfig, seed: int, size: int) -> np.ndarray:
    """Equally weighted Gaussian modes on a circle."""
    rng = np.random.default_rng(seed)
    centers = mixture_centers(config)
    which = rng.integers(0, config.n_modes, size=size)
    return centers[which] + rng.normal(scale=config.mode_sigma, size=(size, 2))


def mixture_centers(config: ExperimentConfig) -> np.ndarray:
    angles = 2 * np.pi * np.arange(config.n_modes) / config.n_modes
    return config.mode_radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def prepare_run_files(config: ExperimentConfig, seed: int, workdir: Path) -> dict:
    """Create the dataset and latent pool for one (config, seed) run.

    Returns arrays plus the file paths and circuit provenance pulled from
    the CLI metadata sidecars.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    info: dict = {"seed": seed}

    latent_path = workdir / f"latent_{config.latent_kind}_s{seed}.qls"
    make_latent_pool(config, config.latent_seed(seed), latent_path)
    info["latent_file"] = str(latent_path)
    latent_meta = read_meta(latent_path.with_name(latent_path.name + ".meta"))
    info["latent_circuit_seed"] = latent_meta.get("circuit_seed")

    if config.dataset == GAUSSIANS_2D:
        data = gaussian_mixture(config, config.data_seed(seed), config.pool_size)
        info["data_file"] = None
        info["data_circuit_seed"] = None
    else:
        data_path = workdir / f"data_{config.dataset}_s{seed}.qls"
        make_toy_dataset(config.dataset, config.data_seed(seed), config.pool_size,
                         data_path, circuit=config.circuit, delays=config.delays)
        data = read_qls(data_path)
        info["data_file"] = str(data_path)
        data_meta = read_meta(data_path.with_name(data_path.name + ".meta"))
        info["data_circuit_seed"] = data_meta.get("circuit_seed")

    if info["data_circuit_seed"] is not None:
        assert info["data_circuit_seed"] != info["latent_circuit_seed"], \
            "dataset and latent circuits must be drawn independently"

    latents = read_qls(latent_path)
    return {"data": data, "latents": latents, **info}
