"""Experiment configuration, logged in full next to every run."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

QUANTUM_TOY = "quantum-toy"
BERNOULLI_TOY = "bernoulli-toy"
GAUSSIANS_2D = "gaussians-2d"

DATASETS = (QUANTUM_TOY, BERNOULLI_TOY, GAUSSIANS_2D)
LATENTS = ("gaussian", "bernoulli", "dist", "boson")

#: offsets mixed into the sweep seed; the dataset circuit and the latent
#: circuit must never share a seed
DATA_SEED_OFFSET = 1_000_003
LATENT_SEED_OFFSET = 2_000_033


@dataclass
class ExperimentConfig:
    dataset: str = QUANTUM_TOY
    latent_kind: str = "boson"
    latent_dim: int = 16
    data_dim: int = 16
    hidden: int = 512
    iterations: int = 40_000
    batch_size: int = 500
    critic_steps: int = 5
    learning_rate: float = 5e-4
    gp_weight: float = 10.0
    eval_every: int = 500
    eval_count: int = 8192
    pool_size: int = 200_000
    center_latents: bool = False
    # 2D mixture layout (logged, nowhere asserted)
    n_modes: int = 8
    mode_radius: float = 2.0
    mode_sigma: float = 0.05
    # photonic circuit family for latents and the quantum dataset
    circuit: str = "haar"
    delays: tuple[int, ...] = ()

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise ValueError(f"unknown dataset {self.dataset!r}")
        if self.latent_kind not in LATENTS:
            raise ValueError(f"unknown latent kind {self.latent_kind!r}")
        if self.dataset == GAUSSIANS_2D:
            self.data_dim = 2

    def data_seed(self, seed: int) -> int:
        return seed + DATA_SEED_OFFSET

    def latent_seed(self, seed: int) -> int:
        out = seed + LATENT_SEED_OFFSET
        assert out != self.data_seed(seed)
        return out

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        data = json.loads(text)
        data["delays"] = tuple(data.get("delays", ()))
        return cls(**data)


def reduced_toy_config(latent_kind: str, **overrides) -> ExperimentConfig:
    """Desk-scale toy preset: shorter schedule and narrower nets."""
    params = dict(dataset=QUANTUM_TOY, latent_kind=latent_kind, hidden=256,
                  iterations=8_000, batch_size=250, eval_every=500)
    params.update(overrides)
    return ExperimentConfig(**params)


def blobs_config(latent_kind: str, **overrides) -> ExperimentConfig:
    """2D mixture preset: 1-3-9 loop latents, centered, LeakyReLU nets."""
    params = dict(dataset=GAUSSIANS_2D, latent_kind=latent_kind, hidden=256,
                  iterations=5_000, batch_size=256, center_latents=True,
                  circuit="loop", delays=(1, 3, 9), eval_every=500,
                  eval_count=10_000, pool_size=100_000)
    params.update(overrides)
    return ExperimentConfig(**params)


def write_config(path, config: ExperimentConfig) -> None:
    Path(path).write_text(config.to_json() + "\n")


def read_config(path) -> ExperimentConfig:
    return ExperimentConfig.from_json(Path(path).read_text())
