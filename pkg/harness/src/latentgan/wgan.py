"""WGAN with gradient penalty on file-backed latent pools.

Feedforward generator and critic; the critic takes several steps per
generator step; RMSProp throughout.  Training aborts with
``TrainingDiverged`` the moment any loss stops being finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch
from torch import nn

from .config import GAUSSIANS_2D, ExperimentConfig


class TrainingDiverged(RuntimeError):
    """A loss went non-finite; the run is unusable."""


def make_mlp(sizes, activation) -> nn.Sequential:
    layers = []
    for i, (a, b) in enumerate(zip(sizes, sizes[1:])):
        layers.append(nn.Linear(a, b))
        if i < len(sizes) - 2:
            layers.append(activation())
    return nn.Sequential(*layers)


def _init_kaiming(module: nn.Module) -> None:
    # keep activations O(1) through the stack so an untrained generator
    # emits order-unit outputs (the uniform-mod-1 baseline of the metric)
    for m in module.modules():
        if isinstance(m, nn.Linear):
            nn.init.kaiming_normal_(m.weight, nonlinearity="relu")
            nn.init.zeros_(m.bias)


@dataclass
class MetricLog:
    iterations: list[int] = field(default_factory=list)
    values: list[float] = field(default_factory=list)

    def append(self, iteration: int, value: float) -> None:
        self.iterations.append(iteration)
        self.values.append(value)

    @property
    def final(self) -> float:
        return self.values[-1]

    def rows(self):
        return list(zip(self.iterations, self.values))


class Trainer:
    """One WGAN-GP run bound to in-memory data and latent pools."""

    def __init__(self, config: ExperimentConfig, data: np.ndarray,
                 latents: np.ndarray, seed: int,
                 metric_fn=None):
        if data.shape[1] != config.data_dim:
            raise ValueError(f"data dim {data.shape[1]} != config {config.data_dim}")
        if latents.shape[1] != config.latent_dim:
            raise ValueError(f"latent dim {latents.shape[1]} != config {config.latent_dim}")
        self.config = config
        self.seed = seed
        self.metric_fn = metric_fn
        torch.manual_seed(seed)
        self.rng = np.random.default_rng(seed)
        self.data = torch.as_tensor(data, dtype=torch.float32)
        self.latents = torch.as_tensor(latents, dtype=torch.float32)

        act = nn.LeakyReLU if config.dataset == GAUSSIANS_2D else nn.ReLU
        h = config.hidden
        self.generator = make_mlp(
            [config.latent_dim, h, h, config.data_dim], act)
        self.critic = make_mlp([config.data_dim, h, h, 1], act)
        _init_kaiming(self.generator)
        _init_kaiming(self.critic)
        self.g_opt = torch.optim.RMSprop(self.generator.parameters(),
                                         lr=config.learning_rate)
        self.d_opt = torch.optim.RMSprop(self.critic.parameters(),
                                         lr=config.learning_rate)

    def _batch(self, pool: torch.Tensor) -> torch.Tensor:
        idx = self.rng.integers(0, pool.shape[0], size=self.config.batch_size)
        return pool[torch.as_tensor(idx, dtype=torch.long)]

    def _gradient_penalty(self, real: torch.Tensor, fake: torch.Tensor) -> torch.Tensor:
        eps = torch.rand(real.shape[0], 1)
        mixed = (eps * real + (1 - eps) * fake).requires_grad_(True)
        score = self.critic(mixed).sum()
        (grad,) = torch.autograd.grad(score, mixed, create_graph=True)
        return ((grad.norm(2, dim=1) - 1.0) ** 2).mean()

    def _critic_step(self) -> float:
        real = self._batch(self.data)
        with torch.no_grad():
            fake = self.generator(self._batch(self.latents))
        loss = (self.critic(fake).mean() - self.critic(real).mean()
                + self.config.gp_weight * self._gradient_penalty(real, fake))
        self.d_opt.zero_grad(set_to_none=True)
        loss.backward()
        self.d_opt.step()
        return float(loss.detach())

    def _generator_step(self) -> float:
        fake = self.generator(self._batch(self.latents))
        loss = -self.critic(fake).mean()
        self.g_opt.zero_grad(set_to_none=True)
        loss.backward()
        self.g_opt.step()
        return float(loss.detach())

    @torch.no_grad()
    def generate(self, count: int) -> np.ndarray:
        idx = self.rng.integers(0, self.latents.shape[0], size=count)
        out = self.generator(self.latents[torch.as_tensor(idx, dtype=torch.long)])
        return out.numpy().astype(np.float64)

    def evaluate(self) -> float:
        if self.metric_fn is None:
            return float("nan")
        return float(self.metric_fn(self.generate(self.config.eval_count)))

    def train(self, iterations: int | None = None, log: MetricLog | None = None) -> MetricLog:
        cfg = self.config
        total = cfg.iterations if iterations is None else iterations
        log = log if log is not None else MetricLog()
        if total == 0:
            log.append(0, self.evaluate())
            return log
        for it in range(1, total + 1):
            for _ in range(cfg.critic_steps):
                d_loss = self._critic_step()
            g_loss = self._generator_step()
            if not (np.isfinite(d_loss) and np.isfinite(g_loss)):
                raise TrainingDiverged(
                    f"non-finite loss at iteration {it}: critic {d_loss}, generator {g_loss}"
                )
            if it % cfg.eval_every == 0 or it == total:
                log.append(it, self.evaluate())
        return log
