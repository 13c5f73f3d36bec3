"""latentgan: GAN benchmarking harness over exported latent distributions.

Consumes the sampling toolkit exclusively through its CLI and file
formats (QLS1 batches, key=value sidecars); trains WGAN-GP models on
toy discrete datasets and a 2D Gaussian mixture, and aggregates
per-seed metrics.
"""

__version__ = "0.1.0"

from .config import ExperimentConfig, blobs_config, reduced_toy_config
from .metrics import l1_to_nearest_integer, mean_sem, mode_coverage, mode_masses
from .wgan import MetricLog, Trainer, TrainingDiverged

__all__ = [
    "__version__",
    "ExperimentConfig",
    "blobs_config",
    "reduced_toy_config",
    "l1_to_nearest_integer",
    "mean_sem",
    "mode_coverage",
    "mode_masses",
    "MetricLog",
    "Trainer",
    "TrainingDiverged",
]
