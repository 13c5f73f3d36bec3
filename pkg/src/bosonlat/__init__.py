"""bosonlat: exactly verifiable linear-optical sampling and latent distributions.

Core pieces: permanent evaluators with a compiled hot path, Haar-random
and loop-based interferometers, exact output enumeration, chain-rule
boson sampling, distinguishable-photon sampling, loss/post-selection,
latent-batch generation and validation diagnostics.
"""

__version__ = "0.1.0"

from ._kernels import available_backends, backend_name
from .circuits import (
    DELAYS_1_1,
    DELAYS_1_3_9,
    CircuitSpec,
    build_unitary,
    default_input_modes,
    random_loop_spec,
)
from .diagnostics import (
    BenchResult,
    EmpiricalDistribution,
    bench_sampling,
    bench_scaling,
    bunching_fraction,
    l1_to_nearest_integer,
    tvd,
)
from .errors import GuardError, NormalizationError
from .latents import (
    LatentBatch,
    center,
    gen_bernoulli,
    gen_gaussian,
    gen_photonic,
    uncenter,
)
from .linalg import (
    haar_unitary,
    permanent_fast,
    permanent_naive,
    repeated_submatrix,
    unitarity_defect,
    validate_unitary,
)
from .sampling import (
    DistributionTable,
    InputSpec,
    LossShots,
    SampleBatch,
    apply_loss_and_postselect,
    exact_distribution,
    expected_acceptance,
    sample_boson,
    sample_distinguishable,
)

__all__ = [
    "__version__",
    "available_backends",
    "backend_name",
    "CircuitSpec",
    "DELAYS_1_1",
    "DELAYS_1_3_9",
    "build_unitary",
    "default_input_modes",
    "random_loop_spec",
    "BenchResult",
    "EmpiricalDistribution",
    "bench_sampling",
    "bench_scaling",
    "bunching_fraction",
    "l1_to_nearest_integer",
    "tvd",
    "GuardError",
    "NormalizationError",
    "LatentBatch",
    "center",
    "gen_bernoulli",
    "gen_gaussian",
    "gen_photonic",
    "uncenter",
    "haar_unitary",
    "permanent_fast",
    "permanent_naive",
    "repeated_submatrix",
    "unitarity_defect",
    "validate_unitary",
    "DistributionTable",
    "InputSpec",
    "LossShots",
    "SampleBatch",
    "apply_loss_and_postselect",
    "exact_distribution",
    "expected_acceptance",
    "sample_boson",
    "sample_distinguishable",
]
