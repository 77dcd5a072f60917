"""Simulation and exact analysis of the (N+N) evolutionary algorithm."""

try:
    from ._nnea import (
        ConfigError,
        ExactChain,
        ResourceError,
        __version__,
        block_length,
        check_bound,
        classify,
        fitness,
        run_batch,
        run_trial,
        sweep_bounds,
        upgrade_probability,
        wilson95,
    )
except ImportError:  # extension built out of tree, e.g. a plain CMake build
    from _nnea import (
        ConfigError,
        ExactChain,
        ResourceError,
        __version__,
        block_length,
        check_bound,
        classify,
        fitness,
        run_batch,
        run_trial,
        sweep_bounds,
        upgrade_probability,
        wilson95,
    )

__all__ = [
    "ConfigError",
    "ExactChain",
    "ResourceError",
    "__version__",
    "block_length",
    "check_bound",
    "classify",
    "fitness",
    "run_batch",
    "run_trial",
    "sweep_bounds",
    "upgrade_probability",
    "wilson95",
]
