"""Seeded generation of synthetic PC-LQ systems and transition datasets."""

from .base import BlockNorm, GeneratedSystem, NoiseSpec, PcLqSpec, QMode
from .generators import (
    cost_matrix,
    gen_counterexample,
    gen_pclq,
    resample_irrelevant,
    sample_transitions,
)
from .io import (
    dump_yaml,
    format_yaml,
    load_yaml,
    read_dataset,
    read_system,
    write_dataset,
    write_estimate,
    write_system,
)
from .rng import CounterRng

__all__ = [
    "BlockNorm",
    "CounterRng",
    "GeneratedSystem",
    "NoiseSpec",
    "PcLqSpec",
    "QMode",
    "cost_matrix",
    "dump_yaml",
    "format_yaml",
    "gen_counterexample",
    "gen_pclq",
    "load_yaml",
    "read_dataset",
    "read_system",
    "resample_irrelevant",
    "sample_transitions",
    "write_dataset",
    "write_estimate",
    "write_system",
]
