from src.sources.density import Piece, PiecewiseDensity, load_density, parse_density
from src.sources.quantize import (
    RareEventsSource,
    SampleRecord,
    alphabet_target,
    entropy_target,
    limit_distribution,
    make_generator,
    quantization_bound,
    quantize,
    sample,
    sequence_logprob,
    shadow_distribution,
)

__all__ = [
    "Piece",
    "PiecewiseDensity",
    "RareEventsSource",
    "SampleRecord",
    "alphabet_target",
    "entropy_target",
    "limit_distribution",
    "load_density",
    "make_generator",
    "parse_density",
    "quantization_bound",
    "quantize",
    "sample",
    "sequence_logprob",
    "shadow_distribution",
]
