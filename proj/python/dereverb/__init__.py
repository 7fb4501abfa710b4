"""Single-channel dereverberation: chirp identification, T60 shaping and
inverse filtering. Arrays are 1-D float64 numpy arrays."""

from ._core import (
    ChannelSpec,
    Error,
    FilterBank,
    IoError,
    NumericalError,
    ParameterError,
    build_filterbank,
    convolve,
    d50,
    estimate_ir,
    filter_signal,
    generate_chirp,
    lpa,
    max_threads,
    read_wav,
    run_pipeline,
    set_max_threads,
    shape_ir,
    signal_stats,
    simulate,
    t60_broadband,
    t60_per_bin,
    write_wav,
)

__all__ = [
    "ChannelSpec",
    "Error",
    "FilterBank",
    "IoError",
    "NumericalError",
    "ParameterError",
    "build_filterbank",
    "convolve",
    "d50",
    "estimate_ir",
    "filter_signal",
    "generate_chirp",
    "lpa",
    "max_threads",
    "read_wav",
    "run_pipeline",
    "set_max_threads",
    "shape_ir",
    "signal_stats",
    "simulate",
    "t60_broadband",
    "t60_per_bin",
    "write_wav",
]
