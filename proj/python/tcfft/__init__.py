"""Half-precision FFT on an emulated tensor-core MMA primitive."""

from ._tcfft import (
    ArgumentError,
    Error,
    Plan,
    ShapeMismatch,
    UnsupportedSize,
    default_fragment_map_json,
    execute,
    fft,
    fft2,
    half_to_float,
    naive_dft,
    plan_1d,
    plan_2d,
    radix2_equiv_tflops,
    reference_fft64,
    relative_error,
    round_to_half,
    schedule_radices,
)

__all__ = [
    "ArgumentError",
    "Error",
    "Plan",
    "ShapeMismatch",
    "UnsupportedSize",
    "default_fragment_map_json",
    "execute",
    "fft",
    "fft2",
    "half_to_float",
    "naive_dft",
    "plan_1d",
    "plan_2d",
    "radix2_equiv_tflops",
    "reference_fft64",
    "relative_error",
    "round_to_half",
    "schedule_radices",
]
