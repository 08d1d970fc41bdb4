"""Fourier-series signal processing: approximations, complements, pulse
synthesis and a dense simulator for operator functions built from
controlled time evolution."""

from .approx import (
    ApproxResult,
    TargetFunction,
    analytic_extension_series,
    compare_methods,
    lemma37_q,
    linear_extension_series,
    taylor_fourier_series,
    taylor_to_fourier,
)
from .complement import complementary_series
from .exceptions import (
    ApproximationError,
    ComplementError,
    FqspError,
    PipelineError,
    SearchCeilingError,
    SynthesisError,
)
from .fourier import FourierSeries, evaluate
from .pulses import PulseSequence, reconstruct, synthesize_pulses, verify_pulses
from .qsim import run_pipeline

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "TargetFunction",
    "analytic_extension_series",
    "compare_methods",
    "lemma37_q",
    "linear_extension_series",
    "taylor_fourier_series",
    "taylor_to_fourier",
    "complementary_series",
    "ApproximationError",
    "ComplementError",
    "FqspError",
    "PipelineError",
    "SearchCeilingError",
    "SynthesisError",
    "FourierSeries",
    "evaluate",
    "PulseSequence",
    "reconstruct",
    "synthesize_pulses",
    "verify_pulses",
    "run_pipeline",
]
