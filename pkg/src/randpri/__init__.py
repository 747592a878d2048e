"""Random pulse-repetition-interval radar: waveform model, ambiguity statistics,
closed-form bounds, echo synthesis, and matched-filter / OMP detection."""

from .waveform import (
    ParameterError,
    PulseTrain,
    WaveformParams,
    evaluate_waveform,
    generate_pulse_train,
    stable_pulse_train,
)

__version__ = "0.1.0"

__all__ = [
    "ParameterError",
    "PulseTrain",
    "WaveformParams",
    "evaluate_waveform",
    "generate_pulse_train",
    "stable_pulse_train",
]
