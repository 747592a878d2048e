"""Ambiguity function of a rectangular pulse train.

``af`` evaluates ``Lambda(tau, f) = int u(t) u*(t - tau) exp(-j 2 pi f t) dt``
exactly, pulse pair by pulse pair.  ``af_oracle`` integrates the same
definition numerically and is kept independent of the closed form so the two
can be checked against each other.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .waveform import PulseTrain, evaluate_waveform

__all__ = [
    "AFCut",
    "OracleStepError",
    "af",
    "af_oracle",
    "af_cut_delay",
    "af_cut_doppler",
    "af_surface",
    "sinc",
]


def sinc(x):
    """``sin(x)/x`` with ``sinc(0) = 1``; the caller supplies the factor pi."""
    return np.sinc(np.asarray(x, dtype=np.float64) / np.pi)


class OracleStepError(ValueError):
    """The integration step is too coarse for the requested Doppler."""


@dataclass(frozen=True)
class AFCut:
    """A zero-Doppler (``axis="delay"``) or zero-delay (``axis="doppler"``) cut.

    ``magnitudes`` are raw ``|Lambda|`` values in seconds; ``peak`` is
    ``|Lambda(0, 0)| = M Tp`` used for normalization.
    """

    axis: str
    grid: np.ndarray
    magnitudes: np.ndarray
    peak: float

    def __post_init__(self):
        if self.axis not in ("delay", "doppler"):
            raise ValueError(f"axis must be 'delay' or 'doppler', got {self.axis!r}")
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("cut grid must be a non-empty vector")
        if grid.size > 1 and np.any(np.diff(grid) <= 0):
            raise ValueError("cut grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "magnitudes", np.asarray(self.magnitudes, dtype=np.float64))

    @property
    def normalized(self) -> np.ndarray:
        return self.magnitudes / self.peak

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["abscissa", "magnitude", "normalized_magnitude"])
            for x, v, n in zip(self.grid, self.magnitudes, self.normalized):
                w.writerow([repr(float(x)), repr(float(v)), repr(float(n))])


def af(train: PulseTrain, delay_s, doppler_hz):
    """Ambiguity function ``Lambda(tau, f)`` of ``train``.

    Scalars return a complex number; arrays broadcast against each other.
    Each overlapping pulse pair contributes
    ``(b - a) exp(-j pi f (a + b)) sinc(pi f (b - a))``.
    """
    tau, f = np.broadcast_arrays(np.asarray(delay_s, dtype=np.float64),
                                 np.asarray(doppler_hz, dtype=np.float64))
    vals = kernels.af_sum(train.start_times_s, train.pulse_width_s, tau.ravel(), f.ravel())
    if tau.ndim == 0:
        return complex(vals[0])
    return vals.reshape(tau.shape)


def af_surface(train: PulseTrain, delays, dopplers) -> np.ndarray:
    """``|Lambda|`` on the outer product grid, shape ``(len(delays), len(dopplers))``."""
    d, f = np.meshgrid(np.asarray(delays, float), np.asarray(dopplers, float), indexing="ij")
    return np.abs(af(train, d, f))


def af_oracle(train: PulseTrain, delay_s: float, doppler_hz: float, step_s: float) -> complex:
    """Brute-force trapezoidal integration of the ambiguity integral.

    The time axis is split at every pulse edge of ``u(t)`` and ``u(t - tau)``;
    each piece is tested for membership by sampling the waveform at its
    midpoint and then integrated with a uniform trapezoid rule of spacing at
    most ``step_s``.
    """
    if step_s <= 0:
        raise ValueError("step_s must be positive")
    if abs(doppler_hz) * step_s > 0.01:
        raise OracleStepError(
            f"step {step_s:g} s too coarse for Doppler {doppler_hz:g} Hz "
            f"(f*step = {abs(doppler_hz) * step_s:.3g} > 0.01)"
        )
    t0 = train.start_times_s
    tp = train.pulse_width_s
    edges = np.unique(np.concatenate([t0, t0 + tp, t0 + delay_s, t0 + delay_s + tp]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    on = (evaluate_waveform(train, mids) * np.conj(evaluate_waveform(train, mids - delay_s))).real > 0
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1][on], edges[1:][on]):
        n = max(1, int(np.ceil((b - a) / step_s)))
        t = np.linspace(a, b, n + 1)
        total += np.trapezoid(np.exp(-2j * np.pi * doppler_hz * t), t)
    return complex(total)


def af_cut_delay(train: PulseTrain, delay_grid) -> AFCut:
    """Zero-Doppler cut ``|Lambda(tau, 0)|``."""
    grid = np.asarray(delay_grid, dtype=np.float64)
    vals = kernels.af_sum(train.start_times_s, train.pulse_width_s, grid, np.zeros_like(grid))
    return AFCut("delay", grid, np.abs(vals), train.pulse_count * train.pulse_width_s)


def af_cut_doppler(train: PulseTrain, doppler_grid) -> AFCut:
    """Zero-delay cut ``|Lambda(0, f)| = Tp |sinc(pi f Tp)| |sum_m exp(-j 2 pi f t_m)|``."""
    grid = np.asarray(doppler_grid, dtype=np.float64)
    tp = train.pulse_width_s
    phasor_sum = np.exp(-2j * np.pi * np.outer(grid, train.start_times_s)).sum(axis=1)
    mags = tp * np.abs(sinc(np.pi * grid * tp)) * np.abs(phasor_sum)
    return AFCut("doppler", grid, mags, train.pulse_count * tp)
