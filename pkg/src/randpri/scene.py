"""Point-target echo synthesis for a pulse train.

The sampled echo of ``K`` targets is

    z(n Ts) = sum_k alpha_k y(n Ts - tau_k) exp(j 2 pi f_k n Ts) + n0(n Ts)

with circularly-symmetric complex white Gaussian noise of power ``sigma^2``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .waveform import PulseTrain, make_rng, pulse_index

__all__ = [
    "SPEED_OF_LIGHT",
    "Target",
    "Scene",
    "EchoData",
    "TruncationWarning",
    "default_sample_count",
    "range_to_delay",
    "delay_to_range",
    "steering_vector",
    "pulse_sample_ranges",
    "synthesize_echo",
    "complex_noise",
    "snr_of",
]

SPEED_OF_LIGHT = 2.998e8


class TruncationWarning(UserWarning):
    """The observation window is too short to hold every echo."""


def range_to_delay(range_m: float, c: float = SPEED_OF_LIGHT) -> float:
    return 2.0 * range_m / c


def delay_to_range(delay_s: float, c: float = SPEED_OF_LIGHT) -> float:
    return 0.5 * c * delay_s


@dataclass(frozen=True)
class Target:
    amplitude: complex
    delay_s: float
    doppler_hz: float

    def __post_init__(self):
        if self.delay_s < 0:
            raise ValueError("target delay must be non-negative")
        object.__setattr__(self, "amplitude", complex(self.amplitude))


def default_sample_count(train: PulseTrain, targets=()) -> int:
    """Samples needed so that no echo energy is clipped.

    ``ceil(((M-1) Tr + rho/2 + Tp + max tau_k) Fs)``, plus one sample for the
    half-open pulse edge.
    """
    p = train.params
    max_delay = max((t.delay_s for t in targets), default=0.0)
    span = (p.pulse_count - 1) * p.pri_s + p.jitter_range_s / 2 + p.pulse_width_s + max_delay
    return int(math.ceil(span * p.sample_rate_hz)) + 1


@dataclass(frozen=True)
class Scene:
    targets: tuple
    noise_power: float
    sample_period_s: float
    sample_count: int

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.noise_power < 0:
            raise ValueError("noise power must be non-negative")
        if self.sample_period_s <= 0:
            raise ValueError("sample period must be positive")
        if int(self.sample_count) != self.sample_count or self.sample_count < 1:
            raise ValueError("sample_count must be a positive integer")
        object.__setattr__(self, "sample_count", int(self.sample_count))

    @classmethod
    def for_train(cls, train: PulseTrain, targets, noise_power: float, sample_count: int | None = None):
        """Scene sampled at the train's rate with a window that holds every echo."""
        targets = tuple(targets)
        if sample_count is None:
            sample_count = default_sample_count(train, targets)
        return cls(targets, noise_power, train.params.sample_period_s, sample_count)

    def check_window(self, train: PulseTrain) -> bool:
        """Warn and return False if some echo extends past the last sample."""
        p = train.params
        need = float(train.start_times_s[-1]) + p.pulse_width_s + max(
            (t.delay_s for t in self.targets), default=0.0)
        # same relative edge tolerance as the pulse membership test
        if (self.sample_count - 1) * self.sample_period_s < need - train.edge_tol_s:
            warnings.warn(
                f"observation window {(self.sample_count - 1) * self.sample_period_s:.6g} s "
                f"shorter than echo extent {need:.6g} s; echoes are truncated",
                TruncationWarning, stacklevel=2)
            return False
        return True


@dataclass(frozen=True)
class EchoData:
    samples: np.ndarray = field(repr=False)
    sample_period_s: float
    provenance: dict = field(default_factory=dict)

    @property
    def sample_count(self) -> int:
        return self.samples.size

    def scaled(self, c: complex) -> "EchoData":
        return EchoData(self.samples * c, self.sample_period_s, dict(self.provenance))

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "re", "im"])
            for n, v in enumerate(self.samples):
                w.writerow([n, repr(float(v.real)), repr(float(v.imag))])


def steering_vector(train: PulseTrain, delay_s: float, doppler_hz: float, ts: float, n: int) -> np.ndarray:
    """``s[k] = y(k Ts - tau) exp(j 2 pi f k Ts)`` for ``k = 0 .. n-1``."""
    t = np.arange(n) * ts
    env = pulse_index(train, t - delay_s) >= 0
    out = np.zeros(n, dtype=np.complex128)
    out[env] = np.exp(2j * np.pi * doppler_hz * t[env])
    return out


def pulse_sample_ranges(train: PulseTrain, delays, ts: float, n: int):
    """First sample index and sample count of every delayed pulse.

    Returns integer arrays ``first``, ``counts`` of shape ``(len(delays), M)``
    selecting exactly the samples where ``steering_vector`` is nonzero.
    """
    delays = np.atleast_1d(np.asarray(delays, dtype=np.float64))
    lo = train.lower_edges_s
    hi = train.upper_edges_s
    per_pulse = int(math.ceil(train.pulse_width_s / ts)) + 2
    # candidate samples around each pulse, then the same edge test as the waveform
    base = np.floor((train.start_times_s[None, :] + delays[:, None]) / ts).astype(np.int64) - 1
    k = base[:, :, None] + np.arange(per_pulse + 2)[None, None, :]
    t = k * ts - delays[:, None, None]
    inside = (t > lo[None, :, None]) & (t <= hi[None, :, None]) & (k >= 0) & (k < n)
    counts = inside.sum(axis=2)
    first_pos = np.argmax(inside, axis=2)
    first = np.take_along_axis(k, first_pos[:, :, None], axis=2)[:, :, 0]
    first = np.where(counts > 0, first, 0)
    return first, counts


def complex_noise(rng, n: int, power: float = 1.0) -> np.ndarray:
    """Circular complex Gaussian samples, each part ``N(0, power/2)``."""
    rng = make_rng(rng)
    w = rng.standard_normal((n, 2))
    return math.sqrt(power / 2.0) * (w[:, 0] + 1j * w[:, 1])


def synthesize_echo(train: PulseTrain, scene: Scene, rng=None, noise=None, provenance=None) -> EchoData:
    """Noisy echo of ``scene`` illuminated by ``train``.

    Noise is drawn from ``rng`` unless a unit-power ``noise`` vector is passed
    in, in which case it is scaled by ``sqrt(noise_power)``.  Targets are
    accumulated in order, then noise is added.
    """
    n, ts = scene.sample_count, scene.sample_period_s
    scene.check_window(train)
    z = np.zeros(n, dtype=np.complex128)
    for tgt in scene.targets:
        z += tgt.amplitude * steering_vector(train, tgt.delay_s, tgt.doppler_hz, ts, n)
    if scene.noise_power > 0:
        if noise is None:
            if rng is None:
                raise ValueError("an rng is required for a noisy scene")
            z = z + complex_noise(rng, n, scene.noise_power)
        else:
            z = z + math.sqrt(scene.noise_power) * np.asarray(noise)
    return EchoData(z, ts, dict(provenance or {}))


def snr_of(scene: Scene, k: int) -> float:
    """``10 log10(|alpha_k|^2 / sigma^2)`` in dB."""
    if scene.noise_power <= 0:
        raise ValueError("SNR is undefined for a noiseless scene")
    return 10.0 * math.log10(abs(scene.targets[k].amplitude) ** 2 / scene.noise_power)
