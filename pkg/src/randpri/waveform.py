"""Stable and random-PRI coherent pulse trains.

A train of ``M`` rectangular pulses of width ``Tp`` starts pulse ``m`` at
``t_m = m*Tr + eps_m``.  The first jitter is pinned, ``eps_0 = 0``, and the
remaining ``eps_1 .. eps_{M-1}`` are i.i.d. uniform with total width ``rho``.
Pulse ``m`` occupies the half-open interval ``(t_m, t_m + Tp]``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "ParameterError",
    "WaveformParams",
    "PulseTrain",
    "generate_pulse_train",
    "stable_pulse_train",
    "evaluate_waveform",
    "make_rng",
    "trial_rng",
]

# Pulse edges are shifted by this fraction of Tp so that sample instants that
# land on an edge up to floating-point rounding are classified consistently.
EDGE_TOL_FRACTION = 1e-9


class ParameterError(ValueError):
    """Raised when waveform parameters violate their invariants."""


@dataclass(frozen=True)
class WaveformParams:
    """Carrier, pulse, PRI, jitter and sampling parameters of a pulse train.

    ``carrier_freq_hz`` is metadata only; Doppler shifts are given in Hz
    everywhere else.
    """

    pulse_count: int
    pulse_width_s: float
    pri_s: float
    jitter_range_s: float = 0.0
    sample_rate_hz: float = 1e6
    carrier_freq_hz: float = 10e9

    def __post_init__(self):
        M, tp, tr, rho = self.pulse_count, self.pulse_width_s, self.pri_s, self.jitter_range_s
        if int(M) != M or M < 1:
            raise ParameterError(f"pulse_count must be a positive integer, got {M!r}")
        object.__setattr__(self, "pulse_count", int(M))
        for name in ("pulse_width_s", "pri_s", "sample_rate_hz"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not np.isfinite(rho) or rho < 0:
            raise ParameterError(f"jitter_range_s must be >= 0, got {rho!r}")
        if tp >= tr:
            raise ParameterError(f"pulse width {tp} must be shorter than the PRI {tr}")
        # a few ulps of slack so that rho = Tr - 2*Tp typed in decimal is accepted
        if rho > (tr - 2 * tp) + 8 * np.spacing(tr):
            raise ParameterError(
                f"jitter range {rho} exceeds Tr - 2*Tp = {tr - 2 * tp}; pulses could interlace"
            )

    @property
    def sample_period_s(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def max_jitter_range_s(self) -> float:
        return self.pri_s - 2 * self.pulse_width_s

    def with_jitter(self, jitter_range_s: float) -> "WaveformParams":
        """Copy of these parameters with a different jitter range."""
        return WaveformParams(
            pulse_count=self.pulse_count,
            pulse_width_s=self.pulse_width_s,
            pri_s=self.pri_s,
            jitter_range_s=jitter_range_s,
            sample_rate_hz=self.sample_rate_hz,
            carrier_freq_hz=self.carrier_freq_hz,
        )


@dataclass(frozen=True, eq=False)
class PulseTrain:
    """One realization of pulse start times.

    Attributes
    ----------
    params : WaveformParams
    jitters_s : ndarray, shape (M,)
        Read-only jitter vector; ``jitters_s[0]`` is 0 when ``pin_first``.
    pin_first : bool
        False only for trains whose first pulse is jittered as well.
    """

    params: WaveformParams
    jitters_s: np.ndarray = field(repr=False)
    pin_first: bool = True

    def __post_init__(self):
        eps = np.array(self.jitters_s, dtype=np.float64)
        M = self.params.pulse_count
        if eps.shape != (M,):
            raise ParameterError(f"expected {M} jitters, got shape {eps.shape}")
        if self.pin_first and eps[0] != 0.0:
            raise ParameterError("the first jitter must be exactly 0")
        half = self.params.jitter_range_s / 2
        if np.any(np.abs(eps) > half):
            raise ParameterError(f"jitters must lie within +/- {half}")
        eps.setflags(write=False)
        object.__setattr__(self, "jitters_s", eps)

    @cached_property
    def start_times_s(self) -> np.ndarray:
        t = np.arange(self.params.pulse_count) * self.params.pri_s + self.jitters_s
        t.setflags(write=False)
        return t

    @property
    def pulse_count(self) -> int:
        return self.params.pulse_count

    @property
    def pulse_width_s(self) -> float:
        return self.params.pulse_width_s

    @property
    def edge_tol_s(self) -> float:
        return EDGE_TOL_FRACTION * self.params.pulse_width_s

    @cached_property
    def lower_edges_s(self) -> np.ndarray:
        """Exclusive left edges used for sampling, ``t_m + tol``."""
        e = self.start_times_s + self.edge_tol_s
        e.setflags(write=False)
        return e

    @cached_property
    def upper_edges_s(self) -> np.ndarray:
        """Inclusive right edges used for sampling, ``t_m + Tp + tol``."""
        e = (self.start_times_s + self.params.pulse_width_s) + self.edge_tol_s
        e.setflags(write=False)
        return e

    @property
    def duration_s(self) -> float:
        """Sum of the pulse intervals ``T_0 + ... + T_{M-1}``, i.e. ``t_{M-1}``."""
        return float(self.start_times_s[-1])

    def nominal(self) -> "PulseTrain":
        """The stable-PRI train with the same parameters and zero jitter."""
        return stable_pulse_train(self.params)

    def to_csv(self, path) -> None:
        """Write ``index, jitter_s, start_time_s`` rows."""
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "jitter_s", "start_time_s"])
            for m, (e, t) in enumerate(zip(self.jitters_s, self.start_times_s)):
                w.writerow([m, repr(float(e)), repr(float(t))])

    @classmethod
    def from_csv(cls, path, params: WaveformParams) -> "PulseTrain":
        with open(Path(path), newline="") as fh:
            rows = list(csv.DictReader(fh))
        return cls(params, np.array([float(r["jitter_s"]) for r in rows]))


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; accepts an int seed, a SeedSequence or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def trial_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for trial ``key`` of an experiment.

    The stream depends only on ``(master_seed, key)``, never on the order in
    which trials are executed.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def generate_pulse_train(params: WaveformParams, rng, pin_first: bool = True) -> PulseTrain:
    """Draw a random-PRI train.

    Jitters ``eps_1 .. eps_{M-1}`` are drawn uniformly on ``[-rho/2, rho/2)``
    (numpy's half-open convention; the closed end has probability zero) and
    ``eps_0 = 0``.  With ``pin_first=False`` all ``M`` jitters are drawn, which
    is the model the closed-form Doppler bounds are exact for.
    """
    if not isinstance(params, WaveformParams):
        raise ParameterError("params must be a WaveformParams instance")
    rng = make_rng(rng)
    eps = np.zeros(params.pulse_count)
    lo = 1 if pin_first else 0
    if params.pulse_count > lo:
        u = rng.random(params.pulse_count - lo)
        eps[lo:] = (u - 0.5) * params.jitter_range_s
    return PulseTrain(params, eps, pin_first)


def stable_pulse_train(params: WaveformParams) -> PulseTrain:
    """Zero-jitter train ``t_m = m*Tr`` (the ``rho -> 0`` limit)."""
    return PulseTrain(params, np.zeros(params.pulse_count))


def pulse_index(train: PulseTrain, t) -> np.ndarray:
    """Index of the pulse containing each time in ``t``, or -1 outside all pulses."""
    t = np.asarray(t, dtype=np.float64)
    m = np.searchsorted(train.lower_edges_s, t, side="left") - 1
    inside = m >= 0
    mc = np.where(inside, m, 0)
    inside &= t <= train.upper_edges_s[mc]
    return np.where(inside, m, -1)


def evaluate_waveform(train: PulseTrain, t):
    """Transmitted baseband envelope ``y(t)``: 1 inside ``(t_m, t_m + Tp]``, else 0.

    Accepts a scalar or an array; the result is complex to compose with phase
    ramps.
    """
    out = (pulse_index(train, t) >= 0).astype(np.complex128)
    if np.ndim(t) == 0:
        return complex(out)
    return out
