"""Monte Carlo mean and standard deviation of normalized ambiguity cuts.

Trial ``i`` draws its pulse train from ``trial_rng(master_seed, i)``, so a
curve depends only on the configuration and not on how trials are scheduled
across threads.  Per-trial values are stored and reduced in index order.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .ambiguity import af_cut_delay, sinc
from .theory import RangeSidelobeSpec, range_peak_mean, range_peak_std_bound
from .waveform import PulseTrain, WaveformParams, generate_pulse_train, trial_rng

__all__ = [
    "MCConfig",
    "MCCurve",
    "RangePeakCheck",
    "mc_delay_cut",
    "mc_doppler_cut",
    "doppler_cut_eq10",
    "check_range_peaks",
    "run_trials",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MCConfig:
    trials: int
    master_seed: int
    waveform: WaveformParams
    grid: np.ndarray
    pin_first: bool = True

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 2:
            raise ValueError("trials must be an integer >= 2")
        grid = np.asarray(self.grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError("grid must be a non-empty vector")
        object.__setattr__(self, "grid", grid)


@dataclass(frozen=True)
class MCCurve:
    """Sample statistics of a normalized cut over ``trials`` realizations.

    ``std`` uses the ``n-1`` divisor.  ``std_stderr`` is the delta-method
    standard error of ``std`` from the sample fourth central moment.
    """

    axis: str
    grid: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    stderr: np.ndarray
    std_stderr: np.ndarray
    trials: int
    clamped: int = 0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_samples(cls, axis, grid, samples, clamped=0):
        samples = np.asarray(samples, dtype=np.float64)
        n = samples.shape[0]
        mean = samples.mean(axis=0)
        dev = samples - mean
        var = (dev * dev).sum(axis=0) / (n - 1)
        std = np.sqrt(var)
        m4 = (dev ** 4).mean(axis=0)
        var_of_var = np.maximum(m4 - var * var * (n - 3) / (n - 1), 0.0) / n
        with np.errstate(invalid="ignore", divide="ignore"):
            std_se = np.where(std > 0, np.sqrt(var_of_var) / (2 * std), 0.0)
        return cls(axis, np.asarray(grid, float), mean, std, std / np.sqrt(n), std_se, n, clamped)

    def with_columns(self, **cols) -> "MCCurve":
        """Copy carrying extra per-grid columns (theory values, bounds) for CSV output."""
        extra = dict(self.extra)
        extra.update(cols)
        return MCCurve(self.axis, self.grid, self.mean, self.std, self.stderr, self.std_stderr,
                       self.trials, self.clamped, extra)

    def to_csv(self, path) -> None:
        names = ["abscissa", "mean", "std", "stderr"] + list(self.extra)
        cols = [self.grid, self.mean, self.std, self.stderr] + [np.asarray(v) for v in self.extra.values()]
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(names)
            for row in zip(*cols):
                w.writerow(["" if (isinstance(v, float) and np.isnan(v)) else repr(float(v)) for v in row])


def run_trials(fn, trials: int, threads: int = 1) -> list:
    """``[fn(i) for i in range(trials)]``, optionally spread across threads."""
    if threads <= 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(trials)))


def doppler_cut_eq10(train: PulseTrain, freqs) -> tuple[np.ndarray, int]:
    """Normalized ``|Lambda(0, f)| / (M Tp)`` from the pair-cosine expansion.

    ``|sinc(pi f Tp)| / M * sqrt(M + 2 sum_p sum_n cos(2 pi f (p Tr + eps_{n+p} - eps_n)))``.
    Negative radicands from rounding are clamped to zero; the number clamped
    is returned alongside.
    """
    p = train.params
    freqs = np.asarray(freqs, dtype=np.float64)
    rad = kernels.doppler_radicand(train.jitters_s, p.pri_s, freqs)
    neg = rad < 0
    if neg.any():
        rad = np.where(neg, 0.0, rad)
    vals = np.abs(sinc(np.pi * freqs * p.pulse_width_s)) / p.pulse_count * np.sqrt(rad)
    return vals, int(neg.sum())


def mc_delay_cut(cfg: MCConfig, threads: int = 1) -> MCCurve:
    """Monte Carlo statistics of ``|Lambda(tau, 0)| / |Lambda(0, 0)|`` on ``cfg.grid``."""
    def one(i):
        train = generate_pulse_train(cfg.waveform, trial_rng(cfg.master_seed, i), cfg.pin_first)
        return af_cut_delay(train, cfg.grid).normalized

    samples = np.stack(run_trials(one, cfg.trials, threads))
    return MCCurve.from_samples("delay", cfg.grid, samples)


def mc_doppler_cut(cfg: MCConfig, threads: int = 1) -> MCCurve:
    """Monte Carlo statistics of ``|Lambda(0, f)| / |Lambda(0, 0)|`` on ``cfg.grid``."""
    def one(i):
        train = generate_pulse_train(cfg.waveform, trial_rng(cfg.master_seed, i), cfg.pin_first)
        return doppler_cut_eq10(train, cfg.grid)

    results = run_trials(one, cfg.trials, threads)
    samples = np.stack([r[0] for r in results])
    clamped = sum(r[1] for r in results)
    if clamped:
        log.warning("clamped %d negative radicands to zero", clamped)
    return MCCurve.from_samples("doppler", cfg.grid, samples, clamped)


@dataclass(frozen=True)
class RangePeakCheck:
    p: int
    delay_s: float
    mc_mean: float
    mc_std: float
    stderr: float
    theory_mean: float
    std_bound: float  # nan when rho <= Tp
    std_stderr: float
    mean_ok: bool
    std_ok: bool  # True when no bound applies

    @property
    def mean_error(self) -> float:
        return self.mc_mean - self.theory_mean

    @property
    def passed(self) -> bool:
        return self.mean_ok and self.std_ok


def check_range_peaks(curve: MCCurve, params: WaveformParams, ps=(1, 2, 3),
                      n_sigma: float = 3.0, std_sigma: float = 3.0) -> list[RangePeakCheck]:
    """Compare the Monte Carlo delay cut at ``p*Tr`` with the closed-form mean and std bound.

    The mean passes when within ``n_sigma`` standard errors of theory.  The
    std passes when it exceeds the bound by at most ``std_sigma`` of its own
    sampling errors; the bound is checked only for rho > Tp.
    """
    out = []
    for p in ps:
        tau = p * params.pri_s
        i = int(np.argmin(np.abs(curve.grid - tau)))
        if abs(curve.grid[i] - tau) > 1e-6 * params.pulse_width_s:
            raise ValueError(f"grid has no point at p*Tr for p={p}")
        spec = RangeSidelobeSpec(params.pulse_count, p, params.jitter_range_s, params.pulse_width_s)
        theory = range_peak_mean(spec)
        bound = range_peak_std_bound(spec) if params.jitter_range_s > params.pulse_width_s else float("nan")
        mean_ok = abs(curve.mean[i] - theory) <= n_sigma * curve.stderr[i] + 1e-12
        std_ok = bool(np.isnan(bound) or curve.std[i] <= bound + std_sigma * curve.std_stderr[i])
        out.append(RangePeakCheck(p, float(curve.grid[i]), float(curve.mean[i]), float(curve.std[i]),
                                  float(curve.stderr[i]), theory, bound, float(curve.std_stderr[i]),
                                  bool(mean_ok), std_ok))
    return out
