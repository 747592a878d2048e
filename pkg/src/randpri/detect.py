"""Range-Doppler detection: matched-filter maps, DFT-MTD and OMP.

Every detector works on a fixed delay x Doppler grid and reports grid nodes;
there is no off-grid refinement.  The map value at ``(tau, f)`` is the inner
product ``s(tau, f)^H z`` of the echo with the steering vector, computed by a
factorized scheme: per delay, each pulse's samples are correlated with the
intra-pulse phase ramp, then the pulses are summed with their slow-time phase
at the actual (jittered) sample times.
"""

from __future__ import annotations

import csv
import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import qr, solve_triangular

from . import kernels
from .scene import EchoData, pulse_sample_ranges, steering_vector
from .waveform import PulseTrain

__all__ = [
    "SearchGrid",
    "MatchedFilterMap",
    "Detection",
    "DetectionReport",
    "SingularAtomWarning",
    "matched_filter_map",
    "local_maxima",
    "dft_mtd",
    "omp_detect",
    "least_squares",
    "success",
    "range_resolution",
    "doppler_resolution",
]

log = logging.getLogger(__name__)

TIMINGS = ("actual", "nominal")


class SingularAtomWarning(UserWarning):
    """OMP picked an atom that is (numerically) already in the span of ``A``."""


def _uniform_axis(start, stop, step):
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


@dataclass(frozen=True)
class SearchGrid:
    delays: np.ndarray
    dopplers: np.ndarray

    def __post_init__(self):
        for name in ("delays", "dopplers"):
            a = np.atleast_1d(np.asarray(getattr(self, name), dtype=np.float64))
            if a.ndim != 1 or a.size == 0:
                raise ValueError(f"{name} must be a non-empty vector")
            if np.any(np.diff(a) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @classmethod
    def uniform(cls, delay_range, delay_step, doppler_range, doppler_step):
        """Grid from inclusive ``(start, stop)`` ranges and steps."""
        return cls(_uniform_axis(*delay_range, delay_step), _uniform_axis(*doppler_range, doppler_step))

    @property
    def shape(self) -> tuple[int, int]:
        return self.delays.size, self.dopplers.size

    @property
    def size(self) -> int:
        return self.delays.size * self.dopplers.size

    def covers(self, delay_s, doppler_hz) -> bool:
        return bool(self.delays[0] <= delay_s <= self.delays[-1]
                    and self.dopplers[0] <= doppler_hz <= self.dopplers[-1])


@dataclass(frozen=True)
class MatchedFilterMap:
    """Complex ``s^H z`` on a grid plus the steering-vector energies per delay."""

    grid: SearchGrid
    values: np.ndarray = field(repr=False)
    atom_energy: np.ndarray = field(repr=False)  # ||s(tau_d, f)||^2, independent of f

    @property
    def scores(self) -> np.ndarray:
        return np.abs(self.values)

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["delay_s", "doppler_hz", "score"])
            sc = self.scores
            for i, d in enumerate(self.grid.delays):
                for j, f in enumerate(self.grid.dopplers):
                    w.writerow([repr(float(d)), repr(float(f)), repr(float(sc[i, j]))])


def _nominal_map(z, first, counts, ts, dopplers, slow_t):
    # as the kernel, but the slow-time phase uses the nominal pulse times
    f = np.asarray(dopplers, dtype=np.float64)
    D, M = first.shape
    Lmax = int(counts.max(initial=0))
    out = np.zeros((D, f.size), dtype=np.complex128)
    if Lmax == 0:
        return out
    lidx = np.arange(Lmax)
    intra = np.exp(-2j * np.pi * np.outer(lidx * ts, f))
    for d in range(D):
        idx = first[d][:, None] + lidx[None, :]
        mask = lidx[None, :] < counts[d][:, None]
        fast = np.where(mask, z[np.where(mask, idx, 0)], 0.0)
        slow = np.exp(-2j * np.pi * np.outer(slow_t[d], f))
        out[d] = ((fast @ intra) * slow).sum(axis=0)
    return out


def matched_filter_map(echo: EchoData, train: PulseTrain, grid: SearchGrid,
                       timing: str = "actual", threads: int = 1) -> MatchedFilterMap:
    """``s(tau, f)^H z`` at every grid node.

    Parameters
    ----------
    timing : {"actual", "nominal"}
        ``"actual"`` uses the true sample times, so the map equals the direct
        inner product with :func:`steering_vector`.  ``"nominal"`` keeps the
        range alignment but runs the Doppler transform on the uniform times
        ``m*Tr + tau``, a conventional DFT-MTD that ignores the jitter.
    threads : int
        Delay bins are split across this many threads.  Results do not depend
        on it.
    """
    if timing not in TIMINGS:
        raise ValueError(f"timing must be one of {TIMINGS}, got {timing!r}")
    z = np.ascontiguousarray(echo.samples, dtype=np.complex128)
    ts = echo.sample_period_s
    first, counts = pulse_sample_ranges(train, grid.delays, ts, z.size)

    if timing == "actual":
        def block(sl):
            return kernels.mf_map(z, first[sl], counts[sl], ts, grid.dopplers)
    else:
        p = train.params
        slow_t = np.arange(p.pulse_count)[None, :] * p.pri_s + grid.delays[:, None]

        def block(sl):
            return _nominal_map(z, first[sl], counts[sl], ts, grid.dopplers, slow_t[sl])

    D = grid.delays.size
    if threads <= 1 or D < 2:
        values = block(slice(0, D))
    else:
        bounds = np.linspace(0, D, min(threads, D) + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]))
        values = np.concatenate(parts, axis=0)
    return MatchedFilterMap(grid, values, counts.sum(axis=1).astype(np.float64))


def local_maxima(scores: np.ndarray) -> np.ndarray:
    """Strict 8-neighborhood maxima of a 2-D array, best first.

    Returns an ``(n, 2)`` array of ``(row, col)`` indices ordered by score
    descending, then lower row, then lower column.  Nodes outside the array
    do not count as neighbors.
    """
    s = np.asarray(scores, dtype=np.float64)
    pad = np.pad(s, 1, constant_values=-np.inf)
    R, C = s.shape
    peak = np.ones_like(s, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                peak &= s > pad[1 + di:1 + di + R, 1 + dj:1 + dj + C]
    rows, cols = np.nonzero(peak)
    order = np.lexsort((cols, rows, -s[rows, cols]))
    return np.stack([rows[order], cols[order]], axis=1)


@dataclass(frozen=True)
class Detection:
    delay_s: float
    doppler_hz: float
    amplitude: complex
    score: float
    order: int
    delay_index: int = -1
    doppler_index: int = -1

    def __post_init__(self):
        if not self.score >= 0:
            raise ValueError("score must be non-negative")


@dataclass(frozen=True)
class DetectionReport:
    detections: tuple
    method: str
    residual_energy: tuple = ()  # OMP: ||z^(k)||^2 for k = 0..K
    shortfall: bool = False  # fewer detections than requested
    notes: tuple = ()

    def to_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["order", "delay_s", "doppler_hz", "amp_re", "amp_im", "score"])
            for d in self.detections:
                w.writerow([d.order, repr(float(d.delay_s)), repr(float(d.doppler_hz)),
                            repr(float(d.amplitude.real)), repr(float(d.amplitude.imag)),
                            repr(float(d.score))])


def dft_mtd(echo: EchoData, train: PulseTrain, grid: SearchGrid, K: int,
            timing: str = "actual", mf: MatchedFilterMap | None = None,
            threads: int = 1) -> DetectionReport:
    """The ``K`` strongest local maxima of one matched-filter map.

    Amplitudes are per-detection scalar least squares ``s^H z / ||s||^2``;
    detections do not cancel each other.  A precomputed ``mf`` for the same
    echo may be passed to avoid recomputing the map.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if mf is None:
        mf = matched_filter_map(echo, train, grid, timing, threads)
    scores = mf.scores
    peaks = local_maxima(scores)[:K]
    dets = []
    for k, (i, j) in enumerate(peaks):
        e = mf.atom_energy[i]
        amp = complex(mf.values[i, j] / e) if e > 0 else 0j
        dets.append(Detection(float(grid.delays[i]), float(grid.dopplers[j]), amp,
                              float(scores[i, j]), k + 1, int(i), int(j)))
    short = len(dets) < K
    notes = (f"only {len(dets)} local maxima for K={K}",) if short else ()
    return DetectionReport(tuple(dets), "dft_mtd", (), short, notes)


def least_squares(A: np.ndarray, z: np.ndarray, rank_tol: float = 1e-10):
    """Solve ``min ||A x - z||`` by column-pivoted QR.

    Returns ``(x, residual, rank)``.  ``residual = z - A x`` is formed as
    ``z - Q (Q^H z)``, never through an explicit projector.
    """
    Q, R, piv = qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rank_tol * diag[0])) if diag.size and diag[0] > 0 else 0
    Q, R = Q[:, :rank], R[:rank, :rank]
    qz = Q.conj().T @ z
    x = np.zeros(A.shape[1], dtype=np.complex128)
    x[piv[:rank]] = solve_triangular(R, qz)
    return x, z - Q @ qz, rank


def omp_detect(echo: EchoData, train: PulseTrain, grid: SearchGrid, K: int,
               threads: int = 1, mf: MatchedFilterMap | None = None) -> DetectionReport:
    """Orthogonal matching pursuit with ``K`` iterations.

    Each iteration takes the strongest peak of ``|s^H z^(k-1)|``, appends its
    steering vector to ``A`` and replaces the residual with the part of ``z``
    orthogonal to ``span(A)``.  A peak whose atom is already selected or
    numerically dependent on ``A`` is skipped in favour of the next one, with
    a :class:`SingularAtomWarning`.  ``mf`` may carry the map of ``echo``
    itself, which is then reused for the first iteration.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if K > grid.size:
        raise ValueError("K exceeds the number of grid nodes")
    z = np.asarray(echo.samples, dtype=np.complex128)
    ts, n = echo.sample_period_s, z.size
    resid = EchoData(z, ts, echo.provenance)
    atoms, picked, scores = [], [], []
    energy = [float(np.vdot(z, z).real)]
    notes = []
    for k in range(K):
        if k > 0 or mf is None:
            mf = matched_filter_map(resid, train, grid, "actual", threads)
        sc = mf.scores
        cand = local_maxima(sc)
        # after the local maxima, every other node in the same order
        rest = np.lexsort((np.tile(np.arange(sc.shape[1]), sc.shape[0]),
                           np.repeat(np.arange(sc.shape[0]), sc.shape[1]), -sc.ravel()))
        rest = np.stack(np.unravel_index(rest, sc.shape), axis=1)
        chosen = None
        for i, j in _chain(cand, rest):
            if (i, j) in picked:
                continue
            s = steering_vector(train, grid.delays[i], grid.dopplers[j], ts, n)
            A = np.stack(atoms + [s], axis=1)
            _, r, rank = least_squares(A, z)
            if rank < A.shape[1]:
                msg = f"iteration {k + 1}: atom at node ({i}, {j}) is dependent on A; skipped"
                warnings.warn(msg, SingularAtomWarning, stacklevel=2)
                notes.append(msg)
                continue
            chosen = (int(i), int(j), s, r)
            break
        if chosen is None:
            notes.append(f"no admissible atom at iteration {k + 1}")
            break
        i, j, s, r = chosen
        atoms.append(s)
        picked.append((i, j))
        scores.append(float(sc[i, j]))
        resid = EchoData(r, ts, echo.provenance)
        energy.append(float(np.vdot(r, r).real))
    dets = []
    if atoms:
        amps, _, _ = least_squares(np.stack(atoms, axis=1), z)
        for k, ((i, j), a, s) in enumerate(zip(picked, amps, scores)):
            dets.append(Detection(float(grid.delays[i]), float(grid.dopplers[j]), complex(a), s, k + 1, i, j))
    return DetectionReport(tuple(dets), "omp", tuple(energy), len(dets) < K, tuple(notes))


def _chain(*seqs):
    seen = set()
    for seq in seqs:
        for i, j in seq:
            key = (int(i), int(j))
            if key not in seen:
                seen.add(key)
                yield key


def range_resolution(sample_rate_hz: float, c: float) -> float:
    """``c / (2 Fs)``."""
    return c / (2.0 * sample_rate_hz)


def doppler_resolution(train: PulseTrain) -> float:
    """``1 / sum_k T_k``, the reciprocal of the realized CPI length."""
    return 1.0 / train.duration_s


def success(detections, truths, delay_tol_s: float, doppler_tol_hz: float) -> np.ndarray:
    """Per-truth recovery flags.

    Detections are visited by score, highest first; each claims the unclaimed
    truth it matches best among those with ``|delay error| < delay_tol_s`` and
    ``|Doppler error| < doppler_tol_hz``.  A truth succeeds iff it is claimed.
    A range tolerance of ``DeltaR / 2`` corresponds to a delay tolerance of
    ``Ts / 2``.
    """
    truths = list(truths)
    if not truths:
        raise ValueError("truth list is empty")
    ok = np.zeros(len(truths), dtype=bool)
    ordered = sorted(detections, key=lambda d: (-d.score, d.order))
    for det in ordered:
        best, best_err = None, np.inf
        for k, t in enumerate(truths):
            if ok[k]:
                continue
            ed = abs(det.delay_s - t.delay_s) / delay_tol_s
            ef = abs(det.doppler_hz - t.doppler_hz) / doppler_tol_hz
            if ed < 1 and ef < 1 and max(ed, ef) < best_err:
                best, best_err = k, max(ed, ef)
        if best is not None:
            ok[best] = True
    return ok
