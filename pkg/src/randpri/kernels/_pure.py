"""Numpy implementations of the hot kernels.

These are the reference versions; ``_ext.pyx`` mirrors them loop for loop.
"""

import numpy as np

_CHUNK = 1 << 22  # max elements of a temporary (rows x columns) block


def af_sum(starts, tp, delays, dopplers):
    """Closed-form ambiguity function at paired ``(delay, doppler)`` points.

    Sums, over every pulse pair ``(m, n)`` whose intervals ``(t_m, t_m+Tp]``
    and ``(t_n+tau, t_n+tau+Tp]`` overlap on ``[a, b]``, the integral
    ``(b-a) exp(-j pi f (a+b)) sinc(pi f (b-a))``.  Partners of each ``m`` are
    found by binary search, and terms are accumulated sequentially in ``m``.
    """
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    delays = np.atleast_1d(np.asarray(delays, dtype=np.float64))
    dopplers = np.atleast_1d(np.asarray(dopplers, dtype=np.float64))
    M = starts.size
    out = np.empty(delays.size, dtype=np.complex128)
    rows = max(1, _CHUNK // (4 * M))
    for lo in range(0, delays.size, rows):
        tau = delays[lo:lo + rows, None]
        f = dopplers[lo:lo + rows, None]
        # first partner n with t_n > t_m - tau - Tp
        n = np.searchsorted(starts, starts[None, :] - tau - tp, side="right")
        acc = np.zeros(np.broadcast_shapes(tau.shape, starts[None, :].shape), dtype=np.complex128)
        while True:
            valid = n < M
            if not valid.any():
                break
            tn = starts[np.where(valid, n, 0)]
            # (t_m - t_n) - tau flips sign bitwise under (m, n, tau) -> (n, m, -tau)
            delta = (starts[None, :] - tn) - tau
            valid &= delta > -tp
            if not valid.any():
                break
            L = tp - np.abs(delta)
            valid &= L > 0
            # a + b of the overlap [a, b] is t_m + t_n + tau + Tp
            ab = (starts[None, :] + tn) + tau + tp
            term = L * np.exp(-1j * np.pi * f * ab) * np.sinc(f * L)
            acc += np.where(valid, term, 0.0)
            n = n + 1
        # sequential reduction keeps the sum independent of zero padding
        out[lo:lo + rows] = np.cumsum(acc, axis=1)[:, -1]
    return out


def doppler_radicand(jitters, tr, freqs):
    """``M + 2 sum_p sum_n cos(2 pi f (p Tr + eps_{n+p} - eps_n))`` per frequency.

    Equals ``|sum_m exp(-j 2 pi f t_m)|**2`` for ``t_m = m Tr + eps_m``.
    """
    eps = np.asarray(jitters, dtype=np.float64)
    freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    M = eps.size
    iu, ju = np.triu_indices(M, k=1)
    lags = (ju - iu) * tr + (eps[ju] - eps[iu])
    out = np.empty(freqs.size)
    rows = max(1, _CHUNK // max(1, lags.size))
    for lo in range(0, freqs.size, rows):
        f = freqs[lo:lo + rows, None]
        out[lo:lo + rows] = M + 2.0 * np.cos(2 * np.pi * f * lags[None, :]).sum(axis=1)
    return out


def mf_map(z, first, counts, ts, dopplers):
    """Factorized matched filter ``s^H(tau, f) z`` on a delay x Doppler grid.

    ``first[d, m]`` and ``counts[d, m]`` give the samples of pulse ``m`` for
    delay ``d``.  For each delay the pulse-aligned fast-time samples are
    correlated with the intra-pulse phase ramp, then summed across pulses with
    the slow-time phase ``exp(-j 2 pi f first Ts)``.
    """
    z = np.asarray(z, dtype=np.complex128)
    first = np.asarray(first, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    f = np.asarray(dopplers, dtype=np.float64)
    D, M = first.shape
    Lmax = int(counts.max(initial=0))
    out = np.zeros((D, f.size), dtype=np.complex128)
    if Lmax == 0:
        return out
    lidx = np.arange(Lmax)
    intra = np.exp(-2j * np.pi * np.outer(lidx * ts, f))  # (L, F)
    for d in range(D):
        idx = first[d][:, None] + lidx[None, :]
        mask = lidx[None, :] < counts[d][:, None]
        fast = np.where(mask, z[np.where(mask, idx, 0)], 0.0)  # (M, L)
        corr = fast @ intra  # (M, F)
        slow = np.exp(-2j * np.pi * np.outer(first[d] * ts, f))  # (M, F)
        out[d] = (corr * slow).sum(axis=0)
    return out
