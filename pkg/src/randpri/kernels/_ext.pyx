# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pure.py``; same arguments and results."""

import numpy as np

from libc.math cimport cos, sin, fabs, M_PI

cdef inline double _sinc_pi(double x) noexcept nogil:
    # sin(pi x) / (pi x), matching numpy.sinc
    if x == 0.0:
        return 1.0
    cdef double y = M_PI * x
    return sin(y) / y


cdef Py_ssize_t _first_above(const double[::1] a, double v) noexcept nogil:
    # numpy.searchsorted(a, v, side="right")
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def af_sum(starts, double tp, delays, dopplers):
    cdef const double[::1] t = np.ascontiguousarray(starts, dtype=np.float64)
    cdef const double[::1] tau = np.ascontiguousarray(np.atleast_1d(delays), dtype=np.float64)
    cdef const double[::1] fd = np.ascontiguousarray(np.atleast_1d(dopplers), dtype=np.float64)
    cdef Py_ssize_t P = tau.shape[0], M = t.shape[0], i, m, n
    out_arr = np.empty(P, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double re, im, delta, L, ph, s, f, tt
    with nogil:
        for i in range(P):
            re = 0.0
            im = 0.0
            tt = tau[i]
            f = fd[i]
            for m in range(M):
                n = _first_above(t, t[m] - tt - tp)
                while n < M:
                    delta = (t[m] - t[n]) - tt
                    if delta <= -tp:
                        break
                    L = tp - fabs(delta)
                    if L > 0.0:
                        ph = -M_PI * f * ((t[m] + t[n]) + tt + tp)
                        s = L * _sinc_pi(f * L)
                        re = re + s * cos(ph)
                        im = im + s * sin(ph)
                    n += 1
            out[i] = re + 1j * im
    return out_arr


# phasor recurrences are re-seeded from exact cos/sin this often
cdef enum:
    RESYNC = 32


def _uniform_step(fr):
    # step of an evenly spaced grid (to rounding), else 0
    if fr.shape[0] < 2:
        return 0.0
    d = np.diff(fr)
    step = float(d.mean())
    if step != 0.0 and np.ptp(d) <= 1e-12 * max(np.abs(fr).max(), abs(step)):
        return step
    return 0.0


cdef void _phasors(const double[::1] fr, double step, double t,
                   double[::1] c, double[::1] s) noexcept nogil:
    # c[k] + j s[k] = exp(j 2 pi f_k t); a rotation per step on uniform grids
    cdef Py_ssize_t k, F = fr.shape[0]
    cdef double ph, dc = 0.0, ds = 0.0, cr, sr
    if step != 0.0:
        dc = cos(2.0 * M_PI * step * t)
        ds = sin(2.0 * M_PI * step * t)
    for k in range(F):
        if step == 0.0 or k % RESYNC == 0:
            ph = 2.0 * M_PI * fr[k] * t
            c[k] = cos(ph)
            s[k] = sin(ph)
        else:
            cr = c[k - 1]
            sr = s[k - 1]
            c[k] = cr * dc - sr * ds
            s[k] = cr * ds + sr * dc


def doppler_radicand(jitters, double tr, freqs):
    cdef const double[::1] eps = np.ascontiguousarray(jitters, dtype=np.float64)
    cdef const double[::1] fr = np.ascontiguousarray(np.atleast_1d(freqs), dtype=np.float64)
    cdef Py_ssize_t M = eps.shape[0], F = fr.shape[0], k, p, n
    cdef double step = _uniform_step(np.asarray(fr))
    acc_arr = np.zeros(F, dtype=np.float64)
    cdef double[::1] acc = acc_arr
    cdef double[::1] c = np.empty(F, dtype=np.float64)
    cdef double[::1] s = np.empty(F, dtype=np.float64)
    with nogil:
        for p in range(1, M):
            for n in range(M - p):
                _phasors(fr, step, p * tr + (eps[n + p] - eps[n]), c, s)
                for k in range(F):
                    acc[k] += c[k]
    return M + 2.0 * acc_arr


def mf_map(z, first, counts, double ts, dopplers):
    cdef const double complex[::1] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef const long long[:, ::1] fi = np.ascontiguousarray(first, dtype=np.int64)
    cdef const long long[:, ::1] cn = np.ascontiguousarray(counts, dtype=np.int64)
    fd_arr = np.ascontiguousarray(dopplers, dtype=np.float64)
    cdef const double[::1] fd = fd_arr
    cdef Py_ssize_t D = fi.shape[0], M = fi.shape[1], F = fd.shape[0], d, k, m, l
    cdef Py_ssize_t Lmax = int(np.max(counts, initial=0))
    cdef double step = _uniform_step(fd_arr)
    out_arr = np.zeros((D, F), dtype=np.complex128)
    if Lmax == 0:
        return out_arr
    # intra-pulse ramp exp(-j 2 pi f l Ts), shared by every pulse and delay
    ramp = np.exp(-2j * np.pi * np.outer(fd_arr, np.arange(Lmax) * ts))
    cdef const double[:, ::1] rre = np.ascontiguousarray(ramp.real)
    cdef const double[:, ::1] rim = np.ascontiguousarray(ramp.imag)
    cdef double[:, ::1] ore = np.zeros((D, F))
    cdef double[:, ::1] oim = np.zeros((D, F))
    cdef double[::1] c = np.empty(F, dtype=np.float64)
    cdef double[::1] s = np.empty(F, dtype=np.float64)
    cdef double cre, cim, zr, zi
    with nogil:
        for d in range(D):
            for m in range(M):
                if cn[d, m] == 0:
                    continue
                # slow time: exp(-j 2 pi f first Ts) = conj of the phasor
                _phasors(fd, step, fi[d, m] * ts, c, s)
                for k in range(F):
                    cre = 0.0
                    cim = 0.0
                    for l in range(cn[d, m]):
                        zr = zz[fi[d, m] + l].real
                        zi = zz[fi[d, m] + l].imag
                        cre = cre + zr * rre[k, l] - zi * rim[k, l]
                        cim = cim + zr * rim[k, l] + zi * rre[k, l]
                    ore[d, k] += cre * c[k] + cim * s[k]
                    oim[d, k] += cim * c[k] - cre * s[k]
    out_arr.real = np.asarray(ore)
    out_arr.imag = np.asarray(oim)
    return out_arr
