"""Closed-form expectations and bounds for random-PRI ambiguity cuts.

Range side: mean and standard-deviation bound of the normalized zero-Doppler
cut at the stable-PRI grating-lobe delays ``p*Tr``.  Doppler side: upper and
lower bounds on the mean of the normalized zero-delay cut, a bound on its
largest nonzero local maximum, a standard-deviation bound, and the large-M
main-lobe approximation.  ``suggest_params`` turns these into a parameter
search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .ambiguity import sinc

__all__ = [
    "DomainError",
    "RangeSidelobeSpec",
    "DopplerBoundSpec",
    "DesignRow",
    "DesignResult",
    "dirichlet",
    "range_peak_mean",
    "range_peak_std_bound",
    "doppler_mean_bounds",
    "doppler_peak_bound",
    "doppler_numeric_peak",
    "doppler_std_bound",
    "doppler_mainlobe_approx",
    "doppler_sidelobe_certificate",
    "sidelobe_constants",
    "suggest_params",
]

_TOL = 1e-10


class DomainError(ValueError):
    """A formula is evaluated outside the regime where it is stated."""


def dirichlet(x, M: int):
    """``sin(pi M x) / (M sin(pi x))`` with its limit at integer ``x``.

    The argument is reduced to ``[-1/2, 1/2)`` first, so values at and near
    integers are exact rather than ``0/0``.
    """
    x = np.asarray(x, dtype=np.float64)
    k = np.round(x)
    y = x - k
    sign = np.where(((k * (M - 1)) % 2) == 0, 1.0, -1.0)
    den = M * np.sin(np.pi * y)
    with np.errstate(invalid="ignore", divide="ignore"):
        val = np.where(y == 0.0, 1.0, np.sin(np.pi * M * y) / np.where(y == 0.0, 1.0, den))
    return sign * val


@dataclass(frozen=True)
class RangeSidelobeSpec:
    M: int
    p: int
    rho_s: float
    tp_s: float

    def __post_init__(self):
        if self.p == 0 or abs(self.p) >= self.M:
            raise DomainError(f"grating-lobe index must satisfy 0 < |p| < M, got p={self.p}, M={self.M}")
        if self.rho_s < 0:
            raise DomainError("rho must be non-negative")
        if self.tp_s <= 0:
            raise DomainError("Tp must be positive")


def range_peak_mean(spec: RangeSidelobeSpec) -> float:
    """Mean normalized zero-Doppler cut at ``tau = p*Tr``.

    ``(M-|p|)/M * (1 - rho/(3 Tp))`` for ``rho <= Tp`` and
    ``(M-|p|)/M * (Tp/rho - Tp^2/(3 rho^2))`` for ``rho > Tp``; the two
    branches meet at ``rho = Tp``.
    """
    scale = (spec.M - abs(spec.p)) / spec.M
    r = spec.rho_s / spec.tp_s
    if r <= 1.0:
        return scale * (1.0 - r / 3.0)
    return scale * (1.0 / r - 1.0 / (3.0 * r * r))


def range_peak_std_bound(spec: RangeSidelobeSpec) -> float:
    """Upper bound on the std of the normalized cut at ``p*Tr``, valid for ``rho > Tp``."""
    if not spec.rho_s > spec.tp_s:
        raise DomainError(f"std bound is stated only for rho > Tp (rho={spec.rho_s}, Tp={spec.tp_s})")
    return math.sqrt(spec.M - abs(spec.p)) / spec.M * math.sqrt(2 * spec.tp_s / (3 * spec.rho_s))


def doppler_mean_bounds(f, M: int, tp: float, tr: float, rho: float):
    """Lower and upper bounds ``(B_l, B_u)`` on the mean normalized ``|Lambda(0, f)|``."""
    f = np.asarray(f, dtype=np.float64)
    s_tp = np.abs(sinc(np.pi * f * tp))
    s_rho = sinc(np.pi * f * rho)
    D = np.abs(dirichlet(f * tr, M))
    upper = s_tp * np.sqrt(np.maximum(1.0 / M + (D * D - 1.0 / M) * s_rho * s_rho, 0.0))
    lower = s_tp * np.abs(s_rho) * D
    if f.ndim == 0:
        return float(lower), float(upper)
    return lower, upper


def doppler_std_bound(f, M: int, tp: float, rho: float):
    """``sqrt((1 - sinc^2(pi f rho)) / M) * |sinc(pi f Tp)|``."""
    f = np.asarray(f, dtype=np.float64)
    s_rho = sinc(np.pi * f * rho)
    val = np.sqrt(np.maximum(1.0 - s_rho * s_rho, 0.0) / M) * np.abs(sinc(np.pi * f * tp))
    return float(val) if val.ndim == 0 else val


def doppler_mainlobe_approx(f, M: int, tp: float, tr: float):
    """Stable-PRI normalized cut, the large-M approximation inside ``|f| < 1/(M Tr)``."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(np.abs(f) >= 1.0 / (M * tr)):
        raise DomainError("main-lobe approximation holds only for |f| < 1/(M Tr)")
    val = np.abs(sinc(np.pi * f * tp)) * np.abs(dirichlet(f * tr, M))
    return float(val) if val.ndim == 0 else val


@lru_cache(maxsize=1)
def sidelobe_constants() -> tuple[float, float, float]:
    """``(w0, sinc^2(pi w0), w_star)``.

    ``w0`` maximizes ``sinc^2(pi w)`` on ``(1, 2)``; ``w_star`` is the smallest
    positive ``w`` where ``sinc^2(pi w)`` falls to that level.
    """
    def s2(w):
        return float(sinc(np.pi * w)) ** 2

    res = minimize_scalar(lambda w: -s2(w), bounds=(1.0, 2.0), method="bounded",
                          options={"xatol": _TOL})
    w0 = float(res.x)
    level = s2(w0)
    # sinc^2 decreases monotonically from 1 to 0 on (0, 1)
    w_star = bisect(lambda w: s2(w) - level, 1e-6, 1.0 - 1e-12, xtol=_TOL)
    return w0, level, float(w_star)


@dataclass(frozen=True)
class DopplerBoundSpec:
    M: int
    tp_s: float
    tr_s: float
    rho_s: float
    w0: float = field(init=False)
    w_star: float = field(init=False)
    w: float = field(init=False)

    def __post_init__(self):
        if self.M < 2:
            raise DomainError("Doppler peak bound needs M >= 2")
        if self.rho_s <= 0:
            raise DomainError("Doppler peak bound needs rho > 0")
        w0, _, w_star = sidelobe_constants()
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "w_star", w_star)
        object.__setattr__(self, "w", min(w_star, (self.M - 1) * self.rho_s / (self.M * self.tr_s)))


def doppler_peak_bound(spec: DopplerBoundSpec) -> float:
    """Bound on the largest nonzero local maximum of ``B_u``."""
    M = spec.M
    return math.sqrt(1.0 / M + (1.0 - 1.0 / M) * float(sinc(np.pi * spec.w)) ** 2)


def _local_maxima(y):
    """Indices ``i`` with ``y[i-1] < y[i] >= y[i+1]`` (interior points only)."""
    return np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1


def _refine_max(fun, lo, hi):
    res = minimize_scalar(lambda x: -fun(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": (hi - lo) * 1e-9})
    return float(res.x), float(-res.fun)


def _default_fmax(tr):
    return 4.0 / tr


def _sidelobe_grid(M, tr, f_max, grid_density):
    step = 1.0 / (grid_density * M * tr)
    f_lo = 1.0 / (M * tr)
    n = int(np.ceil((f_max - f_lo) / step)) + 1
    return f_lo + step * np.arange(n)


def doppler_numeric_peak(M: int, tp: float, tr: float, rho: float, f_max: float | None = None,
                         grid_density: int = 20, refine: int = 16) -> float:
    """Largest nonzero local maximum of ``B_u`` on ``1/(M Tr) <= f <= f_max``.

    The curve is sampled with step ``1/(grid_density M Tr)``; the ``refine``
    highest discrete maxima are polished with a bounded scalar maximizer over
    one grid step on each side.
    """
    if grid_density < 20:
        raise ValueError("grid_density must be at least 20 samples per main-lobe width")
    f_max = _default_fmax(tr) if f_max is None else f_max
    f = _sidelobe_grid(M, tr, f_max, grid_density)

    def bu(x):
        return doppler_mean_bounds(x, M, tp, tr, rho)[1]

    y = bu(f)
    idx = _local_maxima(y)
    if idx.size == 0:
        return float(y.max())
    top = idx[np.argsort(y[idx])[::-1][:refine]]
    best = float(y[idx].max())
    for i in top:
        _, v = _refine_max(bu, f[i - 1], f[i + 1])
        best = max(best, v, float(y[i]))
    return best


def doppler_sidelobe_certificate(M: int, tp: float, tr: float, rho: float, f_max: float | None = None,
                                 grid_density: int = 20, refine: int = 16) -> float:
    """``max_f [B_u(f) + std_bound(f)]`` over the sidelobe region ``f >= 1/(M Tr)``.

    A pointwise certificate that the mean plus one standard deviation of the
    normalized cut stays below a level everywhere outside the main lobe.
    """
    f_max = _default_fmax(tr) if f_max is None else f_max
    f = _sidelobe_grid(M, tr, f_max, grid_density)

    def g(x):
        return doppler_mean_bounds(x, M, tp, tr, rho)[1] + doppler_std_bound(x, M, tp, rho)

    y = g(f)
    best = float(y.max())
    idx = _local_maxima(y)
    for i in idx[np.argsort(y[idx])[::-1][:refine]]:
        best = max(best, _refine_max(g, f[i - 1], f[i + 1])[1])
    return best


@dataclass(frozen=True)
class DesignRow:
    """One ``(M, rho)`` grid point with its certifying values.

    Range values use ``p = 1``.  ``doppler_certificate`` is the pointwise
    maximum of ``B_u + std_bound`` outside the main lobe;
    ``doppler_peak + doppler_std_max`` is the looser sum of separate maxima.
    Missing checks are ``nan``.
    """

    M: int
    rho_s: float
    range_mean: float
    range_std_bound: float
    doppler_peak: float
    doppler_std_max: float
    doppler_certificate: float
    range_ok: bool
    doppler_ok: bool

    @property
    def feasible(self) -> bool:
        return self.range_ok and self.doppler_ok


@dataclass(frozen=True)
class DesignResult:
    rows: list
    target_range_level: float | None
    target_doppler_level: float | None

    @property
    def feasible(self) -> list:
        return [r for r in self.rows if r.feasible]

    @property
    def infeasible_on_grid(self) -> bool:
        return not self.feasible


def suggest_params(target_range_level: float | None, target_doppler_level: float | None,
                   tp: float, tr: float, M_grid, rho_grid, f_max: float | None = None) -> DesignResult:
    """Search ``(M, rho)`` grids for parameters meeting sidelobe targets.

    Range: ``G(Tr) + std_bound(Tr) < target_range_level`` (needs ``rho > Tp``).
    Doppler: ``max_f [B_u(f) + std_bound(f)] < target_doppler_level`` over
    ``1/(M Tr) <= f <= f_max``.  A ``None`` target skips that check.  Grid
    points with ``rho > Tr - 2 Tp`` are skipped.
    """
    for lvl in (target_range_level, target_doppler_level):
        if lvl is not None and not 0.0 < lvl < 1.0:
            raise ValueError("target levels must lie in (0, 1)")
    rows = []
    for M in M_grid:
        M = int(M)
        for rho in rho_grid:
            rho = float(rho)
            if rho > tr - 2 * tp + 8 * np.spacing(tr) or rho < 0:
                continue
            rmean = rstd = dpeak = dstd = dcert = math.nan
            range_ok = doppler_ok = True
            if target_range_level is not None:
                spec = RangeSidelobeSpec(M, 1, rho, tp) if M >= 2 else None
                if spec is not None:
                    rmean = range_peak_mean(spec)
                if spec is not None and rho > tp:
                    rstd = range_peak_std_bound(spec)
                    range_ok = rmean + rstd < target_range_level
                else:
                    range_ok = False
            if target_doppler_level is not None:
                fm = _default_fmax(tr) if f_max is None else f_max
                dpeak = doppler_numeric_peak(M, tp, tr, rho, fm)
                fg = _sidelobe_grid(M, tr, fm, 20)
                dstd = float(np.max(doppler_std_bound(fg, M, tp, rho)))
                dcert = doppler_sidelobe_certificate(M, tp, tr, rho, fm)
                doppler_ok = dcert < target_doppler_level
            rows.append(DesignRow(M, rho, rmean, rstd, dpeak, dstd, dcert, range_ok, doppler_ok))
    return DesignResult(rows, target_range_level, target_doppler_level)
