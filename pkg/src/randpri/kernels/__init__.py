"""Hot inner loops, compiled when available.

The Cython extension ``_ext`` is used if it was built; otherwise the numpy
versions in ``_pure`` are used.  Set ``RANDPRI_PURE_PYTHON=1`` to force the
numpy backend.  Both backends compute the same quantities; results agree to
rounding, not bitwise.
"""

import os

from . import _pure

if os.environ.get("RANDPRI_PURE_PYTHON", "") not in ("", "0"):
    _ext = None
else:
    try:
        from . import _ext
    except ImportError:  # extension not built
        _ext = None

BACKENDS = {"python": _pure}
if _ext is not None:
    BACKENDS["cython"] = _ext

BACKEND = "cython" if _ext is not None else "python"
_active = BACKENDS[BACKEND]


def get_backend(name=None):
    """Module implementing the kernels: ``"cython"``, ``"python"`` or the active one."""
    if name is None:
        return _active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {sorted(BACKENDS)}") from None


def af_sum(starts, tp, delays, dopplers):
    return _active.af_sum(starts, tp, delays, dopplers)


def doppler_radicand(jitters, tr, freqs):
    return _active.doppler_radicand(jitters, tr, freqs)


def mf_map(z, first, counts, ts, dopplers):
    return _active.mf_map(z, first, counts, ts, dopplers)
