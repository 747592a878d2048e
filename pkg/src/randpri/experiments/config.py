"""Experiment configuration: flat ``key = value`` files plus overrides.

Values are resolved in three layers, later ones winning: per-kind defaults,
the config file, then command-line flags.  Lists are comma separated.  Lines
starting with ``#`` or ``;`` are comments.

Example::

    kind = recovery_b
    trials = 200
    ratio_db_values = 8, 10, 12, 14, 16, 18
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path

from ..waveform import ParameterError, WaveformParams

__all__ = ["ConfigError", "ExperimentConfig", "KINDS", "load_config"]

KINDS = ("af_compare", "af_stats_delay", "af_stats_doppler", "recovery_a", "recovery_b", "design")

_SECTION = "experiment"


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    # waveform
    pulse_count: int = 32
    pulse_width_s: float = 1e-6
    pri_s: float = 50e-6
    jitter_range_s: float = 25e-6
    sample_rate_hz: float = 1e6
    carrier_freq_hz: float = 10e9
    # run control
    trials: int = 2000
    master_seed: int = 2024
    threads: int = 1
    out: str = "out"
    plot_script: bool = False
    # ambiguity cuts
    rho_fractions: tuple = (0.0, 0.1, 0.5, 0.9)
    delay_span_pri: int = 4
    delay_points_per_pri: int = 500
    doppler_span_pri: int = 4
    doppler_points: int = 1025
    range_peak_orders: tuple = (1, 2, 3)
    n_sigma: float = 3.0
    pin_first: bool = True
    # recovery
    target_ranges_m: tuple = (11980.0, 15050.0)
    target_dopplers_hz: tuple = (40e3, 30e3)
    snap_delays_to_grid: bool = True
    speed_of_light: float = 2.998e8
    detect_k: int = 2
    dft_timing: str = "actual"
    delay_min_s: float = 70e-6
    delay_max_s: float = 110e-6
    doppler_min_hz: float = 20e3
    doppler_max_hz: float = 50e3
    doppler_step_hz: float = 0.0  # 0 selects 1/(M Tr)
    snr2_db_values: tuple = (-25.0, -20.0, -15.0, -10.0, -5.0, 0.0)
    power_ratio_db: float = 10.0
    snr2_fixed_db: float = -6.0
    ratio_db_values: tuple = (8.0, 10.0, 12.0, 14.0, 16.0, 18.0)
    # design
    target_range_level: float = 0.25
    target_doppler_level: float = 0.25
    design_range_rho_tp: float = 5.0
    design_range_m: tuple = tuple(range(16, 129))
    design_doppler_m: tuple = (256,)
    design_doppler_rho_tr: tuple = (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.kind.startswith("af_stats") and self.trials < 2:
            raise ConfigError("af_stats needs at least 2 trials")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        for name in ("rho_fractions", "range_peak_orders", "target_ranges_m", "target_dopplers_hz",
                     "snr2_db_values", "ratio_db_values", "design_range_m", "design_doppler_m",
                     "design_doppler_rho_tr"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"{name} must not be empty")
        if len(self.target_ranges_m) != len(self.target_dopplers_hz):
            raise ConfigError("target_ranges_m and target_dopplers_hz differ in length")
        if self.dft_timing not in ("actual", "nominal"):
            raise ConfigError("dft_timing must be 'actual' or 'nominal'")
        try:
            self.waveform()
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None

    def waveform(self, jitter_range_s: float | None = None) -> WaveformParams:
        return WaveformParams(
            self.pulse_count, self.pulse_width_s, self.pri_s,
            self.jitter_range_s if jitter_range_s is None else jitter_range_s,
            self.sample_rate_hz, self.carrier_freq_hz)

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)

    def as_text(self) -> str:
        """The resolved configuration in the file format, for provenance.

        Settings that cannot change results (threads, output paths) are left out.
        """
        lines = []
        for f in dataclasses.fields(self):
            if f.name in ("threads", "out", "plot_script"):
                continue
            lines.append(f"{f.name} = {_format(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"


# kind-specific defaults that differ from the field defaults
_KIND_DEFAULTS = {
    "af_compare": {},
    "af_stats_delay": {},
    "af_stats_doppler": {},
    "recovery_a": {"pulse_count": 256, "jitter_range_s": 40e-6, "trials": 100},
    "recovery_b": {"pulse_count": 256, "jitter_range_s": 40e-6, "trials": 100},
    "design": {},
}

_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _format(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ", ".join(_format(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_scalar(kind_of, text: str, key: str):
    text = text.strip()
    try:
        if kind_of is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind_of is int:
            return int(text, 0)
        if kind_of is float:
            return float(text)
        return text
    except ValueError:
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def _coerce(key: str, value):
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    default = _FIELDS[key].default
    if isinstance(default, tuple):
        if isinstance(value, str):
            items = [x for x in (s.strip() for s in value.split(",")) if x]
        else:
            items = list(value)
        elem = type(default[0]) if default else float
        return tuple(_parse_scalar(elem, str(x), key) if isinstance(x, str) else elem(x) for x in items)
    if isinstance(value, str):
        return _parse_scalar(type(default), value, key)
    return value


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file into a dict of raw strings."""
    text = Path(path).read_text(encoding="utf-8")
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return dict(cp[_SECTION])


def load_config(kind: str | None = None, path=None, overrides: dict | None = None,
                strict_kind: bool = True) -> ExperimentConfig:
    """Resolve defaults, an optional file and overrides into a config.

    ``kind`` may come from the argument or from the file; if both are given
    they must agree unless ``strict_kind`` is false, in which case the
    argument wins (one file shared by several experiments).
    """
    raw = read_config_file(path) if path is not None else {}
    file_kind = raw.pop("kind", None)
    if kind is None:
        kind = file_kind
    elif strict_kind and file_kind is not None and file_kind.strip() != kind:
        raise ConfigError(f"config file is for {file_kind.strip()!r}, not {kind!r}")
    if kind is None:
        raise ConfigError("experiment kind is not set")
    kind = kind.strip()
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}; expected one of {KINDS}")
    values = dict(_KIND_DEFAULTS[kind])
    for key, text in raw.items():
        values[key] = _coerce(key, text)
    for key, v in (overrides or {}).items():
        if v is not None:
            values[key] = _coerce(key, v)
    try:
        return ExperimentConfig(kind=kind, **values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
