import numpy as np
import pytest

from randpri.ambiguity import af_cut_doppler
from randpri.mcstats import (MCConfig, MCCurve, check_range_peaks, doppler_cut_eq10, mc_delay_cut,
                             mc_doppler_cut)
from randpri.waveform import WaveformParams, generate_pulse_train, trial_rng

TR = 50e-6


@pytest.fixture
def delay_cfg():
    p = WaveformParams(16, 1e-6, TR, 20e-6)
    return MCConfig(40, 7, p, np.arange(0, 4 * 500 + 1) * TR / 500)


def test_config_validation():
    p = WaveformParams(4, 1e-6, TR, 0.0)
    with pytest.raises(ValueError):
        MCConfig(1, 0, p, [0.0])
    with pytest.raises(ValueError):
        MCConfig(10, 0, p, [])


def test_from_samples_statistics():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((500, 3)) * [1.0, 2.0, 0.0] + 5
    c = MCCurve.from_samples("delay", [0, 1, 2], x)
    np.testing.assert_allclose(c.mean, x.mean(axis=0))
    np.testing.assert_allclose(c.std, x.std(axis=0, ddof=1))
    np.testing.assert_allclose(c.stderr, c.std / np.sqrt(500))
    # Gaussian: se(std) ~ sigma / sqrt(2n)
    assert c.std_stderr[1] == pytest.approx(2 / np.sqrt(1000), rel=0.2)
    assert c.std_stderr[2] == 0.0


def test_delay_cut_deterministic_and_thread_invariant(delay_cfg):
    a = mc_delay_cut(delay_cfg)
    b = mc_delay_cut(delay_cfg, threads=4)
    np.testing.assert_array_equal(a.mean, b.mean)
    np.testing.assert_array_equal(a.std, b.std)
    # main lobe is jitter-free; origin is exactly one
    assert a.mean[0] == pytest.approx(1.0, abs=1e-15) and a.std[0] < 1e-15


def test_range_peak_check_runs(delay_cfg):
    curve = mc_delay_cut(delay_cfg)
    checks = check_range_peaks(curve, delay_cfg.waveform)
    assert [c.p for c in checks] == [1, 2, 3]
    assert all(np.isfinite(c.theory_mean) and np.isfinite(c.std_bound) for c in checks)
    with pytest.raises(ValueError):
        check_range_peaks(MCCurve.from_samples("delay", [0.0, 1e-5], np.ones((3, 2))), delay_cfg.waveform)


def test_pair_cosine_cut_matches_general_af():
    p = WaveformParams(24, 1e-6, TR, 35e-6)
    f = np.linspace(0, 8 / TR, 513)
    for i in range(3):
        tr = generate_pulse_train(p, trial_rng(3, i))
        vals, clamped = doppler_cut_eq10(tr, f)
        np.testing.assert_allclose(vals, af_cut_doppler(tr, f).normalized, atol=1e-9)
        assert clamped >= 0


def test_doppler_cut_stable_has_no_spread():
    p = WaveformParams(8, 1e-6, TR, 0.0)
    c = mc_doppler_cut(MCConfig(5, 1, p, np.linspace(0, 4 / TR, 101)))
    np.testing.assert_allclose(c.std, 0.0, atol=1e-7)


def test_curve_csv(tmp_path, delay_cfg):
    c = mc_delay_cut(MCConfig(3, 1, delay_cfg.waveform, [0.0, TR]))
    c.with_columns(bound=[np.nan, 0.5]).to_csv(tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "abscissa,mean,std,stderr,bound"
    assert lines[1].endswith(",") and lines[2].endswith(",0.5")
