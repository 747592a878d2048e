import warnings

import numpy as np
import pytest

from randpri.scene import (EchoData, Scene, Target, TruncationWarning, complex_noise,
                           default_sample_count, delay_to_range, pulse_sample_ranges, range_to_delay,
                           snr_of, steering_vector, synthesize_echo)
from randpri.waveform import WaveformParams, generate_pulse_train, stable_pulse_train, trial_rng


@pytest.fixture
def train():
    return generate_pulse_train(WaveformParams(32, 1e-6, 50e-6, 25e-6), trial_rng(1, 0))


def test_range_delay_roundtrip():
    assert delay_to_range(range_to_delay(12345.0)) == pytest.approx(12345.0)
    assert range_to_delay(15000.0, c=3e8) == pytest.approx(100e-6)
    with pytest.raises(ValueError):
        Target(1.0, -1e-6, 0.0)


def test_empty_scene_is_zero(train):
    echo = synthesize_echo(train, Scene.for_train(train, [], 0.0))
    assert echo.sample_count == default_sample_count(train)
    assert not np.any(echo.samples)


def test_identity_scene_reproduces_waveform(table2):
    tr = stable_pulse_train(table2)
    echo = synthesize_echo(tr, Scene.for_train(tr, [Target(1.0, 0.0, 0.0)], 0.0))
    expect = np.zeros(echo.sample_count)
    expect[np.arange(32) * 50 + 1] = 1.0
    np.testing.assert_array_equal(echo.samples, expect)


def test_steering_vector_energy(train):
    s = steering_vector(train, 80e-6, 4e4, 1e-6, default_sample_count(train, [Target(1, 80e-6, 0)]))
    assert np.vdot(s, s).real == pytest.approx(32)


def test_linearity(train):
    t1, t2 = Target(0.3 - 1j, 80e-6, 4e4), Target(2j, 101e-6, -1.1e4)
    n = default_sample_count(train, [t1, t2])
    e1 = synthesize_echo(train, Scene.for_train(train, [t1], 0.0, n)).samples
    e2 = synthesize_echo(train, Scene.for_train(train, [t2], 0.0, n)).samples
    both = synthesize_echo(train, Scene.for_train(train, [t1, t2], 0.0, n)).samples
    np.testing.assert_allclose(both, e1 + e2, atol=1e-15)


def test_noise_power_and_unit_vector():
    w = complex_noise(np.random.default_rng(0), 10 ** 6, 2.5)
    assert np.mean(np.abs(w) ** 2) == pytest.approx(2.5, rel=0.01)
    assert np.var(w.real) == pytest.approx(np.var(w.imag), rel=0.02)
    tr = stable_pulse_train(WaveformParams(4, 1e-6, 50e-6))
    sc = Scene.for_train(tr, [], 4.0)
    unit = complex_noise(np.random.default_rng(1), sc.sample_count)
    np.testing.assert_allclose(synthesize_echo(tr, sc, noise=unit).samples, 2 * unit)
    with pytest.raises(ValueError):
        synthesize_echo(tr, sc)


def test_snr(train):
    sc = Scene.for_train(train, [Target(10.0, 0.0, 0.0)], 0.1)
    assert snr_of(sc, 0) == pytest.approx(30.0)
    with pytest.raises(ValueError):
        snr_of(Scene.for_train(train, [Target(1.0, 0.0, 0.0)], 0.0), 0)


def test_truncation_warning(train):
    sc = Scene.for_train(train, [Target(1.0, 100e-6, 0.0)], 0.0, sample_count=1000)
    with pytest.warns(TruncationWarning):
        synthesize_echo(train, sc)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        synthesize_echo(train, Scene.for_train(train, [Target(1.0, 100e-6, 0.0)], 0.0))


def test_pulse_ranges_match_steering_support():
    tr = generate_pulse_train(WaveformParams(12, 3e-6, 50e-6, 40e-6), trial_rng(2, 2))
    n = 800
    delays = np.arange(0, 60) * 0.7e-6
    first, counts = pulse_sample_ranges(tr, delays, 1e-6, n)
    for d, tau in enumerate(delays):
        support = np.flatnonzero(steering_vector(tr, tau, 0.0, 1e-6, n))
        idx = np.concatenate([np.arange(a, a + c) for a, c in zip(first[d], counts[d])])
        np.testing.assert_array_equal(np.sort(idx), support)


def test_echo_scaled_and_csv(tmp_path):
    e = EchoData(np.array([1 + 2j, -0.5j]), 1e-6, {"seed": 1})
    s = e.scaled(2j)
    np.testing.assert_array_equal(s.samples, [-4 + 2j, 1 + 0j])
    assert s.provenance == {"seed": 1}
    e.to_csv(tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text().splitlines() == ["n,re,im", "0,1.0,2.0", "1,-0.0,-0.5"]
