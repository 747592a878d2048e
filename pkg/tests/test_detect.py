import numpy as np
import pytest

from randpri.detect import (Detection, DetectionReport, SearchGrid, SingularAtomWarning, dft_mtd, least_squares,
                            local_maxima, matched_filter_map, omp_detect, success)
from randpri.scene import Scene, Target, steering_vector, synthesize_echo
from randpri.waveform import WaveformParams, generate_pulse_train, stable_pulse_train, trial_rng

TR = 50e-6
M = 64
FSTEP = 1 / (M * TR)


@pytest.fixture(scope="module")
def train():
    return generate_pulse_train(WaveformParams(M, 1e-6, TR, 40e-6), trial_rng(21, 0))


@pytest.fixture(scope="module")
def grid():
    return SearchGrid.uniform((70e-6, 110e-6), 1e-6, (20e3, 50e3), FSTEP)


def _echo(train, targets, noise_power=0.0, seed=0, n=None):
    sc = Scene.for_train(train, targets, noise_power, n)
    return synthesize_echo(train, sc, rng=np.random.default_rng(seed))


def test_grid_validation(grid):
    assert grid.shape == (41, 97) and grid.size == 41 * 97
    assert grid.covers(80e-6, 40e3) and not grid.covers(60e-6, 40e3)
    with pytest.raises(ValueError):
        SearchGrid([1.0, 1.0], [0.0])
    with pytest.raises(ValueError):
        grid.delays[0] = 0.0


def test_map_matches_direct_inner_products(train, grid):
    echo = _echo(train, [Target(1 + 1j, 83e-6, 3.1e4)], 1.0, seed=3)
    mf = matched_filter_map(echo, train, grid)
    n = echo.sample_count
    for i in (0, 13, 40):
        for j in (0, 50, 96):
            s = steering_vector(train, grid.delays[i], grid.dopplers[j], 1e-6, n)
            assert mf.values[i, j] == pytest.approx(np.vdot(s, echo.samples), rel=1e-9, abs=1e-9)
            assert mf.atom_energy[i] == pytest.approx(np.vdot(s, s).real)


def test_map_thread_invariant(train, grid):
    echo = _echo(train, [Target(1.0, 90e-6, 25e3)], 0.5, seed=4)
    a = matched_filter_map(echo, train, grid).values
    b = matched_filter_map(echo, train, grid, threads=3).values
    np.testing.assert_array_equal(a, b)


def test_noiseless_peak_location_and_height(train, grid):
    alpha = 0.7 * np.exp(1j)
    echo = _echo(train, [Target(alpha, grid.delays[10], grid.dopplers[40])])
    sc = matched_filter_map(echo, train, grid).scores
    assert np.unravel_index(np.argmax(sc), sc.shape) == (10, 40)
    assert sc[10, 40] == pytest.approx(abs(alpha) * M, rel=1e-12)


def test_jitter_suppresses_doppler_ambiguity(grid):
    # a stable train's map repeats every 1/Tr in Doppler; a random one does not
    g = SearchGrid.uniform((80e-6, 80e-6), 1e-6, (0.0, 2 / TR), FSTEP)
    stable = stable_pulse_train(WaveformParams(M, 1e-6, TR, 0.0))
    rand = generate_pulse_train(WaveformParams(M, 1e-6, TR, 40e-6), trial_rng(2, 0))
    ratios = []
    for tr in (stable, rand):
        sc = matched_filter_map(_echo(tr, [Target(1.0, 80e-6, 0.0)]), tr, g).scores[0]
        ratios.append(sc[np.argmin(np.abs(g.dopplers - 1 / TR))] / sc[0])
    assert ratios[0] > 0.95 and ratios[1] < 0.5


def test_local_maxima_order_and_ties():
    s = np.array([[1.0, 0.0, 3.0], [0.0, 0.0, 0.0], [3.0, 0.0, 2.0]])
    np.testing.assert_array_equal(local_maxima(s), [[0, 2], [2, 0], [2, 2], [0, 0]])
    # plateaus are not strict maxima
    assert local_maxima(np.ones((3, 3))).shape == (0, 2)


def test_dft_mtd_two_targets(train, grid):
    t1 = Target(3.0, grid.delays[10], grid.dopplers[77])
    t2 = Target(1.0j, grid.delays[30], grid.dopplers[13])
    echo = _echo(train, [t1, t2])
    rep = dft_mtd(echo, train, grid, 2)
    got = [(d.delay_index, d.doppler_index) for d in rep.detections]
    assert got == [(10, 77), (30, 13)]
    assert rep.detections[0].amplitude == pytest.approx(3.0, abs=0.2)
    assert not rep.shortfall
    nominal = dft_mtd(echo, train, grid, 2, timing="nominal")
    assert len(nominal.detections) == 2
    with pytest.raises(ValueError):
        matched_filter_map(echo, train, grid, timing="ideal")


def test_omp_k1_agrees_with_dft(train, grid):
    echo = _echo(train, [Target(1.0, 95e-6, 41e3)], 0.3, seed=9)
    a = dft_mtd(echo, train, grid, 1).detections[0]
    b = omp_detect(echo, train, grid, 1).detections[0]
    assert (a.delay_index, a.doppler_index) == (b.delay_index, b.doppler_index)
    assert b.amplitude == pytest.approx(a.amplitude, rel=1e-10)


def test_omp_recovers_weak_target_exactly(train, grid):
    t1 = Target(30.0, grid.delays[10], grid.dopplers[60])
    t2 = Target(np.exp(0.4j), grid.delays[12], grid.dopplers[20])
    echo = _echo(train, [t1, t2])
    rep = omp_detect(echo, train, grid, 2)
    amps = sorted((d.amplitude for d in rep.detections), key=abs)
    assert amps[0] == pytest.approx(t2.amplitude, abs=1e-10)
    assert amps[1] == pytest.approx(t1.amplitude, abs=1e-10)
    assert rep.residual_energy[-1] < 1e-20 * rep.residual_energy[0]
    assert np.all(np.diff(rep.residual_energy) <= 1e-12)


def test_omp_scale_equivariant(train, grid):
    echo = _echo(train, [Target(2.0, 75e-6, 33e3), Target(0.5, 99e-6, 47e3)], 0.2, seed=5)
    a = omp_detect(echo, train, grid, 2)
    b = omp_detect(echo.scaled(-3j), train, grid, 2)
    assert [(d.delay_index, d.doppler_index) for d in a.detections] == \
        [(d.delay_index, d.doppler_index) for d in b.detections]
    for x, y in zip(a.detections, b.detections):
        assert y.amplitude == pytest.approx(-3j * x.amplitude, rel=1e-9)


def test_least_squares_residual_orthogonal():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((50, 4)) + 1j * rng.standard_normal((50, 4))
    z = rng.standard_normal(50) + 0j
    x, r, rank = least_squares(A, z)
    assert rank == 4
    assert np.abs(A.conj().T @ r).max() < 1e-12
    np.testing.assert_allclose(x, np.linalg.lstsq(A, z, rcond=None)[0], rtol=1e-10)
    # idempotent: the residual has nothing left to project
    _, r2, _ = least_squares(A, r)
    np.testing.assert_allclose(r2, r, atol=1e-12)
    assert least_squares(np.column_stack([A[:, 0], 2 * A[:, 0]]), z)[2] == 1


def test_omp_skips_dependent_atom(table2):
    # Doppler shifts one sample rate apart give identical sampled atoms
    tr = stable_pulse_train(table2)
    g = SearchGrid([80e-6], [0.0, 1e6])
    echo = _echo(tr, [Target(1.0, 80e-6, 0.0)], 0.01, seed=1)
    with pytest.warns(SingularAtomWarning):
        rep = omp_detect(echo, tr, g, 2)
    assert rep.shortfall and len(rep.detections) == 1 and rep.notes


def test_success_tolerances():
    truths = [Target(1, 80e-6, 40e3), Target(1, 100e-6, 30e3)]
    dtol, ftol = 0.5e-6, 0.5 / (31 * TR)

    def det(d, f, score):
        return Detection(d, f, 1.0, score, 1)

    assert list(success([det(80e-6, 40e3, 2), det(100e-6, 30e3, 1)], truths, dtol, ftol)) == [True, True]
    # one delay bin off fails
    assert list(success([det(81e-6, 40e3, 2)], truths, dtol, ftol)) == [False, False]
    assert list(success([det(100e-6, 30e3 + 1.2 * ftol, 2)], truths, dtol, ftol)) == [False, False]
    # a detection claims at most one truth
    assert list(success([det(80e-6, 40e3, 1), det(80.2e-6, 40e3, 0.5)], truths, dtol, ftol)) == [True, False]
    with pytest.raises(ValueError):
        success([], [], dtol, ftol)


def test_shortfall_when_few_maxima(train):
    g = SearchGrid([80e-6], [40e3, 40e3 + FSTEP])
    echo = _echo(train, [Target(1.0, 80e-6, 40e3)])
    rep = dft_mtd(echo, train, g, 2)
    assert rep.shortfall and len(rep.detections) == 1


def test_report_and_map_csv(tmp_path, train, grid):
    echo = _echo(train, [Target(1.0, 90e-6, 30e3)])
    small = SearchGrid(grid.delays[:2], grid.dopplers[:3])
    mf = matched_filter_map(echo, train, small)
    mf.to_csv(tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines[0] == "delay_s,doppler_hz,score" and len(lines) == 7
    rep = omp_detect(echo, train, grid, 1)
    rep.to_csv(tmp_path / "r.csv")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "order,delay_s,doppler_hz,amp_re,amp_im,score" and len(lines) == 2
    assert isinstance(rep, DetectionReport)
