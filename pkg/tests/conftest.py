import numpy as np
import pytest

from randpri.waveform import WaveformParams

# criterion number -> (title, passed, detail), filled in by test_acceptance.py
ACCEPTANCE = {}

CRITERIA = {
    1: "exact identities (main lobe, evenness, closed form vs oracle)",
    2: "range sidelobe mean at p*Tr matches closed form",
    3: "range sidelobe std below bound and below 1/sqrt(M)",
    4: "Doppler mean within [B_l, B_u] up to 3 stderr",
    5: "Doppler sidelobe peak bound and constants",
    6: "Doppler std bound, M=256 level, main-lobe behaviour",
    7: "design rows feasible",
    8: "OMP exact recovery, noiseless 30 dB pair",
    9: "scenario (b) weak-target separation",
    10: "scenario (a) T2-OMP tracks T1-DFT-MTD",
    11: "byte-identical reruns across thread counts",
}


@pytest.fixture
def criterion():
    """``criterion(n, passed, detail)`` records one acceptance line."""
    def record(n, passed, detail=""):
        ACCEPTANCE[n] = (CRITERIA[n], bool(passed), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n in ACCEPTANCE:
            title, ok, detail = ACCEPTANCE[n]
            tag = "PASS" if ok else "FAIL"
        else:
            title, tag, detail = CRITERIA[n], "NOT RUN", ""
        line = f"criterion {n:2d} {tag:7s} {title}"
        if detail:
            line += f" | {detail}"
        tr.write_line(line)


@pytest.fixture
def table2():
    """Pulse timing of the statistics experiments: M=32, Tp=1 us, Tr=50 us, Fs=1 MHz."""
    return WaveformParams(32, 1e-6, 50e-6, 0.0, 1e6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
