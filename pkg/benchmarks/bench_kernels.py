"""Time the compiled and numpy kernel backends on representative inputs.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best wall time per kernel and backend, the speed-up, and the
largest relative difference between the two backends' outputs.
"""

import argparse
import timeit

import numpy as np

from randpri import kernels
from randpri.scene import pulse_sample_ranges
from randpri.waveform import WaveformParams, generate_pulse_train, trial_rng


def cases():
    tr32 = generate_pulse_train(WaveformParams(32, 1e-6, 50e-6, 25e-6), trial_rng(0, 0))
    tr256 = generate_pulse_train(WaveformParams(256, 1e-6, 50e-6, 40e-6), trial_rng(0, 1))
    delays = np.arange(0, 4 * 500 + 1) * 50e-6 / 500
    freqs = np.linspace(-4 / 50e-6, 4 / 50e-6, 1025)
    n = 13000
    z = np.random.default_rng(0).standard_normal((n, 2)) @ [1, 1j]
    grid_d = np.arange(70, 111) * 1e-6
    grid_f = 20e3 + 78.125 * np.arange(385)
    first, counts = pulse_sample_ranges(tr256, grid_d, 1e-6, n)
    return {
        "af_sum (M=32, 2001 delays)": ("af_sum", (tr32.start_times_s, 1e-6, delays, np.zeros_like(delays))),
        "doppler_radicand (M=32, 1025 f)": ("doppler_radicand", (tr32.jitters_s, 50e-6, freqs)),
        "doppler_radicand (M=256, 1025 f)": ("doppler_radicand", (tr256.jitters_s, 50e-6, freqs)),
        "mf_map (M=256, 41 x 385)": ("mf_map", (z, first, counts, 1e-6, grid_f)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    names = list(kernels.BACKENDS)
    if "cython" not in names:
        print("compiled extension not built; timing the numpy backend only")
    print(f"{'kernel':36s}" + "".join(f"{n:>12s}" for n in names) + f"{'speed-up':>10s}{'max rel diff':>14s}")
    for label, (fn, a) in cases().items():
        times, outs = [], []
        for n in names:
            f = getattr(kernels.BACKENDS[n], fn)
            outs.append(f(*a))
            times.append(min(timeit.repeat(lambda: f(*a), number=1, repeat=args.repeat)))
        row = f"{label:36s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(names) == 2:
            diff = np.abs(outs[1] - outs[0]).max() / max(np.abs(outs[0]).max(), 1e-300)
            row += f"{times[0] / times[1]:9.1f}x{diff:14.2e}"
        print(row)


if __name__ == "__main__":
    main()
