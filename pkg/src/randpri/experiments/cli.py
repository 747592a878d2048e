"""Command-line entry point ``randpri``.

Exit codes: 0 when every check passes, 1 on a configuration error, 2 when
the run finished but at least one check failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config, read_config_file
from .runners import run_experiment, write_summary

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2


def _kinds(args) -> list:
    if args.verb == "af-compare":
        return ["af_compare"]
    if args.verb == "design":
        return ["design"]
    file_kind = None
    if args.config is not None:
        file_kind = (read_config_file(args.config).get("kind") or "").strip() or None
    if args.verb == "recovery":
        if args.scenario is None and file_kind in ("recovery_a", "recovery_b"):
            return [file_kind]
        return [f"recovery_{args.scenario or 'a'}"]
    if args.axis is None and file_kind in ("af_stats_delay", "af_stats_doppler"):
        return [file_kind]
    axis = args.axis or "both"
    return ["af_stats_delay", "af_stats_doppler"] if axis == "both" else [f"af_stats_{axis}"]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key = value config file")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials")
    p.add_argument("--out", type=Path, help="output directory (default: out)")
    p.add_argument("--threads", type=int, help="worker threads; results do not depend on it")
    p.add_argument("--plot-script", action="store_true", default=None,
                   help="also write plot.py that renders the CSVs with matplotlib")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randpri", description="Random-PRI radar waveform experiments.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("af-compare", help="stable vs random train ambiguity cuts")
    _add_common(p)
    p = sub.add_parser("af-stats", help="Monte Carlo statistics of the ambiguity cuts")
    p.add_argument("--axis", choices=("delay", "doppler", "both"),
                   help="cut to analyse (default: the config's kind, else both)")
    _add_common(p)
    p = sub.add_parser("recovery", help="weak-target recovery probability, DFT-MTD vs OMP")
    p.add_argument("--scenario", choices=("a", "b"),
                   help="(a) noise power varies, (b) strong-target power varies (default: the config's kind, else a)")
    _add_common(p)
    p = sub.add_parser("design", help="search pulse count and jitter range for sidelobe targets")
    _add_common(p)
    return ap


def _overrides(args) -> dict:
    ov = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        ov[k.strip()] = v.strip()
    for key, val in (("master_seed", args.seed), ("trials", args.trials), ("threads", args.threads),
                     ("plot_script", args.plot_script)):
        if val is not None:
            ov[key] = val
    if args.out is not None:
        ov["out"] = str(args.out)
    return ov


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        kinds = _kinds(args)
        ov = _overrides(args)
        cfgs = [load_config(k, args.config, ov, strict_kind=len(kinds) == 1) for k in kinds]
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    results = [run_experiment(c, summary=False) for c in cfgs]
    out = Path(cfgs[0].out)
    write_summary(results, cfgs, out)
    for res in results:
        for c in res.checks:
            print(c.line())
    print(f"wrote {out / 'summary.txt'}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
