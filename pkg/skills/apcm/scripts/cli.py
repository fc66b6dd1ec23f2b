#!/usr/bin/env python3
"""
apcm - possibilistic clustering with adaptive cluster scales

Usage:
    python -m skills.apcm.scripts run --algorithm apcm --gen unequal_pair --m-ini 2 --alpha 1
    python -m skills.apcm.scripts run --algorithm pcm --input iris.csv --label-col last --m-ini 3
    python -m skills.apcm.scripts sweep --gen close_triplet --m-ini 5 10 --alpha 0.5 1 3 --output sweep.csv
    python -m skills.apcm.scripts landscape --gen bimodal_1d --m-ini 3 --alpha 1 --output landscape.csv
    python -m skills.apcm.scripts verify --suite bounds --trials 1000
    python -m skills.apcm.scripts gen --gen noisy_triplet --seed 7 --output triplet.csv

Exit codes: 0 success, 1 data or file error, 2 usage error.
"""

import argparse
import logging
import sys
from pathlib import Path

_lib_path = Path(__file__).parent.parent / "libs"
if str(_lib_path) not in sys.path:
    sys.path.insert(0, str(_lib_path))

import yaml

from datagen import get_available_datasets

try:
    from .config import ALGORITHMS, RunConfig, UsageError
    from .runner import ExperimentRunner
    from .verify import SUITES, run_suites
except ImportError:
    from config import ALGORITHMS, RunConfig, UsageError
    from runner import ExperimentRunner
    from verify import SUITES, run_suites


def _add_data_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", help="CSV file with one point per row")
    source.add_argument("--gen", choices=get_available_datasets(), help="Built-in generated dataset")
    parser.add_argument("--label-col", dest="label_col",
                        help="Ground-truth column: header name, index, or 'last'")
    parser.add_argument("--has-header", dest="has_header", action="store_true", default=None,
                        help="The CSV's first row holds column names")
    parser.add_argument("--seed", type=int, help="Seed for FCM initialisation and generators (default 42)")
    parser.add_argument("--q", type=float, help="FCM fuzzifier (default 2)")
    parser.add_argument("--config", help="YAML file with run parameters; flags override it")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apcm",
        description="Possibilistic clustering: FCM, PCM and adaptive PCM with cluster elimination",
    )
    parser.add_argument("--verbose", action="store_true", help="Log every iteration")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="Cluster one dataset and report")
    _add_data_arguments(run_parser)
    run_parser.add_argument("--algorithm", choices=ALGORITHMS, help="Algorithm (default apcm)")
    run_parser.add_argument("--m-ini", dest="m_ini", type=int,
                            help="Initial number of clusters; for apcm 3-4 times the expected number")
    run_parser.add_argument("--alpha", type=float, help="APCM scale divisor (default 1; 1 to 3 usually suffice)")
    run_parser.add_argument("--K", type=float, help="PCM scale multiplier (default 1)")
    run_parser.add_argument("--tol", type=float, help="Stop when no representative moves more (default 1e-6)")
    run_parser.add_argument("--max-iter", dest="max_iter", type=int,
                            help="Iteration cap (default 300, fcm 100)")
    run_parser.add_argument("--audit", action="store_true", default=None,
                            help="Check the eta / gamma' bounds at every apcm iteration")
    run_parser.add_argument("--output", help="Write the JSON report here")
    run_parser.add_argument("--labels-out", dest="labels_out", help="Write index,label CSV here")

    sweep_parser = subparsers.add_parser("sweep", help="APCM m_final over an (m_ini, alpha) grid")
    _add_data_arguments(sweep_parser)
    sweep_parser.add_argument("--algorithm", choices=["apcm"], default="apcm", help="Only apcm is swept")
    sweep_parser.add_argument("--m-ini", dest="m_ini", type=int, nargs="+", required=True)
    sweep_parser.add_argument("--alpha", type=float, nargs="+", required=True)
    sweep_parser.add_argument("--tol", type=float)
    sweep_parser.add_argument("--max-iter", dest="max_iter", type=int)
    sweep_parser.add_argument("--output", help="Write m_ini,alpha,m_final CSV here")

    landscape_parser = subparsers.add_parser("landscape", help="Single-cluster cost over a 1-D grid")
    _add_data_arguments(landscape_parser)
    landscape_parser.add_argument("--m-ini", dest="m_ini", type=int, default=3,
                                  help="FCM clusters used to estimate eta_hat")
    landscape_parser.add_argument("--alpha", type=float, default=1.0)
    landscape_parser.add_argument("--grid-size", dest="grid_size", type=int, default=2001)
    landscape_parser.add_argument("--output", help="Write theta,J CSV here")

    verify_parser = subparsers.add_parser("verify", help="Run numerical verification suites")
    verify_parser.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    verify_parser.add_argument("--trials", type=int, default=1000)
    verify_parser.add_argument("--sigma", type=float, default=1.0)
    verify_parser.add_argument("--gamma", type=float, default=2.0)
    verify_parser.add_argument("--samples", type=int, default=100_000)
    verify_parser.add_argument("--seed", type=int, default=42)

    gen_parser = subparsers.add_parser("gen", help="Write a generated dataset to CSV")
    gen_parser.add_argument("--gen", choices=get_available_datasets(), required=True)
    gen_parser.add_argument("--seed", type=int, default=42)
    gen_parser.add_argument("--output", required=True)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_yaml(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {
        name: getattr(args, name, None)
        for name in ("algorithm", "m_ini", "alpha", "K", "q", "tol", "max_iter", "seed", "input", "gen",
                     "label_col", "has_header", "output", "labels_out", "audit")
    }
    if args.command == "sweep":
        # m_ini and alpha lists are passed to the runner directly
        overrides.update(algorithm="apcm", m_ini=None, alpha=None, output=None)
    elif args.command == "landscape":
        overrides.update(algorithm="apcm", output=None)
    if overrides.get("input") is not None:
        overrides["gen"] = None
        config.gen = None
    elif overrides.get("gen") is not None:
        config.input = None
    return config.with_overrides(**overrides)


def _print_error(message: str, hint: str = "") -> None:
    print(f"\n{'=' * 60}", file=sys.stderr)
    print(f"Error: {message}", file=sys.stderr)
    print(f"{'=' * 60}", file=sys.stderr)
    if hint:
        print(f"\nHint: {hint}", file=sys.stderr)


_HINTS = {
    "IO_ERROR": "check that the input path exists and the output directory is writable",
    "DATA_ERROR": "check the CSV format (comma separated, '.' decimals) and the chosen parameters",
}


def _report_failure(result: dict) -> int:
    _print_error(result["error"], _HINTS.get(result.get("code"), ""))
    return 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    runner = ExperimentRunner()

    if args.command == "verify":
        suites = SUITES if args.suite == "all" else (args.suite,)
        results = run_suites(suites, trials=args.trials, sigma=args.sigma, gamma=args.gamma,
                             n_samples=args.samples, seed=args.seed)
        for result in results:
            print(result.line())
        return 0 if all(result.passed for result in results) else 1

    if args.command == "gen":
        result = runner.generate(args.gen, args.seed, args.output)
        if not result["success"]:
            return _report_failure(result)
        data = result["data"]
        print(f"✓ {data['dataset']}: {data['points']} points written to {data['path']}")
        return 0

    try:
        config = _config_from_args(args).validate()
        if config.gen is not None and config.gen not in get_available_datasets():
            raise UsageError(f"Unknown dataset: {config.gen}. Available: [{', '.join(get_available_datasets())}]")
    except (UsageError, TypeError) as e:
        parser.print_usage(sys.stderr)
        print(f"apcm {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError, yaml.YAMLError) as e:
        _print_error(str(e), "check the --config file")
        return 1

    if args.command == "run":
        result = runner.run(config)
        if not result["success"]:
            return _report_failure(result)
        report = result["data"]["report"]
        print(result["data"]["summary"])
        for warning in report.warnings:
            print(f"  ! {warning}")
        return 0

    if args.command == "sweep":
        if any(m < 1 for m in args.m_ini) or any(a <= 0 for a in args.alpha):
            parser.print_usage(sys.stderr)
            print("apcm sweep: error: m_ini values must be >= 1 and alpha values positive", file=sys.stderr)
            return 2
        result = runner.sweep(config, args.m_ini, args.alpha, output=args.output)
        if not result["success"]:
            return _report_failure(result)
        for row in result["data"]["rows"]:
            print(f"m_ini={row['m_ini']:<4} alpha={row['alpha']:<6g} m_final={row['m_final']}")
        return 0

    result = runner.landscape(config, grid_size=args.grid_size, output=args.output)
    if not result["success"]:
        return _report_failure(result)
    minima = result["data"]["minima"]
    print(f"eta_hat={result['data']['eta_hat']:.4f} minima={len(minima)} at "
          f"[{', '.join(f'{x:.2f}' for x in minima)}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
