"""Command-line interface for mixturecalc."""

import argparse
import sys
import warnings
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config import load_config, parse_config, read_config_file
from .demos import DEMOS, run_demo, write_csv
from .errors import ConfigError, MixtureError
from .report import SuiteReport
from .suites import run_suite, suite_names


def _progress(message: str) -> None:
    # stdout may carry the JSON report
    print(message, file=sys.stderr)


def _write_text(text: str, path: Path) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def _summarize(report: SuiteReport, verbose: bool) -> None:
    mark = "✓" if report.passed else "✗"
    failures = report.failures
    _progress(f"{mark} {report.suite}: {len(report.checks) - len(failures)}/{len(report.checks)} "
              f"checks passed ({report.wall_time:.2f}s)")
    for check in report.checks:
        if check.passed and not verbose:
            continue
        status = "ok  " if check.passed else "FAIL"
        tolerance = "info" if check.tolerance is None else f"tol {check.tolerance:.1e}"
        residual = "n/a" if check.residual is None else f"{check.residual:.3e}"
        _progress(f"  {status} {check.id}: {residual} ({tolerance})  {check.relation}")


def _error_code(error: Exception) -> int:
    """2 for bad input, 1 for numerical failure."""
    return 2 if isinstance(error, ValueError) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixturecalc",
        description="Verify mixture-algebra identities and run physics demos on C^(1+3)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Algebra identities with a fixed seed, JSON report on stdout
  mixturecalc run algebra-identities --seed 7

  # Every suite from a scenario file, report to a file
  mixturecalc run all --config config_example.yaml --out report.json

  # Naive vs corrected path integrals as CSV
  mixturecalc demo path-integral --seed 0 --out path_integral.csv

  # Schema check only
  mixturecalc validate config_example.json
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a verification suite and emit a JSON report")
    run.add_argument(
        "suite",
        help=f"Suite name: {', '.join(suite_names())}",
    )
    demo = sub.add_parser("demo", help="Run a demo scenario and write a CSV table")
    demo.add_argument(
        "name",
        help=f"Demo name: {', '.join(DEMOS)}",
    )

    for command in (run, demo):
        options = command.add_argument_group('Scenario')
        options.add_argument(
            "--config",
            type=Path,
            help="Scenario file (JSON or YAML)",
        )
        options.add_argument(
            "--seed",
            type=int,
            help="Random seed (overrides the config file's seed)",
        )
        options.add_argument(
            "-v", "--verbose",
            action="store_true",
            help="List every check and show library warnings",
        )
    run.add_argument(
        "--out",
        type=Path,
        help="Write the JSON report here instead of stdout",
    )
    run.add_argument(
        "--timing",
        action="store_true",
        help="Include wall time in the report (breaks byte-identical reruns)",
    )
    demo.add_argument(
        "--out",
        type=Path,
        help="Output CSV file (default: <demo>.csv)",
    )

    validate = sub.add_parser("validate", help="Check a scenario file without running anything")
    validate.add_argument(
        "path",
        type=Path,
        help="Scenario file (JSON or YAML)",
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        return _validate(args.path)

    # Suppress warnings by default unless verbose is enabled
    if not args.verbose:
        warnings.filterwarnings('ignore')

    raw: Dict[str, Any] = {}
    if args.config:
        try:
            raw = read_config_file(args.config)
        except ConfigError as e:
            _progress(f"Error: {e}")
            return 2
        _progress(f"Loaded config from: {args.config}")

    # Helper to get value: CLI arg > config > default
    def get_value(arg_name: str, config_key: str = None, default: Any = None) -> Any:
        if config_key is None:
            config_key = arg_name
        arg_val = getattr(args, arg_name, None)
        if arg_val is not None:
            return arg_val
        return raw.get(config_key, default) if isinstance(raw, dict) else default

    try:
        cfg = parse_config(raw, seed=get_value('seed'))
    except ConfigError as e:
        _progress(f"Error: {e}")
        return 2
    _progress(f"Seed: {cfg.seed}")

    if args.command == "run":
        return _run(args, cfg)
    return _demo(args, cfg)


def _run(args: argparse.Namespace, cfg) -> int:
    try:
        report = run_suite(args.suite, cfg)
    except MixtureError as e:
        _progress(f"Error: {e}")
        return _error_code(e)
    except (ValueError, RuntimeError) as e:
        _progress(f"Error: {e}")
        return 1

    _summarize(report, args.verbose)
    text = report.to_json(include_timing=args.timing)
    if args.out:
        _write_text(text, args.out)
        _progress(f"✓ Report saved to: {args.out}")
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def _demo(args: argparse.Namespace, cfg) -> int:
    try:
        table = run_demo(args.name, cfg)
    except MixtureError as e:
        _progress(f"Error: {e}")
        return _error_code(e)
    except (ValueError, RuntimeError) as e:
        _progress(f"Error: {e}")
        return 1

    output = args.out or Path(f"{table.name}.csv")
    try:
        write_csv(table, output)
    except OSError as e:
        _progress(f"Error: could not write '{output}': {e}")
        return 1
    _progress(f"✓ {table.name}: {len(table.rows)} rows saved to: {output}")
    return 0


def _validate(path: Path) -> int:
    try:
        cfg = load_config(path, require_seed=False)
    except ConfigError as e:
        print(f"✗ {path}: {e}")
        return 1
    print(f"✓ {path} is valid (seed: {cfg.seed})")
    return 0


if __name__ == "__main__":
    exit(main())
