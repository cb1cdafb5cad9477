"""Command-line interface: run, sweep and validate experiment configs.

Exit codes: 0 on success, 2 on configuration errors, 1 on runtime failures.
``LLOYDLAB_OUTPUT_DIR`` overrides the config's output directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .experiments import ConfigError, load_config, run_experiment, sweep

OUTPUT_DIR_ENV = "LLOYDLAB_OUTPUT_DIR"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lloydlab",
        description="Clustering-under-perturbation simulation harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment config")
    run_p.add_argument("config", help="YAML experiment config")
    run_p.add_argument("--output-dir", default=None, help="override output directory")
    fig = run_p.add_mutually_exclusive_group()
    fig.add_argument("--figures", dest="figures", action="store_true", default=True,
                     help="render report figures (default)")
    fig.add_argument("--no-figures", dest="figures", action="store_false")

    sweep_p = sub.add_parser("sweep", help="run a config across parameter values")
    sweep_p.add_argument("config", help="YAML experiment config template")
    sweep_p.add_argument("--param", required=True, help="numeric params field to sweep")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated numeric values, e.g. 1,3,5,10")
    sweep_p.add_argument("--output-dir", default=None)
    fig2 = sweep_p.add_mutually_exclusive_group()
    fig2.add_argument("--figures", dest="figures", action="store_true", default=True)
    fig2.add_argument("--no-figures", dest="figures", action="store_false")

    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("config")
    return parser


def _resolve_output_dir(cli_value: str | None) -> Path | None:
    if cli_value:
        return Path(cli_value)
    env = os.environ.get(OUTPUT_DIR_ENV)
    return Path(env) if env else None


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"--values must be a comma-separated number list, got {text!r}")


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "validate":
            print(f"ok: {config.kind} x {config.replicates} replicates (seed {config.seed})")
            return 0
        out = _resolve_output_dir(args.output_dir)
        if args.command == "run":
            _, summary = run_experiment(config, figures=args.figures, output_dir=out)
            print(summary, end="")
            return 0
        values = _parse_values(args.values)
        sweep(config, args.param, values, figures=args.figures, output_dir=out)
        dest = out if out is not None else config.output_dir
        print(f"sweep complete: {len(values)} values -> {dest}")
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
