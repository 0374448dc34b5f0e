"""Command line driver.

    simulate <mode> [--config FILE] [--set KEY=VALUE ...]
             [--out DIR] [--seed N] [--threads N] [--no-plot]

Exit codes: 0 success, 1 configuration error, 2 total numerical failure
(every grid point invalid). Config keys can also be overridden through
MEDGATE_<KEY> environment variables; --set wins over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import MODES, ConfigError, load_config, schema_for
from .reporting import output_paths, write_csv, write_metadata
from .sweeps import run_mode


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Three-spin mediated entangling gate simulator")
    parser.add_argument("mode", choices=MODES, help="sweep/report to run")
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="flat KEY = VALUE config file")
    parser.add_argument("--set", dest="overrides", metavar="KEY=VALUE",
                        action="append", default=[],
                        help="override one config key (repeatable)")
    parser.add_argument("--out", metavar="DIR", default=".",
                        help="output directory (created if missing)")
    parser.add_argument("--seed", type=int, default=0,
                        help="master seed for any sampling")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for grid points")
    parser.add_argument("--no-plot", action="store_true",
                        help="skip figure rendering")
    parser.add_argument("--list-keys", action="store_true",
                        help="print the mode's config keys and exit")
    return parser


def _print_keys(mode):
    for key in schema_for(mode).values():
        print(f"{key.name:18s} {key.kind:7s} default={key.default!r}  {key.help}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.list_keys:
        _print_keys(args.mode)
        return 0
    try:
        cfg = load_config(args.mode, path=args.config, overrides=args.overrides,
                          seed=args.seed, threads=args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    try:
        result = run_mode(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    os.makedirs(args.out, exist_ok=True)
    csv_path, meta_path, png_path = output_paths(args.out, cfg.mode)
    write_csv(csv_path, result.columns, result.rows)
    write_metadata(meta_path, cfg, result.summary, os.path.basename(csv_path))
    print(f"wrote {csv_path} ({len(result.rows)} rows, "
          f"{result.n_valid} valid)")

    if not args.no_plot:
        from . import plotting

        plotting.render(cfg.mode, result.columns, result.rows, result.summary,
                        png_path)
        print(f"wrote {png_path}")

    if result.rows and result.n_valid == 0:
        print("all grid points failed", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
