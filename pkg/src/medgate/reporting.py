"""Deterministic CSV and metadata output for sweep results."""

from __future__ import annotations

import json
import os

import numpy as np

from . import __version__

FLOAT_FMT = "%.17g"


def _format_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return "nan"
        return FLOAT_FMT % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_format_cell(v) for v in row) + "\n")


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    return value


def write_metadata(path, cfg, summary, csv_name):
    """Sidecar with everything needed to re-run: config, seed, version."""
    meta = {
        "tool": "medgate",
        "version": __version__,
        "mode": cfg.mode,
        "seed": cfg.seed,
        "threads": cfg.threads,
        "config": {k: _jsonable(v) for k, v in sorted(cfg.values.items())},
        "config_sources": dict(sorted(cfg.sources.items())),
        "output_csv": csv_name,
        "summary": {k: _jsonable(v) for k, v in sorted(summary.items())},
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def output_paths(out_dir, mode):
    base = mode.replace("-", "_")
    return (os.path.join(out_dir, f"{base}.csv"),
            os.path.join(out_dir, f"{base}.meta.json"),
            os.path.join(out_dir, f"{base}.png"))
