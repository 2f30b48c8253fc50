"""CSV emission and parsing for per-episode metrics and run summaries.

Floats are written with ``repr`` (shortest round-trip form), so reading a file
back reproduces the series exactly and equal inputs give identical bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

from jamshield.experiment import MOD_COLUMNS, MetricsRow, RunSummary

METRICS_HEADER = ("episode", "mean_reward", "jam_rate", "mean_power", "eps") + MOD_COLUMNS


def _fmt(x) -> str:
    return repr(float(x))


def write_metrics_csv(rows, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(METRICS_HEADER)
            for r in rows:
                w.writerow(
                    [r.episode, _fmt(r.mean_reward), _fmt(r.jam_rate), _fmt(r.mean_power), _fmt(r.eps)]
                    + [int(c) for c in r.mod_counts]
                )
    except OSError as exc:
        raise OSError(f"cannot write metrics CSV {path}: {exc}") from exc
    return path


def read_metrics_csv(path) -> list:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != METRICS_HEADER:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = []
        for rec in reader:
            rows.append(
                MetricsRow(
                    int(rec[0]),
                    float(rec[1]),
                    float(rec[2]),
                    float(rec[3]),
                    float(rec[4]),
                    tuple(int(c) for c in rec[5:]),
                )
            )
    return rows


SUMMARY_HEADER = ("preset", "seed", "episodes", "total_reward", "block_means", "wall_clock_s", "config_digest")


def write_summary_csv(summaries, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SUMMARY_HEADER)
            for s in summaries:
                w.writerow(
                    [
                        s.preset,
                        s.seed,
                        s.episodes,
                        _fmt(s.total_reward),
                        ";".join(_fmt(b) for b in s.block_means),
                        f"{s.wall_clock:.3f}",
                        s.config_digest,
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write summary CSV {path}: {exc}") from exc
    return path


def read_summary_csv(path) -> list:
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            blocks = [float(b) for b in rec["block_means"].split(";") if b]
            out.append(
                RunSummary(
                    rec["preset"],
                    int(rec["seed"]),
                    int(rec["episodes"]),
                    float(rec["total_reward"]),
                    blocks,
                    float(rec["wall_clock_s"]),
                    rec["config_digest"],
                )
            )
    return out
