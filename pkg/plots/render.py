"""Render experiment-harness CSV files as figures.

Four figure kinds, one per harness artifact: quartile bands over checkpoints
(summary.csv), visited-vertex work curves (records.csv), quality versus work
(records.csv), and star-size histograms (star_sizes.csv).  The script only
draws numbers it reads; every statistic comes from the CSV itself.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("bands", "work", "quality-vs-work", "histogram")

REQUIRED = {
    "bands": ("mode", "finisher", "checkpoint", "min", "q1", "median", "q3",
              "max"),
    "work": ("instance", "mode", "checkpoint", "visited_vertices"),
    "quality-vs-work": ("instance", "mode", "finisher", "checkpoint",
                        "quality", "visited_vertices"),
    "histogram": ("mode", "size", "count"),
}


class RenderError(Exception):
    pass


def load_rows(path: str, kind: str) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise RenderError(str(exc))
    if not rows:
        raise RenderError(f"{path}: no data rows")
    missing = [c for c in REQUIRED[kind] if c not in rows[0]]
    if missing:
        raise RenderError(f"{path}: missing columns: {', '.join(missing)}")
    return rows


def grouped(rows: list[dict], *cols: str) -> dict[tuple, list[dict]]:
    """Rows per distinct key, keys in first-seen order."""
    out: dict[tuple, list[dict]] = {}
    for row in rows:
        out.setdefault(tuple(row[c] for c in cols), []).append(row)
    return out


def _axes_grid(count: int):
    fig, axes = plt.subplots(count, 1, squeeze=False,
                             figsize=(6.4, 2.6 * count))
    return fig, [ax for row in axes for ax in row]


def build_bands(rows: list[dict]):
    """Per (mode, finisher): min/max whiskers, q1..q3 box, median line."""
    groups = grouped(rows, "mode", "finisher")
    fig, axes = _axes_grid(len(groups))
    for ax, ((mode, fin), rs) in zip(axes, groups.items()):
        rs = sorted(rs, key=lambda r: int(r["checkpoint"]))
        xs = [int(r["checkpoint"]) for r in rs]
        for col, style in (("max", "k-"), ("min", "k-")):
            ax.plot(xs, [float(r[col]) for r in rs], style, linewidth=0.8)
        ax.fill_between(xs, [float(r["q1"]) for r in rs],
                        [float(r["q3"]) for r in rs], alpha=0.3)
        ax.plot(xs, [float(r["median"]) for r in rs], linewidth=1.6)
        ax.set_title(f"{mode} / {fin}")
        ax.set_xlabel("contraction checkpoint (%)")
        ax.set_ylabel("quality (% of reference)")
    fig.tight_layout()
    return fig


def build_work(rows: list[dict]):
    """Visited vertices per checkpoint, one curve per instance and mode."""
    modes = grouped(rows, "mode")
    fig, axes = _axes_grid(len(modes))
    for ax, ((mode,), rs) in zip(axes, modes.items()):
        for (_instance,), curve in grouped(rs, "instance").items():
            seen: dict[int, int] = {}
            for r in curve:  # finishers share the counter; keep one value
                seen.setdefault(int(r["checkpoint"]),
                                int(r["visited_vertices"]))
            xs = sorted(seen)
            ax.plot(xs, [seen[x] for x in xs], linewidth=0.9)
        ax.set_title(mode)
        ax.set_xlabel("contraction checkpoint (%)")
        ax.set_ylabel("visited vertices")
    fig.tight_layout()
    return fig


def build_quality_vs_work(rows: list[dict]):
    """Quality against visited vertices, one curve per instance/mode/finisher."""
    modes = grouped(rows, "mode")
    fig, axes = _axes_grid(len(modes))
    for ax, ((mode,), rs) in zip(axes, modes.items()):
        for _key, curve in grouped(rs, "instance", "finisher").items():
            curve = sorted(curve, key=lambda r: int(r["checkpoint"]))
            ax.plot([int(r["visited_vertices"]) for r in curve],
                    [float(r["quality"]) for r in curve],
                    marker=".", linewidth=0.9)
        ax.set_title(mode)
        ax.set_xlabel("visited vertices")
        ax.set_ylabel("quality (% of reference)")
    fig.tight_layout()
    return fig


def build_histogram(rows: list[dict]):
    """Contracted-star size counts as grouped bars, one group color per mode."""
    sizes = list(dict.fromkeys(r["size"] for r in rows))
    modes = grouped(rows, "mode")
    fig, axes = _axes_grid(1)
    ax = axes[0]
    width = 0.8 / len(modes)
    for i, ((mode,), rs) in enumerate(modes.items()):
        counts = {r["size"]: int(r["count"]) for r in rs}
        xs = [j + i * width for j in range(len(sizes))]
        ax.bar(xs, [counts.get(s, 0) for s in sizes], width=width, label=mode)
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(sizes))])
    ax.set_xticklabels(sizes)
    ax.set_xlabel("star size (terminals)")
    ax.set_ylabel("contractions")
    ax.legend()
    fig.tight_layout()
    return fig


BUILDERS = {
    "bands": build_bands,
    "work": build_work,
    "quality-vs-work": build_quality_vs_work,
    "histogram": build_histogram,
}


def build_figure(kind: str, rows: list[dict]):
    return BUILDERS[kind](rows)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="draw figures from harness CSV files")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="infile", required=True,
                        help="records.csv, summary.csv, or star_sizes.csv")
    parser.add_argument("--out", required=True, help="image file to write")
    args = parser.parse_args(argv)
    try:
        rows = load_rows(args.infile, args.kind)
        fig = BUILDERS[args.kind](rows)
        fig.savefig(args.out)
        plt.close(fig)
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
