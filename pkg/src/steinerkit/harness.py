"""Experiment harness: checkpointed contraction runs, finisher comparisons,
work counters, and quartile aggregation.

One exhaustive contraction pass per (instance, mode) records every round;
each checkpoint percentage replays a prefix of those rounds on a fresh copy
and runs every finisher on the result.  Quality is the solution weight
relative to a reference (best known if provided, else the best weight seen
for the instance in this run).  All output is deterministic; elapsed times
are recorded only when timing is requested."""
from __future__ import annotations

import csv
import io
import multiprocessing
import time
from dataclasses import dataclass

from .graph import Instance, WorkingGraph, finalize_solution
from .paths import WorkCounter
from .reductions import preprocessing
from .solve import FINISHERS
from .stars import apply_star_tree, contract_all_stars

MODES = ("basic", "improved")
DEFAULT_CHECKPOINTS = tuple(range(0, 101, 10))
SIZE_BUCKETS = tuple(str(s) for s in range(2, 10)) + ("10+",)

RECORD_FIELDS = (
    "instance", "mode", "checkpoint", "finisher", "weight", "quality",
    "visited_vertices", "ratios_recalculated", "elapsed_ms",
)


@dataclass(frozen=True)
class CheckpointRecord:
    instance: str
    mode: str
    checkpoint: int
    finisher: str
    weight: int
    quality: float
    visited_vertices: int
    ratios_recalculated: int
    elapsed_ms: int


def _size_bucket(size: int) -> str:
    return str(size) if size < 10 else "10+"


def _run_instance(args):
    name, inst, checkpoints, modes, finishers, timing = args
    g0 = WorkingGraph.from_instance(inst)
    preprocessing(g0)
    rows = []
    sizes = {mode: {b: 0 for b in SIZE_BUCKETS} for mode in modes}
    for mode in modes:
        g = g0.copy()
        counter = WorkCounter()
        rounds = contract_all_stars(g, mode=mode, tau=1,
                                    counter=counter, use_cache=True)
        for rec in rounds:
            sizes[mode][_size_bucket(len(rec.star.terminals))] += 1
        snapshots = [(0, 0)] + [(r.visited_after, r.recalculated_after)
                                for r in rounds]
        for pct in checkpoints:
            take = len(rounds) * pct // 100
            h = g0.copy()
            for rec in rounds[:take]:
                apply_star_tree(h, rec.tree_keys)
            visited, recalc = snapshots[take]
            for fin in finishers:
                started = time.perf_counter() if timing else None
                added = FINISHERS[fin](h)
                weight = finalize_solution(inst, h.bought | added).weight
                elapsed = (int(1000 * (time.perf_counter() - started))
                           if timing else 0)
                rows.append((name, mode, pct, fin, weight, visited, recalc,
                             elapsed))
    return rows, sizes


def run_experiment(instances, checkpoints=DEFAULT_CHECKPOINTS, modes=MODES,
                   finishers=tuple(FINISHERS), reference=None, timing=False,
                   jobs=1):
    """Run all instances; returns (records, star size counts per mode).

    ``instances`` is a list of (name, Instance); ``reference`` maps names to
    best-known weights and defaults to each instance's best weight in this
    run."""
    checkpoints = sorted(set(checkpoints))
    for pct in checkpoints:
        if not 0 <= pct <= 100:
            raise ValueError(f"checkpoint {pct} outside 0..100")
    args = [(name, inst, checkpoints, tuple(modes), tuple(finishers), timing)
            for name, inst in instances]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_run_instance, args)
    else:
        results = [_run_instance(a) for a in args]

    best: dict[str, int] = {}
    for rows, _sizes in results:
        for row in rows:
            name, weight = row[0], row[4]
            if name not in best or weight < best[name]:
                best[name] = weight
    if reference:
        best.update(reference)

    records = []
    sizes = {mode: {b: 0 for b in SIZE_BUCKETS} for mode in modes}
    for rows, inst_sizes in results:
        for name, mode, pct, fin, weight, visited, recalc, elapsed in rows:
            ref = best[name]
            quality = 100.0 if ref == 0 else 100.0 * weight / ref
            records.append(CheckpointRecord(name, mode, pct, fin, weight,
                                            quality, visited, recalc, elapsed))
        for mode in modes:
            for b in SIZE_BUCKETS:
                sizes[mode][b] += inst_sizes[mode][b]
    return records, sizes


def write_records_csv(records, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RECORD_FIELDS)
    for r in records:
        writer.writerow([r.instance, r.mode, r.checkpoint, r.finisher,
                         r.weight, f"{r.quality:.4f}", r.visited_vertices,
                         r.ratios_recalculated, r.elapsed_ms])


def write_star_sizes_csv(sizes, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["mode", "size", "count"])
    for mode in sizes:
        for bucket in SIZE_BUCKETS:
            writer.writerow([mode, bucket, sizes[mode][bucket]])


def read_records_csv(text: str):
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append(CheckpointRecord(
            row["instance"], row["mode"], int(row["checkpoint"]),
            row["finisher"], int(row["weight"]), float(row["quality"]),
            int(row["visited_vertices"]), int(row["ratios_recalculated"]),
            int(row["elapsed_ms"]),
        ))
    return records


def _quantile(xs: list[float], p: float) -> float:
    pos = p * (len(xs) - 1)
    i = int(pos)
    frac = pos - i
    if frac == 0 or i + 1 == len(xs):
        return xs[i]
    return xs[i] + frac * (xs[i + 1] - xs[i])


def aggregate(records):
    """Quality distribution per (mode, finisher, checkpoint).

    Returns rows (mode, finisher, checkpoint, min, q1, median, q3, max,
    mean), quartiles by linear interpolation."""
    groups: dict[tuple[str, str, int], list[float]] = {}
    order: list[tuple[str, str, int]] = []
    for r in records:
        key = (r.mode, r.finisher, r.checkpoint)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r.quality)
    rows = []
    for key in sorted(order):
        xs = sorted(groups[key])
        rows.append(key + (
            xs[0], _quantile(xs, 0.25), _quantile(xs, 0.5),
            _quantile(xs, 0.75), xs[-1], sum(xs) / len(xs),
        ))
    return rows


def write_summary_csv(rows, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["mode", "finisher", "checkpoint",
                     "min", "q1", "median", "q3", "max", "mean"])
    for mode, fin, pct, mn, q1, med, q3, mx, mean in rows:
        writer.writerow([mode, fin, pct] +
                        [f"{x:.4f}" for x in (mn, q1, med, q3, mx, mean)])
