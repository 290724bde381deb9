"""Command line interface.

Subcommands: solve, preprocess, exact, rect, experiment, aggregate.  All
computation is deterministic; --seed is accepted for interface compatibility
and ignored."""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .exact import dreyfus_wagner
from .graph import GraphError, WorkingGraph, terminals_connected
from .harness import (
    DEFAULT_CHECKPOINTS, MODES, aggregate, read_records_csv, run_experiment,
    write_records_csv, write_star_sizes_csv, write_summary_csv,
)
from .reductions import preprocessing
from .solve import FINISHERS, run_meta
from .stp import hanan_grid_instance, parse_stp, write_solution, write_stp


def _load(path: str):
    return parse_stp(Path(path).read_text())


def _comma_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _comma_names(allowed, what):
    def parse(text: str) -> list[str]:
        names = [x for x in text.split(",") if x != ""]
        for name in names:
            if name not in allowed:
                raise argparse.ArgumentTypeError(
                    f"unknown {what} {name!r}; choose from {', '.join(allowed)}")
        return names
    return parse


def _contract_cap(text: str):
    if text == "inf":
        return "inf"
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--contract takes an integer >= 2 or 'inf'")
    if k < 2:
        raise argparse.ArgumentTypeError("--contract cap must be at least 2")
    return k


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="steinerkit",
                                  description="Steiner tree toolkit")
    top.add_argument("--seed", type=int, default=None,
                     help="accepted and ignored; runs are deterministic")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="approximate one instance")
    p.add_argument("file")
    p.add_argument("--method", required=True, choices=sorted(FINISHERS))
    p.add_argument("--contract", type=_contract_cap, default=None,
                   metavar="K|inf", help="contract best stars first, with "
                   "at most K terminals per star")
    p.add_argument("--mode", choices=MODES, default="basic")
    p.add_argument("--tau", type=int, default=1,
                   help="stop contracting at this many terminals")

    p = sub.add_parser("preprocess", help="reduce an instance")
    p.add_argument("file")

    p = sub.add_parser("exact", help="optimal tree for few terminals")
    p.add_argument("file")

    p = sub.add_parser("rect", help="grid instance from points (x y per line)")
    p.add_argument("file")

    p = sub.add_parser("experiment", help="checkpointed contraction runs")
    p.add_argument("files", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--checkpoints", type=_comma_ints,
                   default=list(DEFAULT_CHECKPOINTS))
    p.add_argument("--modes", type=_comma_names(MODES, "mode"),
                   default=list(MODES))
    p.add_argument("--finishers", type=_comma_names(FINISHERS, "finisher"),
                   default=list(FINISHERS))
    p.add_argument("--reference", help="CSV of instance,weight best knowns")
    p.add_argument("--timing", action="store_true",
                   help="record wall clock per finisher (breaks byte-for-byte "
                        "reproducibility)")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("aggregate", help="summarize an experiment directory")
    p.add_argument("dir")
    return top


def cmd_solve(args) -> int:
    inst = _load(args.file)
    sol, _stats = run_meta(
        inst, finisher=args.method,
        mode=args.mode,
        k=None if args.contract in (None, "inf") else args.contract,
        tau=args.tau,
        contract=args.contract is not None,
    )
    sys.stdout.write(write_solution(inst, sol))
    return 0


def cmd_preprocess(args) -> int:
    inst = _load(args.file)
    g = WorkingGraph.from_instance(inst)
    report = preprocessing(g)
    reduced, _remap = g.to_instance()
    sys.stdout.write(write_stp(reduced))
    for line in report.csv_rows():
        print(line, file=sys.stderr)
    print(f"# bought weight {g.bought_weight(inst)}; "
          f"removed {report.vertices_removed} vertices, "
          f"{report.edges_removed} edges; rounds {report.rounds}",
          file=sys.stderr)
    return 0


def cmd_exact(args) -> int:
    inst = _load(args.file)
    sol = dreyfus_wagner(inst)
    sys.stdout.write(write_solution(inst, sol))
    return 0


def cmd_rect(args) -> int:
    points = []
    for lineno, raw in enumerate(Path(args.file).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'x y'")
        try:
            points.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: coordinates must be integers")
    sys.stdout.write(write_stp(hanan_grid_instance(points)))
    return 0


def _read_reference(path: str) -> dict[str, int]:
    out: dict[str, int] = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            try:
                out[row[0]] = int(row[1])
            except (IndexError, ValueError):
                if not out:
                    continue  # header line
                raise GraphError(f"bad reference row: {row!r}")
    return out


def cmd_experiment(args) -> int:
    instances = []
    names = set()
    skipped = []
    for path in args.files:
        name = Path(path).stem
        if name in names:
            raise GraphError(f"duplicate instance name {name!r}")
        names.add(name)
        inst = _load(path)
        if not terminals_connected(inst):
            skipped.append(name)
            print(f"skipping {name}: terminals are not connected",
                  file=sys.stderr)
            continue
        instances.append((name, inst))
    reference = _read_reference(args.reference) if args.reference else None
    records, sizes = run_experiment(
        instances, checkpoints=args.checkpoints, modes=args.modes,
        finishers=args.finishers, reference=reference, timing=args.timing,
        jobs=args.jobs,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.csv", "w", newline="") as fh:
        write_records_csv(records, fh)
    with open(out / "star_sizes.csv", "w", newline="") as fh:
        write_star_sizes_csv(sizes, fh)
    return 1 if skipped else 0


def cmd_aggregate(args) -> int:
    records_path = Path(args.dir) / "records.csv"
    records = read_records_csv(records_path.read_text())
    rows = aggregate(records)
    with open(Path(args.dir) / "summary.csv", "w", newline="") as fh:
        write_summary_csv(rows, fh)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "preprocess": cmd_preprocess,
    "exact": cmd_exact,
    "rect": cmd_rect,
    "experiment": cmd_experiment,
    "aggregate": cmd_aggregate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
