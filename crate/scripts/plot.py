#!/usr/bin/env python3
"""Render figures from cutrank CSV output.

Usage: plot.py <dir> [--out <dir>]

Looks for grid_sweep.csv, sparse_sweep.csv, qaoa_sweep.csv, and bench.csv
in <dir> and writes one PNG per file found.
"""

import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_grid_sweep(rows, out):
    sides = [int(r["side"]) for r in rows]
    dev = [float(r["mean_deviation"]) for r in rows]
    plt.figure()
    plt.plot(sides, dev, marker="o")
    plt.xlabel("grid side n")
    plt.ylabel("mean deviation of best rank from n")
    plt.title("Grid sweep: distance from the known optimum")
    plt.grid(True, alpha=0.3)
    plt.savefig(out, dpi=150, bbox_inches="tight")


def plot_sparse_sweep(rows, out):
    ns = [int(r["n_vertices"]) for r in rows]
    init = [float(r["mean_initial_rank"]) for r in rows]
    best = [float(r["mean_best_rank"]) for r in rows]
    plt.figure()
    plt.plot(ns, init, marker="s", label="initial")
    plt.plot(ns, best, marker="o", label="after annealing")
    plt.xlabel("vertices")
    plt.ylabel("mean cut rank")
    plt.title("Sparse random graphs: annealed cut rank")
    plt.legend()
    plt.grid(True, alpha=0.3)
    plt.savefig(out, dpi=150, bbox_inches="tight")


def plot_qaoa_sweep(rows, out):
    plt.figure()
    by_steps = {}
    for r in rows:
        by_steps.setdefault(int(r["schedule_steps"]), []).append(r)
    for steps, group in sorted(by_steps.items()):
        terms = [int(r["num_terms"]) for r in group]
        mean = [float(r["mean_best_rank"]) for r in group]
        plt.plot(terms, mean, marker="o", label=f"{steps}-step schedule")
    plt.xlabel("Hamiltonian terms")
    plt.ylabel("mean best cut rank")
    plt.title("QAOA resource graphs: rank vs term count")
    plt.legend()
    plt.grid(True, alpha=0.3)
    plt.savefig(out, dpi=150, bbox_inches="tight")


def plot_bench(rows, out):
    plt.figure()
    by_backend = {}
    for r in rows:
        by_backend.setdefault(r["backend"], []).append(r)
    for backend, group in sorted(by_backend.items()):
        sides = [int(r["side"]) for r in group]
        ms = [float(r["median_wall_ms"]) for r in group]
        plt.semilogy(sides, ms, marker="o", label=backend)
    plt.xlabel("grid side n")
    plt.ylabel("median annealing wall time (ms)")
    plt.title("Incremental vs naive backend")
    plt.legend()
    plt.grid(True, which="both", alpha=0.3)
    plt.savefig(out, dpi=150, bbox_inches="tight")


PLOTS = {
    "grid_sweep.csv": plot_grid_sweep,
    "sparse_sweep.csv": plot_sparse_sweep,
    "qaoa_sweep.csv": plot_qaoa_sweep,
    "bench.csv": plot_bench,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dir", type=pathlib.Path, help="directory with CSV files")
    ap.add_argument("--out", type=pathlib.Path, default=None, help="output directory")
    args = ap.parse_args()
    out_dir = args.out or args.dir
    out_dir.mkdir(parents=True, exist_ok=True)

    rendered = 0
    for name, fn in PLOTS.items():
        path = args.dir / name
        if not path.exists():
            continue
        rows = read_csv(path)
        if not rows:
            continue
        target = out_dir / (path.stem + ".png")
        fn(rows, target)
        print(f"wrote {target}")
        rendered += 1
    if rendered == 0:
        print(f"no known CSV files found in {args.dir}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
