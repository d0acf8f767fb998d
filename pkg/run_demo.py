#!/usr/bin/env python3

import filecmp
import os
import shutil
import subprocess
import sys

DEMO_DIR = "demo_run"
YEARS = ["2007", "2008", "2009"]


def scitrade(*args):
    """Run one CLI command, echoing it first."""
    command = [sys.executable, "-m", "src.cli", *args]
    print("$ scitrade " + " ".join(args))
    result = subprocess.run(command, capture_output=True, text=True)
    if result.stdout:
        print(result.stdout.rstrip())
    if result.returncode != 0:
        print(result.stderr.rstrip())
        raise SystemExit(f"command failed with exit code {result.returncode}")
    return result


def run_pipeline(root, seed):
    data = os.path.join(root, "data")
    out = os.path.join(root, "out")
    year_args = [arg for year in YEARS for arg in ("--years", year)]
    archives = [os.path.join(out, f"matrix_{year}.csv") for year in YEARS]

    scitrade("--out", data, "synth", "--seed", str(seed), "--categories", "8", "--journals", "30",
             "--edges", "20000", "--model", "preferential", "--multi-assign", "0.1", "--growth", "0.05",
             *year_args)
    scitrade("--out", out, "build", "--edges", os.path.join(data, "edges.csv"),
             "--map", os.path.join(data, "categories.csv"),
             "--categories", os.path.join(data, "category_names.csv"))
    scitrade("--out", out, "metrics", archives[-1], "--publications", os.path.join(data, "publications.csv"))
    scitrade("--out", out, "dynamics", *archives, "--publications", os.path.join(data, "publications.csv"))
    scitrade("--out", out, "classify", archives[-1], *(a for h in archives[:-1] for a in ("--history", h)))
    indicators = os.path.join(out, f"indicators_{YEARS[-1]}.csv")
    scitrade("--out", out, "stats", indicators, "--column", "ratio", "--column", "self_dependence", "--bins", "10")
    scitrade("--out", out, "rank", indicators, "--column", "ratio", "--top-k", "5")
    return out


def csv_bodies_match(first, second):
    names = sorted(f for f in os.listdir(first) if f.endswith(".csv"))
    _, mismatch, errors = filecmp.cmpfiles(first, second, names, shallow=False)
    for name in mismatch + errors:
        print(f"differs: {name}")
    return not (mismatch or errors)


def run_demo(seed=7):
    """Run the synthetic pipeline twice and check the CSV reports are byte-identical."""
    shutil.rmtree(DEMO_DIR, ignore_errors=True)
    try:
        print("=== First run ===")
        first = run_pipeline(os.path.join(DEMO_DIR, "a"), seed)
        print("\n=== Second run (same seed) ===")
        second = run_pipeline(os.path.join(DEMO_DIR, "b"), seed)

        print("\n=== Determinism check ===")
        if csv_bodies_match(first, second):
            print("CSV reports are identical across runs")
        else:
            raise SystemExit("CSV reports differ between runs with the same seed")
    except KeyboardInterrupt:
        print("\nInterrupted")
    print(f"Reports are under {DEMO_DIR}/")


if __name__ == "__main__":
    run_demo(int(sys.argv[1]) if len(sys.argv) > 1 else 7)
