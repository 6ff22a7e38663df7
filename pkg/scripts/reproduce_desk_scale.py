"""Run the complete desk-scale protocol into one work directory.

Builds the seeded synthetic corpus (500 pairs, 128 px), extracts both
the fixed-length and the native-resolution feature caches, then runs
the sample-size sweep, the frequency-band grid, per-class statistics,
and a grouped majority-vote evaluation.  Every stage goes through the
command-line interface, so the outputs match what a shell user gets.

Usage: python scripts/reproduce_desk_scale.py [--workdir DIR] [--seed N]
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from specfake.cli import main as specfake


def run(argv: list[str]) -> None:
    t0 = time.perf_counter()
    rc = specfake(argv)
    dt = time.perf_counter() - t0
    print(f"  -> rc={rc} in {dt:.1f}s\n")
    if rc != 0:
        sys.exit(rc)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--workdir", default="runs/desk_scale",
                    help="output directory (default runs/desk_scale)")
    ap.add_argument("--seed", default="42", help="seed for every stage")
    args = ap.parse_args()

    os.makedirs(args.workdir, exist_ok=True)
    os.chdir(args.workdir)
    seed = args.seed

    print("[1/7] synthetic corpus: 500 real/fake pairs at 128 px")
    run(["synth-generate", "--out", "corpus", "--count", "500",
         "--size", "128", "--cutoff", "0.35", "--seed", seed])

    print("[2/7] extract 300-bin profiles")
    run(["extract", "--manifest", "corpus/manifest.csv",
         "--out", "cache300.csv", "--target-len", "300", "--seed", seed])

    print("[3/7] extract native-resolution profiles (92 bins at 128 px)")
    run(["extract", "--manifest", "corpus/manifest.csv",
         "--out", "native.csv", "--target-len", "0", "--seed", seed])

    print("[4/7] accuracy vs. training-set size, all classifiers")
    run(["sweep", "--cache", "cache300.csv", "--out", "sweep.csv",
         "--sizes", "20,100,1000", "--classifiers", "lr,svm,kmeans",
         "--seed", seed])

    print("[5/7] frequency-band accuracy grid (28 cells, SVM)")
    run(["bands", "--cache", "native.csv", "--out", "bands.csv",
         "--classifier", "svm", "--seed", seed])

    print("[6/7] per-class profile statistics")
    run(["stats", "--cache", "cache300.csv", "--out", "stats.csv"])

    print("[7/7] grouped corpus and per-video majority vote")
    run(["synth-generate", "--out", "videos", "--count", "45",
         "--size", "128", "--frames-per-group", "9", "--seed", seed])
    run(["extract", "--manifest", "videos/manifest.csv",
         "--out", "video_cache.csv", "--target-len", "300", "--seed", seed])
    run(["train", "--cache", "video_cache.csv", "--model", "video_model.txt",
         "--classifier", "svm", "--seed", seed])
    run(["video-eval", "--cache", "video_cache.csv",
         "--model", "video_model.txt", "--out", "votes.csv"])

    print(f"done; results in {os.getcwd()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
