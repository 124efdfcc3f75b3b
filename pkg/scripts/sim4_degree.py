"""Test error as a function of the polynomial degree s.

Prints one row per degree with the mean error over repetitions, and the
argmin degree of every repetition on stderr.
"""

import argparse
import csv
import sys

import numpy as np

from fpc import NoiseSpec, evaluate, generate_test, generate_toy, train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--s-max", type=int, default=20)
    ap.add_argument("--m", type=int, default=1000)
    args = ap.parse_args()

    degrees = range(1, args.s_max + 1)
    errors = np.empty((args.reps, len(degrees)))
    for i in range(args.reps):
        tr = generate_toy(args.m, NoiseSpec.parse("global:0.1"), seed=[i, 1])
        te = generate_test(args.m, seed=[i, 2])
        errors[i] = [evaluate(train(tr, s, "firstn", seed=i), te).error for s in degrees]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["s", "n", "mean_test_error", "std"])
    for k, s in enumerate(degrees):
        out.writerow([s, (s + 1) * (s + 2) // 2, errors[:, k].mean(), errors[:, k].std()])
    print("argmin per run:", [int(np.argmin(row)) + 1 for row in errors], file=sys.stderr)


if __name__ == "__main__":
    main()
