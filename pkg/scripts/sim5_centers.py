"""Test error of the three center schemes for growing sample sizes.

For every m each scheme keeps the degree with the lowest mean test error.
"""

import argparse
import csv
import sys

import numpy as np

from fpc import NoiseSpec, evaluate, generate_test, generate_toy, train

SCHEMES = ("uniform", "firstn", "subsample")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ms", default="5000,10000,20000,50000")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--degrees", default="6,8,9,10,12,14")
    args = ap.parse_args()

    degrees = [int(s) for s in args.degrees.split(",")]
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["m", "scheme", "best_s", "test_error"])
    for m in (int(v) for v in args.ms.split(",")):
        errs = {k: np.zeros(len(degrees)) for k in SCHEMES}
        for i in range(args.reps):
            tr = generate_toy(m, NoiseSpec.parse("global:0.1"), seed=[i, 1])
            te = generate_test(1000, seed=[i, 2])
            for k in SCHEMES:
                errs[k] += [evaluate(train(tr, s, k, seed=i), te).error for s in degrees]
        for k in SCHEMES:
            mean = errs[k] / args.reps
            j = int(np.argmin(mean))
            out.writerow([m, k, degrees[j], mean[j]])


if __name__ == "__main__":
    main()
