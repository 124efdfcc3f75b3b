"""Iterations and test error against the stopping tolerance on the toy problem.

    python scripts/sim1_tolerance.py --reps 5 > tol.csv
"""

import argparse
import csv
import sys

import numpy as np

from fpc import AdmmParams, NoiseSpec, evaluate, generate_test, generate_toy, train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--m", type=int, default=1000)
    ap.add_argument("--tols", default="6.3e-4,5e-4,1e-4,5e-5,1e-5")
    ap.add_argument("--max-iters", type=int, default=100_000)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["tol", "iterations", "train_error", "test_error"])
    for tol in (float(t) for t in args.tols.split(",")):
        its, tr_err, te_err = [], [], []
        for i in range(args.reps):
            tr = generate_toy(args.m, NoiseSpec.parse("global:0.1"), seed=[i, 1])
            te = generate_test(args.m, seed=[i, 2])
            model = train(tr, 9, "firstn", AdmmParams(tol=tol, max_iters=args.max_iters), seed=i)
            its.append(model.meta["iterations"])
            tr_err.append(np.mean(model.predict(tr.X) != tr.y))
            te_err.append(evaluate(model, te).error)
        out.writerow([tol, np.mean(its), np.mean(tr_err), np.mean(te_err)])


if __name__ == "__main__":
    main()
