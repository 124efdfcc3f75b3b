"""Test and training error as the proximal weight alpha or penalty beta varies.

    python scripts/sim23_alpha_beta.py --param alpha
    python scripts/sim23_alpha_beta.py --param beta
"""

import argparse
import csv
import sys

import numpy as np

from fpc import AdmmParams, NoiseSpec, evaluate, generate_test, generate_toy, train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--param", choices=["alpha", "beta"], default="alpha")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--max-iters", type=int, default=10_000)
    args = ap.parse_args()

    # alpha = 10^g for g in [-5, 1] step 0.5; beta = 10^g for g in [-2, 2] step 0.2
    grid = np.arange(-5, 1.01, 0.5) if args.param == "alpha" else np.arange(-2, 2.01, 0.2)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow([args.param, "iterations", "train_error", "test_error"])
    for g in grid:
        value = 10.0 ** g
        kw = {args.param: value}
        params = AdmmParams(tol=5e-4, max_iters=args.max_iters, **kw)
        its, tr_err, te_err = [], [], []
        for i in range(args.reps):
            tr = generate_toy(1000, NoiseSpec.parse("global:0.1"), seed=[i, 1])
            te = generate_test(1000, seed=[i, 2])
            model = train(tr, 9, "firstn", params, seed=i)
            its.append(model.meta["iterations"])
            tr_err.append(np.mean(model.predict(tr.X) != tr.y))
            te_err.append(evaluate(model, te).error)
        out.writerow([f"{value:.3g}", np.mean(its), np.mean(tr_err), np.mean(te_err)])


if __name__ == "__main__":
    main()
