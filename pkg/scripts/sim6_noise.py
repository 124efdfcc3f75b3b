"""Training and test error against the noise level for the three noise types."""

import argparse
import csv
import sys

import numpy as np

from fpc import AdmmParams, NoiseSpec, evaluate, generate_test, generate_toy, train


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--widths", default="0.05,0.1,0.2")
    ap.add_argument("--ratios", default="0.05,0.1,0.2,0.3,0.4")
    args = ap.parse_args()

    params = AdmmParams(1.0, 1.0, 5e-4, 1000)
    ratios = [float(r) for r in args.ratios.split(",")]
    specs = [f"global:{r}" for r in ratios]
    for w in args.widths.split(","):
        specs += [f"band:{w}:{r}" for r in ratios] + [f"far:{w}:{r}" for r in ratios]

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["noise", "noise_level", "train_error", "test_error"])
    for spec in specs:
        level, tr_err, te_err = [], [], []
        for i in range(args.reps):
            tr = generate_toy(1000, NoiseSpec.parse(spec), seed=[i, 1])
            te = generate_test(1000, seed=[i, 2])
            model = train(tr, 9, "firstn", params, seed=i)
            level.append(tr.info["noise_level"])
            tr_err.append(np.mean(model.predict(tr.X) != tr.y))
            te_err.append(evaluate(model, te).error)
        out.writerow([spec, np.mean(level), np.mean(tr_err), np.mean(te_err)])


if __name__ == "__main__":
    main()
