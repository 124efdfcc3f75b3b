"""Command-line front end: ``fpc <subcommand> [options]``.

Subcommands: simulate, train, select-degree, predict, evaluate, bench,
verify. Solver and split settings may also come from a JSON file given by
``--config``; explicit flags win over the file, the file wins over the
built-in defaults.

Exit codes::

    0  success
    1  verify found a failing check
    2  usage error (bad flag or parameter value)
    3  malformed input data (CSV format, labels, degree overflow, LP too large)
    4  empty dataset or split
    5  unreadable model file (magic, version, checksum)
    6  numerical breakdown (non-finite iterate, failed factorization)
    7  I/O error
    8  dimension mismatch
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench, verify
from .admm import AdmmParams
from .dataset import Dataset
from .errors import FpcError
from .features import CenterScheme
from .model import evaluate, select_degree, train
from .persistence import load_csv, read_model, write_csv, write_model, write_reports_csv
from .prox import hinge_scalar
from .synthetic import NoiseSpec, generate_test, generate_toy

log = logging.getLogger("fpc")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 7

DEFAULTS = {
    "alpha": 1.0,
    "beta": 1.0,
    "tol": 5e-4,
    "max_iters": 5,
    "scheme": "firstn",
    "seed": 0,
    "fractions": [0.5, 0.25, 0.25],
}


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, default=_jsonable))


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _setting(args, key):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return args.config_values.get(key, DEFAULTS[key])


def _params(args) -> AdmmParams:
    return AdmmParams(float(_setting(args, "alpha")), float(_setting(args, "beta")),
                      float(_setting(args, "tol")), int(_setting(args, "max_iters")))


def _int_list(text: str) -> list[int]:
    """``"9"``, ``"1,2,5"`` or an inclusive range ``"1:14"``."""
    out = []
    for part in text.split(","):
        if ":" in part:
            lo, hi = part.split(":")
            out.extend(range(int(lo), int(hi) + 1))
        elif part.strip():
            out.append(int(float(part)))
    if not out:
        raise argparse.ArgumentTypeError(f"empty list {text!r}")
    return out


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _balance(data: Dataset) -> dict:
    pos = int(np.sum(data.y > 0))
    return {"m": data.m, "positive": pos, "negative": data.m - pos}


# -- subcommands -------------------------------------------------------------

def cmd_simulate(args) -> int:
    seed = int(_setting(args, "seed"))
    noise = NoiseSpec.parse(args.noise)
    tr = generate_toy(args.m, noise, seed=[seed, 1])
    te = generate_test(args.mtest, seed=[seed, 2])
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(tr, out / "train.csv")
    write_csv(te, out / "test.csv")
    _emit({
        "train": {**_balance(tr), "flipped": int(len(tr.info["flipped"])),
                  "noise_level": tr.info["noise_level"], "path": str(out / "train.csv")},
        "test": {**_balance(te), "path": str(out / "test.csv")},
    })
    return EXIT_OK


def _load(args, path):
    return load_csv(path, remap01=args.remap01)


def cmd_train(args) -> int:
    data = _load(args, args.data)
    scheme = CenterScheme.parse(_setting(args, "scheme"))
    model = train(data, args.s, scheme, _params(args), seed=int(_setting(args, "seed")),
                  n=args.n, scale=not args.no_scale)
    write_model(model, args.model)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            model.trace.write_csv(fh)
    _emit({**model.meta, "model": str(args.model)})
    return EXIT_OK


def cmd_select_degree(args) -> int:
    data = _load(args, args.data)
    scheme = CenterScheme.parse(_setting(args, "scheme"))
    best, reports = select_degree(data, args.s_range, _params(args), scheme,
                                  seed=int(_setting(args, "seed")), n_grid=args.n_grid,
                                  fractions=tuple(_setting(args, "fractions")))
    if args.report:
        with open(args.report, "w", newline="") as fh:
            write_reports_csv(reports.values(), fh)
    _emit({"best_s": best, "validation": [rep.row() for rep in reports.values()]})
    return EXIT_OK


def cmd_predict(args) -> int:
    model = read_model(args.model)
    data = load_csv(args.data, remap01=args.remap01, labels=not args.no_labels)
    labels = model.predict(data.X)
    lines = "".join(f"{int(v)}\n" for v in labels)
    if args.out:
        Path(args.out).write_text(lines)
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = read_model(args.model)
    rep = evaluate(model, _load(args, args.data))
    row = rep.row()
    if args.format == "csv":
        write_reports_csv([row], sys.stdout)
    else:
        _emit({**row, "error": rep.error, "n_test": rep.n_test})
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench.run_bench(args.m, args.s, reps=args.reps, seed=int(_setting(args, "seed")),
                           noise=NoiseSpec.parse(args.noise), params=_params(args),
                           scheme=CenterScheme.parse(_setting(args, "scheme")),
                           m_test=args.mtest)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_bench_csv(rows, fh)
    else:
        bench.write_bench_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    prox = verify.broken_hinge if args.inject_fault == "prox" else hinge_scalar
    report = verify.run_suite(seed=int(_setting(args, "seed")), prox_samples=args.prox_samples,
                              mono_instances=args.mono_instances,
                              dual_instances=args.dual_instances, prox=prox)
    print(report.to_json())
    return EXIT_OK if report.passed else EXIT_VERIFY


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None,
                        help="cap BLAS threads (needs threadpoolctl)")
    common.add_argument("-v", "--verbose", action="store_true")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--alpha", type=float, default=None)
    solver.add_argument("--beta", type=float, default=None)
    solver.add_argument("--tol", type=float, default=None)
    solver.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    solver.add_argument("--scheme", default=None, help="firstn, uniform or subsample")
    solver.add_argument("--remap01", action="store_true", help="labels are 0/1")

    p = argparse.ArgumentParser(prog="fpc", description="Polynomial kernel classification by ADMM.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", parents=[common], help="write toy train/test CSVs")
    sp.add_argument("--m", type=int, default=1000)
    sp.add_argument("--mtest", type=int, default=1000)
    sp.add_argument("--noise", default="global:0.1", help="none | global:R | band:W:R | far:W:R")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("train", parents=[common, solver], help="train and save a model")
    sp.add_argument("--data", required=True)
    sp.add_argument("--s", type=int, required=True, help="polynomial degree")
    sp.add_argument("--n", type=int, default=None, help="number of centers")
    sp.add_argument("--model", required=True, help="output model file")
    sp.add_argument("--trace", default=None, help="write the iteration trace CSV here")
    sp.add_argument("--no-scale", action="store_true")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("select-degree", parents=[common, solver],
                        help="pick s by validation accuracy")
    sp.add_argument("--data", required=True)
    sp.add_argument("--s-range", type=_int_list, default=None, help="e.g. 1:14 (default 1..s_max)")
    sp.add_argument("--n-grid", type=_int_list, default=None)
    sp.add_argument("--fractions", type=_float_list, default=None)
    sp.add_argument("--report", default=None, help="write per-degree rows as CSV")
    sp.set_defaults(func=cmd_select_degree)

    sp = sub.add_parser("predict", parents=[common], help="label the rows of a CSV")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--no-labels", action="store_true", help="CSV has no label column")
    sp.add_argument("--remap01", action="store_true")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("evaluate", parents=[common], help="accuracy and timing row")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--remap01", action="store_true")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("bench", parents=[common, solver], help="train time versus m")
    sp.add_argument("--m", type=_int_list, default=[10000, 20000, 40000])
    sp.add_argument("--s", type=_int_list, default=[9])
    sp.add_argument("--reps", type=int, default=3)
    sp.add_argument("--mtest", type=int, default=1000)
    sp.add_argument("--noise", default="global:0.1")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    sp.add_argument("--prox-samples", type=int, default=10_000)
    sp.add_argument("--mono-instances", type=int, default=20)
    sp.add_argument("--dual-instances", type=int, default=5)
    sp.add_argument("--inject-fault", choices=["prox"], default=None, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)
    return p


def _read_config(path) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    unknown = set(cfg) - set(DEFAULTS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def _thread_limit(threads):
    if threads is None:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        log.warning("threadpoolctl not installed, --threads ignored")
        return contextlib.nullcontext()
    return threadpool_limits(limits=threads)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.config_values = _read_config(args.config)
        with _thread_limit(args.threads):
            return args.func(args)
    except FpcError as exc:
        print(f"fpc: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"fpc: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"fpc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
