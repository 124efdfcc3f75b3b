import json

import numpy as np
import pytest

from fpc.cli import main
from fpc.persistence import load_csv


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def sim(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--m", 1000, "--mtest", 1000, "--noise", "global:0.10",
                       "--seed", 7, "--out-dir", tmp_path / "d")
    assert code == 0
    return tmp_path / "d", json.loads(out)


def test_simulate(sim):
    d, info = sim
    assert info["train"]["flipped"] == 100
    assert info["train"]["positive"] + info["train"]["negative"] == 1000
    assert load_csv(d / "test.csv").m == 1000


def test_simulate_deterministic_and_clean(tmp_path, capsys):
    for sub in ("a", "b"):
        run(capsys, "simulate", "--m", 200, "--mtest", 50, "--noise", "none", "--seed", 3,
            "--out-dir", tmp_path / sub)
    for name in ("train.csv", "test.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    code, out, _ = run(capsys, "simulate", "--m", 200, "--noise", "global:0", "--seed", 3,
                       "--out-dir", tmp_path / "c")
    assert json.loads(out)["train"]["flipped"] == 0


def test_train_evaluate_predict(sim, tmp_path, capsys):
    d, _ = sim
    model, trace = tmp_path / "m.fpc", tmp_path / "trace.csv"
    code, out, _ = run(capsys, "train", "--data", d / "train.csv", "--s", 9, "--model", model,
                       "--trace", trace)
    assert code == 0
    meta = json.loads(out)
    assert meta["n"] == 55 and meta["iterations"] <= 5
    assert trace.read_text().splitlines()[0] == "iter,objective,h_step_sq,primal_residual"

    code, out, _ = run(capsys, "evaluate", "--model", model, "--data", d / "test.csv")
    row = json.loads(out)
    assert code == 0 and set(row) >= {"TestAcc", "TrainTime", "TestTime", "sparsity"}
    assert row["TestAcc"] >= 97.0

    code, out, _ = run(capsys, "evaluate", "--model", model, "--data", d / "test.csv",
                       "--format", "csv")
    assert out.splitlines()[0] == "s,TestAcc,TrainTime,TestTime,sparsity"

    preds = tmp_path / "p.txt"
    code, _, _ = run(capsys, "predict", "--model", model, "--data", d / "test.csv", "--out", preds)
    labels = np.array(preds.read_text().split(), dtype=int)
    assert code == 0 and labels.shape == (1000,) and set(labels) <= {-1, 1}


def test_tight_model_training_error_near_noise(sim, tmp_path, capsys):
    d, _ = sim
    model = tmp_path / "m.fpc"
    run(capsys, "train", "--data", d / "train.csv", "--s", 9, "--model", model,
        "--max-iters", 1000)
    preds = tmp_path / "p.txt"
    run(capsys, "predict", "--model", model, "--data", d / "train.csv", "--out", preds)
    y = load_csv(d / "train.csv").y
    err = np.mean(np.array(preds.read_text().split(), dtype=float) != y)
    assert abs(err - 0.10) <= 0.02


def test_config_precedence(sim, tmp_path, capsys):
    d, _ = sim
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_iters": 1, "alpha": 2.0}))
    _, out, _ = run(capsys, "train", "--data", d / "train.csv", "--s", 3, "--model",
                    tmp_path / "m", "--config", cfg)
    meta = json.loads(out)
    assert meta["max_iters"] == 1 and meta["alpha"] == 2.0 and meta["beta"] == 1.0
    _, out, _ = run(capsys, "train", "--data", d / "train.csv", "--s", 3, "--model",
                    tmp_path / "m", "--config", cfg, "--max-iters", 4)
    assert json.loads(out)["max_iters"] == 4


def test_select_degree(sim, tmp_path, capsys):
    d, _ = sim
    report = tmp_path / "r.csv"
    code, out, _ = run(capsys, "select-degree", "--data", d / "train.csv", "--s-range", "1:4",
                       "--report", report)
    res = json.loads(out)
    assert code == 0 and 1 <= res["best_s"] <= 4 and len(res["validation"]) == 4
    assert len(report.read_text().splitlines()) == 5


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--m", "500,1000", "--s", "3", "--reps", 1, "--mtest", 200)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "m,s,n,rep,train_time,iterations,test_acc"
    assert len(lines) == 3
    _, again, _ = run(capsys, "bench", "--m", "500,1000", "--s", "3", "--reps", 1, "--mtest", 200)
    acc = lambda text: [row.split(",")[-1] for row in text.splitlines()]
    assert acc(out) == acc(again)


def test_verify_exit_codes(capsys):
    small = ["--prox-samples", 300, "--mono-instances", 3, "--dual-instances", 1]
    code, out, _ = run(capsys, "verify", *small)
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, _ = run(capsys, "verify", *small, "--inject-fault", "prox")
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]
    assert [c["passed"] for c in rep["checks"] if c["name"] == "prox_oracle"] == [False]


def test_error_exit_codes(sim, tmp_path, capsys):
    d, _ = sim
    empty = tmp_path / "e.csv"
    empty.write_text("x1,x2,y\n")
    model = tmp_path / "m.fpc"
    run(capsys, "train", "--data", d / "train.csv", "--s", 2, "--model", model)

    assert run(capsys, "evaluate", "--model", model, "--data", empty)[0] == 4
    bad_labels = tmp_path / "b.csv"
    bad_labels.write_text("0.1,0.2,5\n")
    assert run(capsys, "train", "--data", bad_labels, "--s", 2, "--model", model)[0] == 3
    corrupt = tmp_path / "c.fpc"
    corrupt.write_bytes(model.read_bytes()[:-3])
    assert run(capsys, "evaluate", "--model", corrupt, "--data", d / "test.csv")[0] == 5
    assert run(capsys, "evaluate", "--model", tmp_path / "missing", "--data", empty)[0] == 7
    wide = tmp_path / "w.csv"
    wide.write_text("0.1,0.2,0.3,1\n")
    assert run(capsys, "evaluate", "--model", model, "--data", wide)[0] == 8
    assert run(capsys, "train", "--data", d / "train.csv", "--s", 2, "--model", model,
               "--alpha", -1)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["train", "--s", "2"])
    assert exc.value.code == 2
