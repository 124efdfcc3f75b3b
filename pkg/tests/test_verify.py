import json

import numpy as np

from fpc.verify import (broken_hinge, check_duality, check_monotonicity, check_prox_oracle,
                        random_instance, run_suite)


def test_random_instance_bounds():
    rng = np.random.default_rng(0)
    for _ in range(20):
        X, y, centers, s = random_instance(rng, n_min=3)
        assert 20 <= len(y) <= 200 and 3 <= centers.n <= 20
        assert set(np.unique(y)) == {-1.0, 1.0}


def test_small_suite_passes():
    report = run_suite(seed=1, prox_samples=300, mono_instances=4, dual_instances=2)
    assert report.passed
    names = [c.name for c in report.checks]
    assert names == ["prox_oracle", "monotonicity", "duality_gap", "kkt"]
    assert json.loads(report.to_json())["passed"] is True


def test_fault_injection_caught():
    res = check_prox_oracle(500, seed=0, prox=broken_hinge)
    assert not res.passed and res.detail["violations"] > 0


def test_monotonicity_detail():
    res = check_monotonicity(instances=3, iters=50, seed=5)
    assert res.passed and res.detail["min_iterations"] == 50


def test_duality_reports_gap():
    gap, kkt = check_duality(instances=1, seed=0)
    assert gap.detail["max_gap"] < 1e-6 and kkt.passed
