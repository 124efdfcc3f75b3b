import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fpc.synthetic import NoiseKind, NoiseSpec, bayes_h, bayes_labels, generate_test, generate_toy


@pytest.mark.parametrize("t,expected", [(0.5, 0.5), (0.0, 1.0), (0.25, 0.5859375), (1.0, 0.5)])
def test_bayes_h_values(t, expected):
    assert bayes_h(t) == expected


@pytest.mark.parametrize("t", [-0.1, 1.1, float("nan")])
def test_bayes_h_domain(t):
    with pytest.raises(ValueError):
        bayes_h(t)


@given(st.floats(0, 1))
def test_bayes_h_range(t):
    assert 0.5 <= bayes_h(t) <= 1.0


def test_clean_data():
    data = generate_toy(500, NoiseSpec.parse("none"), seed=1)
    assert len(data.info["flipped"]) == 0
    np.testing.assert_array_equal(data.y, bayes_labels(data.X))


def test_global_noise_exact_count():
    data = generate_toy(1000, NoiseSpec.parse("global:0.10"), seed=2)
    flipped = data.info["flipped"]
    assert len(flipped) == 100 and data.info["noise_level"] == 0.1
    clean = data.info["clean_labels"]
    assert np.sum(clean != data.y) == 100
    np.testing.assert_array_equal(np.flatnonzero(clean != data.y), flipped)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2000), st.floats(0, 1), st.integers(0, 2**31 - 1))
def test_flip_count_is_floor(m, r, seed):
    data = generate_toy(m, NoiseSpec(NoiseKind.GLOBAL_UNIFORM, r), seed=seed)
    assert len(data.info["flipped"]) == math.floor(m * r + 1e-9)


def test_band_noise_stays_in_band():
    data = generate_toy(2000, NoiseSpec.parse("band:0.05:0.5"), seed=3)
    X, idx = data.X, data.info["flipped"]
    assert len(idx) == math.floor(data.info["region_size"] * 0.5 + 1e-9) > 0
    assert np.all(np.abs(X[idx, 1] - bayes_h(X[idx, 0])) <= 0.05)


def test_far_noise_stays_outside_band():
    data = generate_toy(2000, NoiseSpec.parse("far:0.1:0.2"), seed=4)
    X, idx = data.X, data.info["flipped"]
    assert len(idx) > 0
    assert np.all(np.abs(X[idx, 1] - bayes_h(X[idx, 0])) > 0.1)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(NoiseKind.GLOBAL_UNIFORM, 1.5)
    with pytest.raises(ValueError):
        NoiseSpec(NoiseKind.BAND_NEAR_BAYES, 0.1)
    with pytest.raises(ValueError):
        NoiseSpec.parse("band:0.1")


def test_noise_seed_separates_flip_stream():
    a = generate_toy(300, NoiseSpec.parse("global:0.2", seed=5), seed=1)
    b = generate_toy(300, NoiseSpec.parse("global:0.2", seed=6), seed=1)
    np.testing.assert_array_equal(a.X, b.X)
    assert not np.array_equal(a.info["flipped"], b.info["flipped"])


def test_generation_deterministic():
    a = generate_toy(200, NoiseSpec.parse("global:0.1"), seed=[3, 1])
    b = generate_toy(200, NoiseSpec.parse("global:0.1"), seed=[3, 1])
    np.testing.assert_array_equal(a.X, b.X)
    np.testing.assert_array_equal(a.y, b.y)


def test_test_set_clean_and_balanced():
    te = generate_test(20_000, seed=7)
    np.testing.assert_array_equal(te.y, bayes_labels(te.X))
    area, _ = integrate.quad(lambda t: 1.0 - bayes_h(t), 0.0, 1.0, points=[0.5])
    p_hat = np.mean(te.y > 0)
    sigma = math.sqrt(area * (1 - area) / te.m)
    assert abs(p_hat - area) <= 3 * sigma


def test_test_set_size():
    assert generate_test(1000, seed=0).m == 1000
