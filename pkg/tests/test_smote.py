"""Class balancing: interpolation geometry and count contracts."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsmguard.ml import smote_balance


def test_balanced_input_passes_through():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    y = np.array([0, 0, 1, 1])
    Xb, yb = smote_balance(X, y, k=1, seed=0)
    assert np.array_equal(Xb, X)
    assert np.array_equal(yb, y)


def test_two_point_minority_synthetics_on_segment():
    X = np.array([[0.0, 0.0], [1.0, 1.0]] + [[10.0 + i, -5.0] for i in range(10)])
    y = np.array([1, 1] + [0] * 10)
    Xb, yb = smote_balance(X, y, k=1, seed=3)
    synth = Xb[len(Xb) - (sum(yb == 1) - 2) :][yb[len(yb) - (sum(yb == 1) - 2) :] == 1]
    new_points = Xb[np.flatnonzero(yb == 1)][2:]
    assert len(new_points) > 0
    for p in new_points:
        # On the segment between (0,0) and (1,1): both coords equal, in [0,1].
        assert p[0] == pytest.approx(p[1])
        assert 0.0 <= p[0] <= 1.0


def test_nine_to_one_becomes_balanced():
    rng = np.random.default_rng(0)
    X = rng.normal(0, 1, size=(100, 2))
    y = np.array([0] * 90 + [1] * 10)
    Xb, yb = smote_balance(X, y, k=3, seed=1)
    n0 = int(np.sum(yb == 0))
    n1 = int(np.sum(yb == 1))
    assert abs(n0 - n1) <= 1
    assert n0 == 50 and n1 == 50


def test_single_class_rejected():
    with pytest.raises(ValueError):
        smote_balance(np.zeros((4, 2)), np.array([1, 1, 1, 1]), k=1, seed=0)


def test_tiny_minority_rejected():
    X = np.zeros((5, 2))
    y = np.array([0, 0, 0, 0, 1])
    with pytest.raises(ValueError, match="at least 2"):
        smote_balance(X, y, k=1, seed=0)


def test_deterministic_per_seed():
    rng = np.random.default_rng(5)
    X = rng.normal(0, 1, size=(60, 2))
    y = np.array([0] * 50 + [1] * 10)
    a = smote_balance(X, y, k=2, seed=9)
    b = smote_balance(X, y, k=2, seed=9)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40), st.integers(2, 12), st.integers(0, 9999))
def test_no_synthetic_majority_and_balance_property(n_major, n_minor, seed):
    if n_minor >= n_major:
        n_major = n_minor + 1
    rng = np.random.default_rng(seed)
    X_maj = rng.normal(0, 1, size=(n_major, 2))
    X_min = rng.normal(50, 1, size=(n_minor, 2))  # far cluster
    X = np.vstack([X_maj, X_min])
    y = np.array([0] * n_major + [1] * n_minor)
    Xb, yb = smote_balance(X, y, k=3, seed=seed)
    n0 = int(np.sum(yb == 0))
    n1 = int(np.sum(yb == 1))
    assert abs(n0 - n1) <= 1
    # Every majority row existed in the input: no synthetic majority points.
    original = {tuple(row) for row in X_maj}
    for row in Xb[yb == 0]:
        assert tuple(row) in original
    # Minority synthetics stay in the minority cluster's convex range.
    assert np.all(Xb[yb == 1][:, 0] > 10)
