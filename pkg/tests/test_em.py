"""Mixture-responsibility detector: M-step algebra, monotone likelihood,
responsibility thresholds, and seeded determinism."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsmguard.detectors import (
    EmConfig,
    EmDetector,
    SIGMA_FLOOR,
    attack_responsibility,
    fit_two_component_gmm,
    gmm_m_step,
)


def loglik(points, mu1, s1, mu2, s2, pi2):
    total = 0.0
    for x in points:
        a = pi2 * math.exp(-0.5 * ((x - mu2) / s2) ** 2) / (s2 * math.sqrt(2 * math.pi))
        b = (1 - pi2) * math.exp(-0.5 * ((x - mu1) / s1) ** 2) / (s1 * math.sqrt(2 * math.pi))
        total += math.log(a + b)
    return total


def test_m_step_hard_assignment_reduces_to_subgroup_means():
    points = [1.0, 3.0, 10.0, 14.0]
    resp = [0.0, 0.0, 1.0, 1.0]
    mu1, s1, mu2, s2, pi2 = gmm_m_step(points, resp)
    assert mu1 == pytest.approx(2.0)
    assert mu2 == pytest.approx(12.0)
    assert pi2 == pytest.approx(0.5)


def test_m_step_floors_degenerate_sigma():
    mu1, s1, mu2, s2, _ = gmm_m_step([5.0, 5.0, 9.0, 9.0], [0.0, 0.0, 1.0, 1.0])
    assert s1 == SIGMA_FLOOR
    assert s2 == SIGMA_FLOOR


def test_responsibility_at_attack_mean_with_far_components():
    # y exactly at the attack component's mean, equal sigmas, means far apart:
    # the attack component dominates regardless of the mixing weight.
    score = attack_responsibility(10.0, mu1=0.0, s1=1.0, mu2=10.0, s2=1.0, pi2=0.3)
    assert score > 0.5


def test_responsibility_extremes():
    assert attack_responsibility(0.0, 0.0, 1.0, 50.0, 1.0, 0.0) == 0.0
    assert attack_responsibility(0.0, 0.0, 1.0, 50.0, 1.0, 1.0) == 1.0


def test_em_loglik_never_decreases_on_random_sets():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(100):
        points = list(rng.normal(0, 1, 8)) + list(rng.normal(4, 2, 3))
        _, ll = fit_two_component_gmm(
            points, mu1=0.0, s1=1.0, mu2=3.0, s2=1.5, pi2=0.4
        )
        for a, b in zip(ll, ll[1:]):
            worst = min(worst, b - a)
    assert worst >= -1e-10


def test_em_recovers_separated_components():
    rng = np.random.default_rng(1)
    points = list(rng.normal(0.0, 0.5, 7)) + list(rng.normal(20.0, 0.5, 4))
    (mu1, s1, mu2, s2, pi2), _ = fit_two_component_gmm(
        points, mu1=0.0, s1=0.5, mu2=18.0, s2=1.0, pi2=0.4
    )
    assert mu1 == pytest.approx(np.mean(points[:7]), abs=1e-6)
    assert mu2 == pytest.approx(np.mean(points[7:]), abs=1e-6)
    assert pi2 == pytest.approx(4 / 11, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=12), st.integers(0, 10_000))
def test_em_loglik_monotone_property(values, seed):
    rng = np.random.default_rng(seed)
    points = [v + float(rng.normal(0, 0.01)) for v in values]
    _, ll = fit_two_component_gmm(points, mu1=-1.0, s1=1.0, mu2=1.0, s2=1.0, pi2=0.5)
    for a, b in zip(ll, ll[1:]):
        assert b - a >= -1e-10


class TestDetector:
    def test_warmup_buffers_ten_then_builds_anchors(self):
        det = EmDetector(EmConfig(seed=4))
        rng = np.random.default_rng(0)
        for i in range(10):
            d = det.observe(float(15.6 + rng.normal(0, 0.25)))
            assert not d.warmed_up
            assert not d.attack
            assert d.score == 0.0
        assert det.anchors is not None
        assert len(det.anchors) == 10
        # Three anchors come from the fixed attack component near 0.5; they
        # are far below the cruise-speed cluster.
        low = sorted(det.anchors)[:3]
        assert all(v < 10.0 for v in low)

    def test_clean_speed_scores_below_threshold(self):
        det = EmDetector(EmConfig(seed=4))
        rng = np.random.default_rng(0)
        for _ in range(10):
            det.observe(float(15.6 + rng.normal(0, 0.25)))
        d = det.observe(det.seed_mean)  # y equal to the warm-up mean
        assert d.warmed_up
        assert d.score < 0.01
        assert not d.attack
        # Independent check of the reported responsibility at converged theta.
        mu1, s1, mu2, s2, pi2 = det.theta
        a = pi2 * math.exp(-0.5 * ((det.seed_mean - mu2) / s2) ** 2) / s2
        b = (1 - pi2) * math.exp(-0.5 * ((det.seed_mean - mu1) / s1) ** 2) / s1
        assert d.score == pytest.approx(a / (a + b), abs=1e-12)

    def test_false_stop_speed_flagged(self):
        det = EmDetector(EmConfig(seed=4))
        rng = np.random.default_rng(0)
        for _ in range(10):
            det.observe(float(15.6 + rng.normal(0, 0.25)))
        d = det.observe(0.0)
        assert d.attack
        assert d.score > 0.5

    def test_deterministic_bit_for_bit(self):
        rng = np.random.default_rng(8)
        ys = [float(v) for v in 15.6 + rng.normal(0, 0.25, 60)]
        ys[40] = 0.0
        runs = []
        for _ in range(2):
            det = EmDetector(EmConfig(seed=123))
            runs.append([det.observe(y) for y in ys])
        assert runs[0] == runs[1]

    def test_seed_changes_anchors(self):
        streams = []
        for seed in (1, 2):
            det = EmDetector(EmConfig(seed=seed))
            for y in np.linspace(15.0, 16.0, 10):
                det.observe(float(y))
            streams.append(tuple(det.anchors))
        assert streams[0] != streams[1]

    def test_constant_warmup_survives_via_floor(self):
        det = EmDetector(EmConfig(seed=0))
        for _ in range(10):
            det.observe(5.0)
        d = det.observe(5.0)
        assert math.isfinite(d.score)

    def test_monotone_loglik_recorded_per_observation(self):
        det = EmDetector(EmConfig(seed=4))
        rng = np.random.default_rng(2)
        for y in 15.6 + rng.normal(0, 0.25, 30):
            det.observe(float(y))
            for a, b in zip(det.last_ll_history, det.last_ll_history[1:]):
                assert b - a >= -1e-10

    def test_non_finite_rejected(self):
        det = EmDetector(EmConfig())
        with pytest.raises(ValueError):
            det.observe(float("nan"))
