"""Online change-point detectors for scalar feature streams.

Three sequential state machines share one interface: ``observe(y)`` consumes
one value and returns a DetectorDecision. Each instance owns its state and
must not receive concurrent observe calls; independent instances are safe to
run on separate streams.

Score semantics differ per detector:

* bocpd:  posterior-predictive density of y (LOW means suspicious),
* em:     responsibility of the attack mixture component (high suspicious),
* cusum:  max of the one-sided control statistics (high suspicious).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DetectorDecision",
    "BocpdConfig",
    "EmConfig",
    "CusumConfig",
    "BocpdDetector",
    "EmDetector",
    "CusumDetector",
    "student_t_logpdf",
    "fit_two_component_gmm",
    "gmm_m_step",
    "attack_responsibility",
    "make_detector",
    "DETECTOR_NAMES",
]

#: Lower bound on every estimated standard deviation inside the detectors,
#: so constant warm-up windows stay finite.
SIGMA_FLOOR = 1e-8


@dataclass(frozen=True)
class DetectorDecision:
    """Per-sample verdict: flag, continuous score, and warm-up marker."""

    attack: bool
    score: float
    warmed_up: bool


def _require_finite(y: float) -> float:
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"observation must be finite, got {y!r}")
    return y


def student_t_logpdf(y: float, df: float, mean: float, scale: float) -> float:
    """Log density of the location-scale Student-t distribution.

    ``scale`` is the scale parameter sigma (not its square); the Bayesian
    detector passes sqrt(beta*(kappa+1)/(alpha*kappa)).
    """
    if not (df > 0) or not math.isfinite(df):
        raise ValueError(f"df must be positive and finite, got {df!r}")
    if not (scale > 0) or not math.isfinite(scale):
        raise ValueError(f"scale must be positive and finite, got {scale!r}")
    z = (float(y) - float(mean)) / scale
    return (
        math.lgamma((df + 1.0) / 2.0)
        - math.lgamma(df / 2.0)
        - 0.5 * math.log(df * math.pi)
        - math.log(scale)
        - (df + 1.0) / 2.0 * math.log1p(z * z / df)
    )


# ---------------------------------------------------------------------------
# Bayesian online change-point detector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BocpdConfig:
    """Normal-Inverse-Gamma prior, hazard rate, and alarm threshold."""

    hazard: float = 0.01  # per-interval change probability (mean run 100)
    mu0: float = 0.0
    kappa: float = 0.1
    alpha: float = 1e-5
    beta: float = 1e-5
    threshold: float = 0.0002  # alarm when predictive density drops below
    warmup: int = 10  # updates consumed before alarms may fire

    def validate(self) -> None:
        if not (0.0 < self.hazard < 1.0):
            raise ValueError(f"hazard must be in (0, 1), got {self.hazard}")
        if self.kappa <= 0 or self.alpha <= 0 or self.beta <= 0:
            raise ValueError("kappa, alpha and beta must all be positive")
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.warmup < 0:
            raise ValueError("warmup must be non-negative")


class BocpdDetector:
    """Single-trajectory Bayesian online change-point detector.

    Maintains one Normal-Inverse-Gamma posterior over the current run's mean
    and variance. Each observation is scored by its posterior-predictive
    Student-t density; a density below the threshold is declared an attack,
    which resets the run (length 1, running mean re-anchored to y) and leaves
    the hyperparameters untouched. Otherwise the conjugate updates advance:

        beta  += kappa * (y - mu)^2 / (2 * (kappa + 1))
        mu     = (kappa * mu + y) / (kappa + 1)
        kappa += 1
        alpha += 1/2

    The full run-length-distribution variant lives only in the test suite as
    an oracle; this product path is O(1) per observation.
    """

    def __init__(self, config: BocpdConfig | None = None):
        self.config = config or BocpdConfig()
        self.config.validate()
        self.mu = self.config.mu0
        self.kappa = self.config.kappa
        self.alpha = self.config.alpha
        self.beta = self.config.beta
        self.run_length = 0
        self.run_mean = self.config.mu0
        self.observed = 0

    def predictive_logpdf(self, y: float) -> float:
        """Log predictive density of y under the current posterior."""
        scale = math.sqrt(self.beta * (self.kappa + 1.0) / (self.alpha * self.kappa))
        return student_t_logpdf(y, df=2.0 * self.alpha, mean=self.mu, scale=scale)

    def observe(self, y: float) -> DetectorDecision:
        y = _require_finite(y)
        p = math.exp(self.predictive_logpdf(y))
        warmed = self.observed >= self.config.warmup
        if warmed and p < self.config.threshold:
            # Change point: restart the run at this observation. The posterior
            # keeps accumulating only in-control data, so a sustained false
            # regime stays suspicious for its whole duration.
            self.run_length = 1
            self.run_mean = y
            attack = True
        else:
            self.beta += self.kappa * (y - self.mu) ** 2 / (2.0 * (self.kappa + 1.0))
            self.mu = (self.kappa * self.mu + y) / (self.kappa + 1.0)
            self.kappa += 1.0
            self.alpha += 0.5
            self.run_mean = (self.run_length * self.run_mean + y) / (self.run_length + 1)
            self.run_length += 1
            attack = False
        self.observed += 1
        return DetectorDecision(attack=attack, score=p, warmed_up=warmed)


# ---------------------------------------------------------------------------
# Mixture-responsibility detector (per-observation EM on a seeded anchor set)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmConfig:
    """Anchor-set construction and the responsibility alarm threshold."""

    threshold: float = 0.01
    seed: int = 0
    warmup: int = 10  # observations buffered to seed the anchor set
    clean_anchors: int = 7
    attack_anchors: int = 3
    attack_mean: float = 0.5
    attack_stdev: float = 1.0
    init_weight: float = 0.80  # initial mixing proportion of the attack component
    tol: float = 1e-8
    max_iter: int = 200

    def validate(self) -> None:
        if self.threshold < 0:
            raise ValueError("threshold must be non-negative")
        if self.warmup < 2:
            raise ValueError("warmup must be at least 2")
        if self.clean_anchors < 1 or self.attack_anchors < 1:
            raise ValueError("both anchor groups need at least one point")
        if not (0.0 < self.init_weight < 1.0):
            raise ValueError("init_weight must be in (0, 1)")


def _norm_logpdf(x: float, mu: float, sigma: float) -> float:
    z = (x - mu) / sigma
    return -0.5 * z * z - math.log(sigma) - 0.9189385332046727  # log sqrt(2 pi)


def attack_responsibility(
    y: float, mu1: float, s1: float, mu2: float, s2: float, pi2: float
) -> float:
    """Posterior probability that y came from the attack component (index 2)."""
    la = math.log(pi2) + _norm_logpdf(y, mu2, s2) if pi2 > 0 else -math.inf
    lb = math.log(1.0 - pi2) + _norm_logpdf(y, mu1, s1) if pi2 < 1 else -math.inf
    if la == -math.inf:
        return 0.0
    if lb == -math.inf:
        return 1.0
    m = max(la, lb)
    ea = math.exp(la - m)
    eb = math.exp(lb - m)
    return ea / (ea + eb)


def gmm_m_step(
    points: list[float], resp: list[float]
) -> tuple[float, float, float, float, float]:
    """Weighted MLE of both Gaussian components given attack responsibilities.

    Returns (mu1, s1, mu2, s2, pi2) with both stdevs floored at SIGMA_FLOOR.
    The mixing proportion is the mean responsibility.
    """
    n = len(points)
    w2 = math.fsum(resp)
    w1 = n - w2
    if w2 <= 0.0 or w1 <= 0.0:
        raise ValueError("degenerate responsibilities: one component owns nothing")
    mu2 = math.fsum(r * x for r, x in zip(resp, points)) / w2
    mu1 = math.fsum((1.0 - r) * x for r, x in zip(resp, points)) / w1
    var2 = math.fsum(r * (x - mu2) ** 2 for r, x in zip(resp, points)) / w2
    var1 = math.fsum((1.0 - r) * (x - mu1) ** 2 for r, x in zip(resp, points)) / w1
    s1 = max(math.sqrt(var1), SIGMA_FLOOR)
    s2 = max(math.sqrt(var2), SIGMA_FLOOR)
    return mu1, s1, mu2, s2, w2 / n


def _gmm_loglik(
    points: list[float], mu1: float, s1: float, mu2: float, s2: float, pi2: float
) -> float:
    total = 0.0
    for x in points:
        la = math.log(pi2) + _norm_logpdf(x, mu2, s2) if pi2 > 0 else -math.inf
        lb = math.log(1.0 - pi2) + _norm_logpdf(x, mu1, s1) if pi2 < 1 else -math.inf
        m = max(la, lb)
        total += m + math.log(math.exp(la - m) + math.exp(lb - m))
    return total


def fit_two_component_gmm(
    points: list[float],
    mu1: float,
    s1: float,
    mu2: float,
    s2: float,
    pi2: float,
    tol: float = 1e-8,
    max_iter: int = 200,
) -> tuple[tuple[float, float, float, float, float], list[float]]:
    """EM for a two-component Gaussian mixture on a small point set.

    Runs until the largest parameter change drops below ``tol`` or
    ``max_iter`` iterations. Returns the fitted (mu1, s1, mu2, s2, pi2) and
    the log-likelihood after each M-step (a non-decreasing sequence, which
    the tests assert).
    """
    s1 = max(s1, SIGMA_FLOOR)
    s2 = max(s2, SIGMA_FLOOR)
    ll_history: list[float] = []
    for _ in range(max_iter):
        resp = [attack_responsibility(x, mu1, s1, mu2, s2, pi2) for x in points]
        try:
            new = gmm_m_step(points, resp)
        except ValueError:
            break  # one component vanished; keep the last stable fit
        delta = max(
            abs(new[0] - mu1),
            abs(new[1] - s1),
            abs(new[2] - mu2),
            abs(new[3] - s2),
            abs(new[4] - pi2),
        )
        mu1, s1, mu2, s2, pi2 = new
        ll_history.append(_gmm_loglik(points, mu1, s1, mu2, s2, pi2))
        if delta < tol:
            break
    return (mu1, s1, mu2, s2, pi2), ll_history


class EmDetector:
    """Per-observation mixture classifier seeded from the stream's opening.

    The first ``warmup`` observations are buffered. Their mean and sample
    variance parameterize a clean-anchor draw (7 points by default), joined
    by 3 anchors from the fixed attack component N(attack_mean, attack_stdev^2).
    Every later observation y is classified by running EM to convergence on
    the anchors plus y and thresholding y's attack responsibility.

    All randomness comes from the seed carried in the config, so decision
    sequences are bit-for-bit reproducible.
    """

    def __init__(self, config: EmConfig | None = None):
        self.config = config or EmConfig()
        self.config.validate()
        self._buffer: list[float] = []
        self.anchors: list[float] | None = None
        self.seed_mean = 0.0
        self.seed_stdev = 1.0
        self.theta: tuple[float, float, float, float, float] | None = None
        self.last_ll_history: list[float] = []
        self.observed = 0

    def _build_anchors(self) -> None:
        n = len(self._buffer)
        self.seed_mean = math.fsum(self._buffer) / n
        var = math.fsum((x - self.seed_mean) ** 2 for x in self._buffer) / (n - 1)
        self.seed_stdev = max(math.sqrt(var), SIGMA_FLOOR)
        rng = np.random.default_rng(self.config.seed)
        clean = rng.normal(self.seed_mean, self.seed_stdev, self.config.clean_anchors)
        attack = rng.normal(
            self.config.attack_mean, self.config.attack_stdev, self.config.attack_anchors
        )
        self.anchors = [float(v) for v in clean] + [float(v) for v in attack]

    def observe(self, y: float) -> DetectorDecision:
        y = _require_finite(y)
        self.observed += 1
        if self.anchors is None:
            self._buffer.append(y)
            if len(self._buffer) == self.config.warmup:
                self._build_anchors()
            return DetectorDecision(attack=False, score=0.0, warmed_up=False)

        points = self.anchors + [y]
        self.theta, self.last_ll_history = fit_two_component_gmm(
            points,
            mu1=self.seed_mean,
            s1=self.seed_stdev,
            mu2=self.config.attack_mean,
            s2=self.config.attack_stdev,
            pi2=self.config.init_weight,
            tol=self.config.tol,
            max_iter=self.config.max_iter,
        )
        mu1, s1, mu2, s2, pi2 = self.theta
        score = attack_responsibility(y, mu1, s1, mu2, s2, pi2)
        return DetectorDecision(
            attack=score > self.config.threshold, score=score, warmed_up=True
        )


# ---------------------------------------------------------------------------
# Adaptive CUSUM detector
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CusumConfig:
    """Slack multiplier, EWMA weight, and alarm threshold in sigma units."""

    delta: float = 1.0
    alpha: float = 0.025  # EWMA weight of each new observation
    h_sigma: float = 5.0  # alarm threshold, in units of the estimated sigma
    warmup: int = 50  # observations used to estimate the in-control mean/sigma

    def validate(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.h_sigma <= 0:
            raise ValueError("h_sigma must be positive")
        if self.warmup < 2:
            raise ValueError("warmup must be at least 2")


class CusumDetector:
    """Two-sided adaptive CUSUM with an EWMA drift estimate.

    The in-control target mu and scale sigma come from the first ``warmup``
    observations (sample stdev, floored); the slack K = delta * sigma / 2.
    Each step takes the drift estimate D = ewma - mu from the previous
    step's EWMA. Drifts inside the slack band are treated as in-control;
    beyond it, each side accumulates the log-likelihood-ratio increment for
    a mean shift of size D:

        c_pos = max(0, c_pos + (D/sigma^2) * (y - mu - D/2))    when D > K
        c_neg = max(0, c_neg + (-D/sigma^2) * (mu - y + D/2))   when D < -K

    after which the EWMA advances: ewma += alpha * (y - ewma). Both
    statistics are scale-free (sigma^2 in the denominator), so the alarm
    compares them against h_sigma directly and the decision sequence is
    invariant to rescaling the stream. An alarm resets both statistics to
    zero; the EWMA keeps tracking, so a sustained shift re-alarms
    immediately.
    """

    def __init__(self, config: CusumConfig | None = None):
        self.config = config or CusumConfig()
        self.config.validate()
        self._buffer: list[float] = []
        self.mu = 0.0
        self.sigma = 1.0
        self.k = 0.0  # slack delta*sigma/2; drifts inside it do not accumulate
        self.ewma = 0.0
        self.c_pos = 0.0
        self.c_neg = 0.0
        self.ready = False
        self.observed = 0

    def _init_from_buffer(self) -> None:
        n = len(self._buffer)
        self.mu = math.fsum(self._buffer) / n
        var = math.fsum((x - self.mu) ** 2 for x in self._buffer) / (n - 1)
        self.sigma = max(math.sqrt(var), SIGMA_FLOOR)
        self.k = self.config.delta * self.sigma / 2.0
        self.ewma = self.mu
        self.ready = True

    def observe(self, y: float) -> DetectorDecision:
        y = _require_finite(y)
        self.observed += 1
        if not self.ready:
            self._buffer.append(y)
            if len(self._buffer) == self.config.warmup:
                self._init_from_buffer()
            return DetectorDecision(attack=False, score=0.0, warmed_up=False)

        var = self.sigma * self.sigma
        drift = self.ewma - self.mu  # uses the EWMA from the previous step
        if drift > self.k:
            self.c_pos = max(0.0, self.c_pos + (drift / var) * (y - self.mu - drift / 2.0))
        if drift < -self.k:
            self.c_neg = max(0.0, self.c_neg + (-drift / var) * (self.mu - y + drift / 2.0))
        self.ewma += self.config.alpha * (y - self.ewma)

        score = max(self.c_pos, self.c_neg)
        attack = score > self.config.h_sigma
        if attack:
            self.c_pos = 0.0
            self.c_neg = 0.0
        return DetectorDecision(attack=attack, score=score, warmed_up=True)


DETECTOR_NAMES = ("bocpd", "em", "cusum")


def make_detector(name: str, config=None):
    """Build a detector by name with its config (or defaults)."""
    if name == "bocpd":
        return BocpdDetector(config)
    if name == "em":
        return EmDetector(config)
    if name == "cusum":
        return CusumDetector(config)
    raise ValueError(f"unknown detector {name!r}; expected one of {DETECTOR_NAMES}")
