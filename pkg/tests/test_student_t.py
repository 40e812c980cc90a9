"""Student-t log density against symmetry, the normal limit, and quadrature."""

import math

import pytest
from scipy.integrate import quad

from bsmguard.detectors import student_t_logpdf


def test_normal_limit_at_mode():
    # Huge df makes the t collapse onto N(0, 1); density at 0 is 1/sqrt(2 pi).
    got = student_t_logpdf(0.0, df=1e6, mean=0.0, scale=1.0)
    assert got == pytest.approx(math.log(1.0 / math.sqrt(2 * math.pi)), abs=1e-4)


def test_symmetry_exact():
    for d in (0.1, 1.3, 7.5):
        left = student_t_logpdf(2.0 - d, df=3.0, mean=2.0, scale=1.7)
        right = student_t_logpdf(2.0 + d, df=3.0, mean=2.0, scale=1.7)
        assert left == right


def test_against_quadrature_normalized_kernel():
    # Independent reference: normalize the unnormalized t kernel numerically
    # and evaluate at the queried point.
    df, mean, scale, y = 3.0, 0.0, 2.0, 1.5

    def kernel(x):
        z = (x - mean) / scale
        return (1.0 + z * z / df) ** (-(df + 1.0) / 2.0)

    norm, err = quad(kernel, -math.inf, math.inf)
    assert err < 1e-7 * norm
    want = math.log(kernel(y) / norm)
    assert student_t_logpdf(y, df=df, mean=mean, scale=scale) == pytest.approx(
        want, abs=1e-8
    )


def test_integrates_to_one_for_small_df():
    df, mean, scale = 0.7, -1.0, 0.5

    def pdf(x):
        return math.exp(student_t_logpdf(x, df=df, mean=mean, scale=scale))

    total, _ = quad(pdf, -math.inf, math.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("df,scale", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_invalid_parameters(df, scale):
    with pytest.raises(ValueError):
        student_t_logpdf(0.0, df=df, mean=0.0, scale=scale)
