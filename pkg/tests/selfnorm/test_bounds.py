import math

import numpy as np
import pytest

from selfnorm.BetaParam import BetaParam
from selfnorm.BoundEvaluation import Regime
from selfnorm.Bounds import (boundBn, boundBnEntropyForm, boundCorollary, boundRescaled, boundTstat, corollaryChain,
                             entropy, lambdaStar, logCosh, tstatThreshold, twoSidedBound, vNorm, wangJingBound)
from selfnorm.SampleVector import SampleVector

B2 = BetaParam(2.0)


def test_v_norm():
    """
    should compute V_{n,beta} with scaling by the largest magnitude
    """
    assert (vNorm(SampleVector([3.0, -4.0]), B2) == 5.0)
    assert (vNorm(SampleVector([0.0, 0.0, 0.0]), BetaParam(1.5)) == 0.0)
    assert (vNorm(SampleVector([1.0, 1.0, 1.0, 1.0]), B2) == 2.0)
    assert (vNorm(SampleVector([1e200, 1e200]), B2) == pytest.approx(math.sqrt(2.0) * 1e200, rel=1e-15))


def test_log_cosh():
    """
    should evaluate ln cosh without overflow
    """
    assert (logCosh(0.0) == 0.0)
    assert (logCosh(-2.5) == logCosh(2.5))
    assert (abs(logCosh(1000.0) - (1000.0 - math.log(2.0))) <= 1e-12)
    assert (logCosh(0.3) == pytest.approx(math.log(math.cosh(0.3)), rel=1e-13))
    for u in np.linspace(-30.0, 30.0, 601):
        assert (logCosh(float(u)) <= math.nextafter(0.5 * u * u, math.inf))


def test_bound_bn_examples():
    """
    should evaluate B_n at the interior, endpoint and impossible regimes
    """
    e = boundBn(4, B2, 1.0)
    assert (e.regime == Regime.Interior)
    assert (e.s == 0.5)
    assert (e.t == pytest.approx(3.0))
    assert (e.value == pytest.approx(16 / 27, rel=1e-12))

    e = boundBn(4, B2, 2.0)
    assert (e.regime == Regime.Endpoint)
    assert (e.value == 0.0625)
    assert (e.t == math.inf)
    assert (e.logValue == -4 * math.log(2.0))

    e = boundBn(3, BetaParam(1.5), 3.0)
    assert (e.regime == Regime.Impossible)
    assert (e.value == 0.0)
    assert (e.logValue == -math.inf)

    assert (abs(boundBn(7, B2, 1e-12).value - 1.0) <= 1e-10)
    assert (boundBn(1, B2, 1.0).value == 0.5)
    assert (boundBn(1, B2, 0.5).value == pytest.approx((16 / 27) ** 0.25, rel=1e-12))


def test_bound_bn_snaps_to_endpoint():
    """
    should treat thresholds within 1e-12 of the endpoint as the endpoint
    """
    e = boundBn(9, B2, 3.0 * (1.0 + 1e-13))
    assert (e.regime == Regime.Endpoint)
    assert (e.value == math.ldexp(1.0, -9))
    assert (boundBn(9, B2, 3.0 * (1.0 + 1e-9)).regime == Regime.Impossible)


def test_bound_bn_large_n():
    """
    should stay accurate for large n
    """
    limit = math.exp(-0.5)
    value = boundBn(100000, B2, 1.0).value
    assert (limit - 1e-5 <= value <= limit)
    e = boundBn(10 ** 7, BetaParam(1.5), 1.0)
    assert (0.0 < e.value < 1.0)
    assert (math.isfinite(e.logValue))


def test_bound_bn_increasing_in_n():
    values = [boundBn(n, B2, 1.0).value for n in (1, 4, 16, 100, 1000, 10000, 100000)]
    assert (all(a < b for a, b in zip(values, values[1:])))


def test_bound_bn_rejects_bad_input():
    """
    should reject non-positive thresholds and sample sizes
    """
    with pytest.raises(ValueError, match="requirement failed"):
        boundBn(4, B2, 0.0)
    with pytest.raises(ValueError):
        boundBn(4, B2, -1.0)
    with pytest.raises(ValueError):
        boundBn(4, B2, math.nan)
    with pytest.raises(ValueError):
        boundBn(0, B2, 1.0)
    with pytest.raises(ValueError):
        boundBn(2.5, B2, 1.0)


def test_entropy_form():
    """
    should agree with the literal form
    """
    assert (boundBnEntropyForm(4, B2, 2.0).value == 0.0625)
    assert (boundBnEntropyForm(4, B2, 1.0).value == pytest.approx(16 / 27, rel=1e-12))
    assert (boundBnEntropyForm(5, B2, 1e-12).value == pytest.approx(1.0))
    assert (entropy(1.0) == math.log(2.0))
    for beta in (BetaParam(1.1), BetaParam(3.0), BetaParam(10.0)):
        for n in (1, 7, 64):
            for s in (0.01, 0.5, 0.999):
                x = s * beta.endpoint(n)
                a = boundBn(n, beta, x).logValue
                b = boundBnEntropyForm(n, beta, x).logValue
                assert (abs(a - b) <= 1e-12 * max(1.0, abs(a)))


def test_bound_corollary():
    """
    should evaluate exp(-x^2 n^(2/beta-1) / 2) and flag beta > 2
    """
    e = boundCorollary(9, B2, 1.0)
    assert (e.value == pytest.approx(math.exp(-0.5)))
    assert (not e.extrapolated)
    assert (boundCorollary(16, B2, 1e-15).value == pytest.approx(1.0))
    assert (boundCorollary(16, BetaParam(1.5), 1.0).value == pytest.approx(math.exp(-16 ** (1 / 3) / 2), rel=1e-12))
    assert (boundCorollary(16, BetaParam(3.0), 1.0).extrapolated)


def test_bound_bn_below_corollary():
    for beta in (BetaParam(1.1), BetaParam(1.5), B2):
        for n in (1, 2, 10, 50):
            for s in (0.05, 0.5, 0.95, 1.0):
                chain = corollaryChain(n, beta, s * beta.endpoint(n))
                assert (chain.holds)


def test_bound_rescaled():
    """
    should apply the corollary at x n^alpha and flag alpha outside the window
    """
    assert (boundRescaled(100, B2, 1.0, 0.0).value == pytest.approx(math.exp(-0.5)))
    assert (not boundRescaled(100, B2, 1.0, 0.0).extrapolated)
    assert (boundRescaled(16, B2, 1.0, 0.25).value == pytest.approx(math.exp(-2.0)))
    e = boundRescaled(4, B2, 2.0, 0.5)
    assert (e.value == pytest.approx(math.exp(-8.0)))
    assert (not e.extrapolated)
    assert (boundRescaled(4, B2, 2.0, 0.75).extrapolated)
    assert (boundRescaled(4, BetaParam(1.5), 1.0, -0.2).extrapolated)
    with pytest.raises(ValueError):
        boundRescaled(4, B2, 1.0, math.inf)


def test_lambda_star():
    assert (lambdaStar(4, B2, 1.0) == pytest.approx(math.log(3.0), rel=1e-14))
    assert (lambdaStar(9, B2, 3.0) == math.inf)
    assert (lambdaStar(9, B2, 4.0) == math.inf)
    assert (lambdaStar(5, BetaParam(1.5), 1e-12) < 1e-9)


def test_tstat_threshold():
    """
    should map a t-statistic threshold to the equivalent self-normalized threshold
    """
    assert (tstatThreshold(4, 1.0) == pytest.approx(1.0, rel=1e-15))
    assert (tstatThreshold(5, 2.0) == pytest.approx(2.0 * math.sqrt(5 / 8), rel=1e-14))
    assert (tstatThreshold(3, 1e6) == pytest.approx(math.sqrt(3.0), rel=1e-9))
    for n in (2, 3, 10, 64):
        for x in (1e-6, 1.0, 1e3, 1e12):
            assert (0.0 < tstatThreshold(n, x) <= math.sqrt(n))
    with pytest.raises(ValueError):
        tstatThreshold(1, 1.0)


def test_bound_tstat():
    assert (boundTstat(4, 1.0).value == pytest.approx(16 / 27, rel=1e-12))
    assert (boundTstat(2, 1e8).value == pytest.approx(0.25, rel=1e-6))
    assert (abs(boundTstat(10, 0.001).value - 1.0) <= 1e-5)


def test_bound_tstat_is_interior_for_finite_x():
    """
    should stay interior and approach 2^-n from above as x grows
    """
    for x in (1e4, 1e6, 1e8, 1e200):
        e = boundTstat(2, x)
        assert (e.regime == Regime.Interior)
        assert (e.value == pytest.approx(0.25, rel=1e-6))
    for n in (2, 5, 30):
        for x in (0.1, 1.0, 3.0, 20.0):
            direct = boundBn(n, B2, tstatThreshold(n, x))
            assert (boundTstat(n, x).logValue == pytest.approx(direct.logValue, rel=1e-10))


def test_two_sided_bound():
    assert (twoSidedBound(4, B2, 2.0) == 0.125)
    assert (twoSidedBound(3, B2, 0.01) == 1.0)
    assert (twoSidedBound(5, B2, 10.0) == 0.0)


def test_wang_jing_bound():
    assert (wangJingBound(1.0) == pytest.approx(math.exp(-0.5)))
    for n in (1, 4, 50, 1000):
        assert (boundBn(n, B2, 1.0).value <= wangJingBound(1.0))
