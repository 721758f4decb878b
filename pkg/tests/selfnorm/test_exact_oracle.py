import math
from fractions import Fraction

import numpy as np
import pytest

from selfnorm.BetaParam import BetaParam
from selfnorm.Bounds import boundBn, tstatThreshold
from selfnorm.ExactOracle import ExactOracle
from selfnorm.MagnitudeVector import MagnitudeVector
from selfnorm.Statistic import Statistic

B2 = BetaParam(2.0)
oracle = ExactOracle()


def test_sign_vectors():
    """
    should map bit i of the index to the sign of entry i
    """
    signs = ExactOracle.signs(0, 4, 2)
    assert (signs.tolist() == [[-1, -1], [1, -1], [-1, 1], [1, 1]])


def test_running_max_examples():
    tail = oracle.exactTail(MagnitudeVector.unit(2), B2, math.sqrt(2.0), Statistic.RunningMax)
    assert (tail.hits == 1)
    assert (tail.ratio == Fraction(1, 4))
    tail = oracle.exactTail(MagnitudeVector.unit(2), B2, 0.5, Statistic.RunningMax)
    assert (tail.hits == 2)
    assert (tail.probability == 0.5)
    assert (oracle.exactTail(MagnitudeVector.unit(3), B2, 2.0).hits == 0)


def test_final_sum_example():
    tail = oracle.exactTail(MagnitudeVector.unit(2), B2, 0.5, Statistic.FinalSum)
    assert (tail.hits == 1)
    assert (tail.probability == 0.25)
    assert (str(tail) == "1/4")


def test_endpoint_is_attained():
    """
    should give exactly 2^-n at the endpoint, matching the bound
    """
    for beta in (BetaParam(1.1), BetaParam(1.5), B2, BetaParam(3.0)):
        for n in range(1, 13):
            x = beta.endpoint(n)
            tail = oracle.exactTail(MagnitudeVector.unit(n), beta, x)
            assert (tail.hits == 1)
            assert (tail.probability == boundBn(n, beta, x).value)


def test_oracle_below_bound():
    for beta in (BetaParam(1.5), B2, BetaParam(3.0)):
        for n in (1, 2, 5, 9):
            for s in (0.1, 0.3, 0.5, 0.7, 0.9, 1.0):
                x = s * beta.endpoint(n)
                tail = oracle.exactTail(MagnitudeVector.unit(n), beta, x)
                assert (tail.probability <= boundBn(n, beta, x).value * (1.0 + 1e-12))


def test_weighted_running_max_can_exceed_bn_below_beta_two():
    """
    for beta < 2 and very unequal magnitudes the running max tail exceeds B_n
    """
    mags = MagnitudeVector((1.0, 0.01))
    beta = BetaParam(1.5)
    x = 0.99 / (1.0 + 0.01 ** 1.5) ** (1.0 / 1.5)
    tail = oracle.exactTail(mags, beta, x)
    assert (tail.hits == 2)
    assert (boundBn(2, beta, x).value == pytest.approx(0.4945, abs=1e-3))
    assert (tail.probability > boundBn(2, beta, x).value)
    assert (oracle.exactTail(mags, B2, x).probability <= boundBn(2, B2, x).value)


def test_weighted_comparison_is_exact():
    """
    should not count sums just below x V for unequal magnitudes
    """
    mags = MagnitudeVector((1.0, 1e-13))
    # V = 1.0 in floating point; only (+,+) has a final sum >= 1
    assert (oracle.exactTail(mags, B2, 1.0, Statistic.FinalSum).ratio == Fraction(1, 4))
    assert (oracle.exactTail(mags, B2, 1.0, Statistic.FinalSum, lowerTail=True).ratio == Fraction(1, 4))
    # (+,-) reaches 1 at its first step
    assert (oracle.exactTail(mags, B2, 1.0, Statistic.RunningMax).ratio == Fraction(1, 2))


def test_scale_invariance():
    for n in (1, 4, 7):
        for s in (0.2, 0.6):
            x = s * B2.endpoint(n)
            unit = oracle.exactTail(MagnitudeVector.unit(n), B2, x, Statistic.FinalSum)
            for a in (0.5, 3.7):
                assert (oracle.exactTail(MagnitudeVector.constant(n, a), B2, x, Statistic.FinalSum).hits == unit.hits)


def test_mirror_symmetry():
    rng = np.random.default_rng(3)
    for n in (1, 5, 10):
        for mags in (MagnitudeVector.unit(n), MagnitudeVector(tuple(rng.uniform(0.5, 1.5, n)))):
            for stat in (Statistic.RunningMax, Statistic.FinalSum):
                upper = oracle.exactTail(mags, B2, 0.4 * B2.endpoint(n), stat)
                lower = oracle.exactTail(mags, B2, 0.4 * B2.endpoint(n), stat, lowerTail=True)
                assert (upper.hits == lower.hits)


def test_monotone_in_x():
    mags = MagnitudeVector((0.7, 1.3, 1.0, 0.9, 1.1, 0.6))
    hits = [oracle.exactTail(mags, B2, s * B2.endpoint(6)).hits for s in np.linspace(0.05, 1.0, 20)]
    assert (all(b <= a for a, b in zip(hits, hits[1:])))


def test_worker_invariance():
    """
    should give identical counts for any worker count and chunk size
    """
    mags = MagnitudeVector(tuple(np.random.default_rng(5).uniform(0.5, 1.5, 12)))
    expected = oracle.exactTail(mags, BetaParam(1.5), 0.5)
    for workers, chunkSize in ((2, 100), (8, 7), (3, 1 << 20)):
        assert (ExactOracle(workers, chunkSize).exactTail(mags, BetaParam(1.5), 0.5) == expected)


def test_tstat_examples():
    """
    should exclude degenerate sign vectors from the t-statistic event
    """
    tail = oracle.exactTstatTail(MagnitudeVector.unit(4), 1.0)
    assert (tail.hits == 4)
    assert (tail.identityHits == 4)
    assert (tail.degenerate == 2)
    # the all-plus vector is in the self-normalized event but has zero sample variance
    assert (oracle.exactTail(MagnitudeVector.unit(4), B2, tstatThreshold(4, 1.0), Statistic.FinalSum).hits == 5)

    tail = oracle.exactTstatTail(MagnitudeVector.unit(2), 1e6)
    assert (tail.hits == 0)
    assert (tail.degenerate == 2)

    tail = oracle.exactTstatTail(MagnitudeVector((1.0, 2.0, 3.0)), 1e-4)
    assert (tail.ratio == Fraction(3, 8))
    assert (tail.identityHolds())


def test_tstat_identity():
    rng = np.random.default_rng(11)
    vectors = [MagnitudeVector.unit(n) for n in range(2, 11)]
    vectors += [MagnitudeVector(tuple(rng.uniform(0.5, 1.5, n))) for n in range(2, 9)]
    for mags in vectors:
        for x in (0.1, 1.0, 2.5):
            tail = oracle.exactTstatTail(mags, x)
            assert (tail.identityHolds())
            assert (tail.hits + tail.degenerate <= tail.total)


def test_rejects_tstat_in_exact_tail():
    with pytest.raises(ValueError):
        oracle.exactTail(MagnitudeVector.unit(3), B2, 1.0, Statistic.Tstat)
    with pytest.raises(ValueError):
        oracle.exactTstatTail(MagnitudeVector.unit(1), 1.0)
