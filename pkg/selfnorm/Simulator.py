import math
from functools import partial

import numpy as np
import structlog

from selfnorm.BetaParam import BetaParam
from selfnorm.Bounds import tstatThreshold
from selfnorm.DistributionSpec import DistributionSpec
from selfnorm.Par import par
from selfnorm.SampleVector import SampleVector
from selfnorm.Statistic import Statistic, degenerateRows, rowNorms, statisticValues, tStatistics
from selfnorm.TailEstimate import LogRate, TailEstimate
from selfnorm.Thresholds import TIE_TOLERANCE, reaches, requireCount, requireThreshold
from selfnorm.TrialStreams import TrialStreams

# cells with fewer hits give unreliable log rates
MIN_HITS = 20


def sampleVector(spec: DistributionSpec, n: int, rng: np.random.Generator) -> SampleVector:
    """
    Draws one sample vector of length n
    """
    requireCount(n)
    return SampleVector(spec.sample(rng, 1, n)[0])


class Simulator:
    """
    Monte Carlo estimates of self-normalized tail probabilities.
    Trials are drawn in fixed blocks from counter-based streams, so a given seed gives the same
    counts for any number of workers.
    """
    log = structlog.get_logger()

    def __init__(self, workers: int = 1, confidence: float = 0.99):
        self.workers = workers
        self.confidence = confidence

    @classmethod
    def fromSettings(cls, settings):
        return cls(settings.workers(), settings.confidence)

    def _run(self, trials: int, seed: int, block) -> tuple:
        requireCount(trials, name="trials")
        streams = TrialStreams(seed)
        funcs = [partial(block, streams.generator(b), size) for b, size in streams.blocks(trials)]
        return tuple(sum(column) for column in zip(*par(funcs, self.workers)))

    @staticmethod
    def _countBlock(rng: np.random.Generator, size: int, spec: DistributionSpec, n: int, beta: float, x: float,
                    stat: Statistic) -> tuple[int, int]:
        xs = spec.sample(rng, size, n)
        if stat == Statistic.Tstat:
            degenerate = degenerateRows(xs)
            hits = reaches(tStatistics(xs), x) & ~degenerate
        else:
            v = rowNorms(xs, beta)
            degenerate = v == 0.0
            hits = reaches(statisticValues(xs, stat), x * v) & ~degenerate
        return int(np.count_nonzero(hits)), int(np.count_nonzero(degenerate))

    def estimateTail(self, spec: DistributionSpec, n: int, beta: BetaParam, x: float, stat: Statistic,
                     trials: int, seed: int) -> TailEstimate:
        """
        Estimates the tail probability of a statistic.

        Args:
            spec: distribution of the observations
            n: sample size (n >= 2 for tstat)
            beta: normalizer exponent, ignored for tstat
            x: threshold, x > 0
            stat: running-max, final-sum or tstat
            trials: number of independent sample vectors
            seed: unsigned 64 bit seed

        Returns:
            the estimate with its Wilson interval; degenerate trials count as non-hits
        """
        requireCount(n, minimum=2 if stat == Statistic.Tstat else 1)
        requireThreshold(x)
        if spec.infiniteMoment(beta.beta):
            self.log.info(f"{spec} has an infinite moment of order beta={beta}")
        block = partial(self._countBlock, spec=spec, n=n, beta=beta.beta, x=x, stat=stat)
        hits, degenerate = self._run(trials, seed, block)
        estimate = TailEstimate.make(hits, trials, seed, degenerate, self.confidence)
        self.log.debug(f"{stat.value} tail of {spec} for n={n}, beta={beta}, x={x}: {hits}/{trials}")
        return estimate

    @staticmethod
    def _efronBlock(rng: np.random.Generator, size: int, spec: DistributionSpec, n: int, x: float,
                    threshold: float) -> tuple[int]:
        xs = spec.sample(rng, size, n)
        live = ~degenerateRows(xs)
        direct = reaches(tStatistics(xs), x)
        viaIdentity = reaches(xs.sum(axis=1) / np.where(live, rowNorms(xs, 2.0), 1.0), threshold)
        return (int(np.count_nonzero(live & (direct != viaIdentity))),)

    def efronCheck(self, spec: DistributionSpec, n: int, x: float, trials: int, seed: int) -> int:
        """
        Counts non-degenerate trials where T_n >= x and S_n / V_{n,2} >= x sqrt(n / (n + x^2 - 1)) disagree
        """
        threshold = tstatThreshold(n, x)
        block = partial(self._efronBlock, spec=spec, n=n, x=x, threshold=threshold)
        (violations,) = self._run(trials, seed, block)
        if violations:
            self.log.warning(f"t-statistic identity disagrees on {violations}/{trials} trials of {spec} for n={n}, x={x}")
        return violations

    def empiricalLogRate(self, spec: DistributionSpec, beta: BetaParam, c: float, nList: list[int], alpha: float,
                         trials: int, seed: int) -> list[LogRate]:
        """
        Estimates ln P(max_k S_k >= x_n V_{n,beta}) / n^gamma with x_n = c n^alpha and
        gamma = 2 alpha + 2/beta - 1, for every n in nList.
        """
        requireThreshold(c, "c")
        gamma = 2.0 * alpha + 2.0 / beta.beta - 1.0
        if not gamma > 0.0:
            raise ValueError(f"requirement failed: alpha={alpha} gives a non-positive rate exponent {gamma}")
        if abs(alpha - (beta.beta - 1.0) / beta.beta) <= TIE_TOLERANCE and c > 1.0:
            raise ValueError(f"requirement failed: c must be in (0, 1] at the endpoint exponent, got {c}")
        rates = []
        for n in nList:
            estimate = self.estimateTail(spec, n, beta, c * n ** alpha, Statistic.RunningMax, trials, seed)
            scale = n ** gamma
            if estimate.hits < MIN_HITS:
                self.log.warning(f"only {estimate.hits} hits for n={n}; the log rate is unreliable")
            rate = math.log(estimate.pHat) / scale if estimate.hits > 0 else -math.inf
            rateLower = math.log(estimate.ciLow) / scale if estimate.ciLow > 0.0 else -math.inf
            rateUpper = math.log(estimate.ciHigh) / scale
            rates.append(LogRate(n, rate, rateLower, rateUpper, estimate))
        return rates
