from functools import partial

import numpy as np
import structlog

from selfnorm.BetaParam import BetaParam
from selfnorm.Bounds import tstatThreshold, vNorm
from selfnorm.ExactTail import ExactTail, ExactTstatTail
from selfnorm.MagnitudeVector import MagnitudeVector
from selfnorm.Par import par
from selfnorm.SampleVector import SampleVector
from selfnorm.Statistic import Statistic, degenerateRows, statisticValues, tStatistics
from selfnorm.Thresholds import integerThreshold, reaches, requireThreshold


class ExactOracle:
    """
    Exact tail probabilities by enumerating all 2^n sign vectors of a magnitude vector.
    Sign vector number k has eps_i = +1 exactly when bit i of k is set.
    """
    log = structlog.get_logger()

    def __init__(self, workers: int = 1, chunkSize: int = 1 << 16):
        if chunkSize < 1:
            raise ValueError(f"requirement failed: chunkSize must be positive, got {chunkSize}")
        self.workers = workers
        self.chunkSize = chunkSize

    @classmethod
    def fromSettings(cls, settings):
        return cls(settings.workers(), settings.chunkSize)

    @staticmethod
    def signs(lo: int, hi: int, n: int) -> np.ndarray:
        """
        Returns the sign vectors lo..hi-1 as rows of +1/-1
        """
        index = np.arange(lo, hi, dtype=np.int64)[:, None]
        bits = (index >> np.arange(n, dtype=np.int64)) & 1
        return (2 * bits - 1).astype(np.int8)

    def _chunks(self, n: int) -> list[tuple[int, int]]:
        total = 1 << n
        return [(lo, min(lo + self.chunkSize, total)) for lo in range(0, total, self.chunkSize)]

    def _sum(self, n: int, count) -> tuple:
        results = par([partial(count, lo, hi) for lo, hi in self._chunks(n)], self.workers)
        return tuple(sum(column) for column in zip(*results))

    @staticmethod
    def _countUniform(lo: int, hi: int, n: int, k: int, stat: Statistic, lowerTail: bool) -> tuple[int]:
        walk = ExactOracle.signs(lo, hi, n).astype(np.int64)
        if lowerTail:
            walk = -walk
        return (int(np.count_nonzero(statisticValues(walk, stat) >= k)),)

    @staticmethod
    def _countWeighted(lo: int, hi: int, n: int, a: np.ndarray, threshold: float, stat: Statistic,
                       lowerTail: bool) -> tuple[int]:
        xs = ExactOracle.signs(lo, hi, n) * a
        if lowerTail:
            xs = -xs
        # exact comparison: no tolerance for unequal magnitudes
        return (int(np.count_nonzero(statisticValues(xs, stat) >= threshold)),)

    def exactTail(self, mags: MagnitudeVector, beta: BetaParam, x: float,
                  stat: Statistic = Statistic.RunningMax, lowerTail: bool = False) -> ExactTail:
        """
        Computes P(stat >= x V_{n,beta}) exactly. Unequal magnitudes are compared with an exact >=,
        equal magnitudes reduce to an integer walk reaching the tie-tolerant integer threshold.

        Args:
            mags: the magnitudes a_1..a_n, n <= 30
            beta: normalizer exponent
            x: threshold, x > 0
            stat: running-max or final-sum
            lowerTail: count the mirrored event (min_k S_k <= -x V, or S_n <= -x V) instead

        Returns:
            hits over 2^n
        """
        requireThreshold(x)
        if stat == Statistic.Tstat:
            raise ValueError("requirement failed: use exactTstatTail for the t-statistic")
        n = len(mags)
        if mags.isUniform():
            # V = a n^(1/beta), so the event is an integer walk reaching x n^(1/beta)
            k = integerThreshold(x * beta.rootN(n))
            count = partial(self._countUniform, n=n, k=k, stat=stat, lowerTail=lowerTail)
        else:
            a = mags.asArray()
            threshold = x * vNorm(SampleVector(a), beta)
            count = partial(self._countWeighted, n=n, a=a, threshold=threshold, stat=stat, lowerTail=lowerTail)
        (hits,) = self._sum(n, count)
        self.log.debug(f"exact {stat.value} tail for n={n}, beta={beta}, x={x}: {hits}/{1 << n}")
        return ExactTail(hits, 1 << n)

    @staticmethod
    def _countTstat(lo: int, hi: int, n: int, a: np.ndarray, x: float, threshold: float,
                    v2: float) -> tuple[int, int, int]:
        xs = ExactOracle.signs(lo, hi, n) * a
        degenerate = degenerateRows(xs)
        live = ~degenerate
        direct = reaches(tStatistics(xs), x) & live
        viaIdentity = reaches(xs.sum(axis=1) / v2, threshold) & live
        return int(np.count_nonzero(direct)), int(np.count_nonzero(viaIdentity)), int(np.count_nonzero(degenerate))

    def exactTstatTail(self, mags: MagnitudeVector, x: float) -> ExactTstatTail:
        """
        Computes P(T_n >= x) exactly. Sign vectors with zero sample standard deviation are
        excluded from the event and reported as degenerate.
        """
        n = len(mags)
        threshold = tstatThreshold(n, x)
        a = mags.asArray()
        v2 = vNorm(SampleVector(a), BetaParam(2.0))
        count = partial(self._countTstat, n=n, a=a, x=x, threshold=threshold, v2=v2)
        direct, viaIdentity, degenerate = self._sum(n, count)
        if direct != viaIdentity:
            self.log.error(f"t-statistic identity broken for n={n}, x={x}: {direct} direct vs {viaIdentity} hits")
        return ExactTstatTail(direct, 1 << n, degenerate, viaIdentity)
