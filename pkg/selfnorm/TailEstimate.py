import math
from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from scipy.stats import norm


def wilsonInterval(hits: int, trials: int, confidence: float = 0.99) -> tuple[float, float]:
    """
    Returns the Wilson score interval for a binomial proportion
    """
    z = norm.ppf(0.5 + confidence / 2.0)
    p = hits / trials
    denominator = 1.0 + z * z / trials
    centre = (p + z * z / (2.0 * trials)) / denominator
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denominator
    return max(0.0, min(p, centre - half)), min(1.0, max(p, centre + half))


@dataclass
class TailEstimate:
    """
    A Monte Carlo estimate of a tail probability with its Wilson interval
    """
    hits: int
    trials: int
    pHat: float
    ciLow: float
    ciHigh: float
    seed: int
    # trials where the statistic is undefined; they count as non-hits
    degenerateCount: int = 0

    @classmethod
    def make(cls, hits: int, trials: int, seed: int, degenerateCount: int = 0, confidence: float = 0.99) -> Self:
        if trials < 1:
            raise ValueError(f"requirement failed: trials must be positive, got {trials}")
        if not 0 <= hits <= trials:
            raise ValueError(f"requirement failed: hits must be in [0, {trials}], got {hits}")
        low, high = wilsonInterval(hits, trials, confidence)
        return cls(hits, trials, hits / trials, low, high, seed, degenerateCount)

    def halfWidth(self) -> float:
        return self.ciHigh - self.pHat

    def respects(self, bound: float) -> bool:
        """
        True when pHat <= bound + 3 (ciHigh - pHat)
        """
        return self.pHat <= bound + 3.0 * self.halfWidth()

    def covers(self, p: float) -> bool:
        return self.ciLow <= p <= self.ciHigh


@dataclass
class LogRate:
    """
    The normalized log tail ln(pHat) / n^gamma at one sample size, with the interval it inherits
    """
    n: int
    rate: float
    rateLower: float
    rateUpper: float
    estimate: TailEstimate

    def respects(self, c: float) -> bool:
        """
        True when the rate interval reaches down to the limit -c^2/2 or below
        """
        return self.rateLower <= -0.5 * c * c
