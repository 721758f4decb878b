import math

import numpy as np

# Relative slack for ">= threshold" comparisons of computed statistics (simulation,
# t-statistics) and for the integer threshold of equal-magnitude walks. The oracle
# compares unequal-magnitude sums exactly.
TIE_TOLERANCE = 1e-12


def slack(threshold):
    return TIE_TOLERANCE * np.maximum(1.0, np.abs(threshold))


def reaches(values, threshold):
    """
    Tie-tolerant comparison values >= threshold (element-wise for arrays)
    """
    return np.asarray(values) >= threshold - slack(threshold)


def integerThreshold(tau: float) -> int:
    """
    Smallest integer k such that an integer sum m satisfies reaches(m, tau) exactly when m >= k.
    """
    r = round(tau)
    if abs(tau - r) <= float(slack(tau)):
        return int(r)
    return math.ceil(tau)


def requireThreshold(x: float, name: str = "x"):
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"requirement failed: {name} must be a finite positive number, got {x}")


def requireCount(n: int, minimum: int = 1, name: str = "n"):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise ValueError(f"requirement failed: {name} must be an integer >= {minimum}, got {n}")
