import numpy as np

from selfnorm.EnumUtil import LowerCaseEnum


class Statistic(LowerCaseEnum):
    """
    The event whose tail probability is bounded
    """
    # max_k S_k >= x V_{n,beta}
    RunningMax = "running-max"
    # S_n >= x V_{n,beta}
    FinalSum = "final-sum"
    # T_n >= x
    Tstat = "tstat"


def rowNorms(xs: np.ndarray, beta: float) -> np.ndarray:
    """
    Returns V_{n,beta} for every row of xs, computed on rows scaled by their largest magnitude.
    All-zero rows give 0.
    """
    mags = np.abs(xs)
    top = mags.max(axis=1)
    scale = np.where(top > 0.0, top, 1.0)
    return top * np.power(np.power(mags / scale[:, None], beta).sum(axis=1), 1.0 / beta)


def statisticValues(xs: np.ndarray, stat: Statistic) -> np.ndarray:
    """
    Returns max_k S_k or S_n for every row of xs
    """
    match stat:
        case Statistic.RunningMax:
            return np.cumsum(xs, axis=1).max(axis=1)
        case Statistic.FinalSum:
            return xs.sum(axis=1)
        case _:
            raise ValueError(f"requirement failed: {stat.value} is not a partial sum statistic")


def degenerateRows(xs: np.ndarray) -> np.ndarray:
    """
    Rows whose entries are all equal, for which the sample standard deviation vanishes
    """
    return np.ptp(xs, axis=1) == 0.0


def tStatistics(xs: np.ndarray) -> np.ndarray:
    """
    Returns the Student t-statistic sqrt(n) * mean / sd for every row of xs (n >= 2).
    Degenerate rows get 0 and must be excluded by the caller.
    """
    n = xs.shape[1]
    mean = xs.mean(axis=1)
    deviations = xs - mean[:, None]
    sd = np.sqrt((deviations * deviations).sum(axis=1) / (n - 1))
    live = sd > 0.0
    t = np.zeros_like(mean)
    t[live] = np.sqrt(n) * mean[live] / sd[live]
    return t
