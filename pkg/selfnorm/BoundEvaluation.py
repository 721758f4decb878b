from dataclasses import dataclass
from enum import Enum


class Regime(Enum):
    # 0 < x < n^((beta-1)/beta)
    Interior = "interior"
    # x == n^((beta-1)/beta): the only hitting sign vector is all plus
    Endpoint = "endpoint"
    # x > n^((beta-1)/beta): the event is empty
    Impossible = "impossible"


@dataclass
class BoundEvaluation:
    """
    One evaluation of the closed-form bound B_n(beta, x).

    Args:
        n: sample size
        x: threshold
        s: normalized threshold x / n^((beta-1)/beta)
        t: (1+s)/(1-s), infinite at and beyond the endpoint
        logValue: natural log of the bound (-inf when the event is empty)
        value: the bound itself, in [0, 1]
        regime: which case of the definition applies
    """
    n: int
    x: float
    s: float
    t: float
    logValue: float
    value: float
    regime: Regime


@dataclass
class ExponentialBound:
    """
    A bound of the form exp(-exponent), with a flag set when it is evaluated
    outside the parameter window where it is established.
    """
    value: float
    logValue: float
    extrapolated: bool = False


@dataclass
class BernsteinResult:
    lambdaStar: float
    objectiveValue: float
    iterations: int


@dataclass
class CorollaryChain:
    """
    The chain B_n(beta, x) <= exp(-x^2 n^(2/beta - 1) / 2) evaluated at one point
    """
    bound: float
    corollary: float
    holds: bool
