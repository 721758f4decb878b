"""
Closed-form tail bounds for self-normalized sums of independent symmetric random variables.

All bounds are pure functions of (n, beta, x). Interior evaluations go through logarithms so that
results stay accurate for n up to 10^7.
"""
import math

import structlog

from selfnorm.BetaParam import BetaParam
from selfnorm.BoundEvaluation import BoundEvaluation, CorollaryChain, ExponentialBound, Regime
from selfnorm.SampleVector import SampleVector
from selfnorm.Statistic import rowNorms
from selfnorm.Thresholds import TIE_TOLERANCE, requireCount, requireThreshold

LN2 = math.log(2.0)

log = structlog.get_logger()


def vNorm(xs: SampleVector, beta: BetaParam) -> float:
    """
    Returns V_{n,beta} = (sum |x_i|^beta)^(1/beta), 0 for an all-zero vector
    """
    return float(rowNorms(xs.values[None, :], beta.beta)[0])


def logCosh(u: float) -> float:
    """
    Returns ln cosh(u) without overflow for large |u| and without cancellation near 0
    """
    a = abs(u)
    if a < 1.0:
        # cosh(a) = 1 + 2 sinh(a/2)^2
        return math.log1p(2.0 * math.sinh(0.5 * a) ** 2)
    return a - LN2 + math.log1p(math.exp(-2.0 * a))


def entropy(s: float) -> float:
    """
    Returns H(s) = ((1+s)/2) ln(1+s) + ((1-s)/2) ln(1-s) for s in [0, 1], with H(1) = ln 2
    """
    if s >= 1.0:
        return LN2
    return 0.5 * (1.0 + s) * math.log1p(s) + 0.5 * (1.0 - s) * math.log1p(-s)


def normalizedThreshold(n: int, beta: BetaParam, x: float) -> tuple[float, Regime]:
    """
    Returns s = x / n^((beta-1)/beta) and the regime it falls in.
    Values within 1e-12 of the endpoint are snapped to exactly 1.
    """
    requireCount(n)
    requireThreshold(x)
    s = x / beta.endpoint(n)
    if abs(s - 1.0) <= TIE_TOLERANCE:
        return 1.0, Regime.Endpoint
    if s > 1.0:
        return s, Regime.Impossible
    return s, Regime.Interior


def _boundary(n: int, x: float, s: float, regime: Regime) -> BoundEvaluation:
    if regime == Regime.Endpoint:
        return BoundEvaluation(n, x, s, math.inf, -n * LN2, math.ldexp(1.0, -n), regime)
    return BoundEvaluation(n, x, s, math.inf, -math.inf, 0.0, regime)


def boundBn(n: int, beta: BetaParam, x: float) -> BoundEvaluation:
    """
    Evaluates B_n(beta, x) = 2^-n (t^(1/2) + t^(-1/2))^n t^(-n^(1/beta) x / 2) with t = (1+s)/(1-s).

    Args:
        n: sample size, n >= 1
        beta: normalizer exponent
        x: threshold, x > 0

    Returns:
        the evaluation, with value 2^-n at the endpoint and 0 beyond it
    """
    s, regime = normalizedThreshold(n, beta, x)
    if regime != Regime.Interior:
        return _boundary(n, x, s, regime)
    halfLogT = 0.5 * (math.log1p(s) - math.log1p(-s))
    # ln((t^(1/2) + t^(-1/2)) / 2) = ln cosh(ln(t) / 2)
    logValue = n * logCosh(halfLogT) - beta.rootN(n) * x * halfLogT
    logValue = min(0.0, logValue)
    return BoundEvaluation(n, x, s, (1.0 + s) / (1.0 - s), logValue, math.exp(logValue), regime)


def boundBnEntropyForm(n: int, beta: BetaParam, x: float) -> BoundEvaluation:
    """
    Evaluates the same bound as boundBn through exp(-n H(s))
    """
    s, regime = normalizedThreshold(n, beta, x)
    if regime != Regime.Interior:
        return _boundary(n, x, s, regime)
    logValue = -n * entropy(s)
    return BoundEvaluation(n, x, s, (1.0 + s) / (1.0 - s), logValue, math.exp(logValue), regime)


def boundCorollary(n: int, beta: BetaParam, x: float) -> ExponentialBound:
    """
    Returns exp(-x^2 n^(2/beta - 1) / 2). Flagged as extrapolated for beta > 2.
    """
    requireCount(n)
    requireThreshold(x)
    logValue = -0.5 * x * x * n ** (2.0 / beta.beta - 1.0)
    extrapolated = not beta.isEstablishedRange()
    if extrapolated:
        log.debug(f"corollary bound evaluated at beta={beta} > 2")
    return ExponentialBound(math.exp(logValue), logValue, extrapolated)


def rescaledWindow(beta: BetaParam) -> tuple[float, float]:
    """
    Returns the open-closed window ((beta-2)/(2 beta), (beta-1)/beta] of rescaling exponents
    """
    b = beta.beta
    return (b - 2.0) / (2.0 * b), (b - 1.0) / b


def boundRescaled(n: int, beta: BetaParam, x: float, alpha: float) -> ExponentialBound:
    """
    Returns exp(-x^2 n^(2 alpha + 2/beta - 1) / 2), the corollary bound at threshold x n^alpha.
    Flagged as extrapolated for beta > 2 or alpha outside the established window (alpha = 0 included).
    """
    if not math.isfinite(alpha):
        raise ValueError(f"requirement failed: alpha must be finite, got {alpha}")
    requireThreshold(x)
    corollary = boundCorollary(n, beta, x * n ** alpha)
    low, high = rescaledWindow(beta)
    inWindow = alpha == 0.0 or low < alpha <= high
    return ExponentialBound(corollary.value, corollary.logValue, corollary.extrapolated or not inWindow)


def lambdaStar(n: int, beta: BetaParam, x: float) -> float:
    """
    Returns the Bernstein optimizer lambda* = (n^(1/beta) / 2) ln t, infinite for s >= 1
    """
    s, regime = normalizedThreshold(n, beta, x)
    if regime != Regime.Interior:
        return math.inf
    return 0.5 * beta.rootN(n) * (math.log1p(s) - math.log1p(-s))


def tstatThreshold(n: int, x: float) -> float:
    """
    Returns x sqrt(n / (n + x^2 - 1)), the self-normalized threshold equivalent to T_n >= x
    """
    requireCount(n, minimum=2)
    requireThreshold(x)
    return math.sqrt(n) * (x / math.hypot(x, math.sqrt(n - 1)))


def boundTstat(n: int, x: float) -> BoundEvaluation:
    """
    Returns B_n(2, x sqrt(n / (n + x^2 - 1))), a bound on P(T_n >= x).

    The normalized threshold s = x / sqrt(x^2 + n - 1) stays below 1 for every finite x, so the
    result is always interior. It is evaluated through ln(t) / 2 = asinh(x / sqrt(n - 1)) without
    forming 1 - s, and tends to 2^-n as x grows.
    """
    requireCount(n, minimum=2)
    requireThreshold(x)
    c = math.sqrt(n - 1)
    r = math.hypot(x, c)
    s = x / r
    halfLogT = math.asinh(x / c)
    if halfLogT < 1.0:
        logValue = n * (logCosh(halfLogT) - s * halfLogT)
    else:
        # ln cosh(h) - s h = (1 - s) h - ln 2 + ln(1 + e^(-2h)), with 1 - s = c^2 / (r (r + x))
        oneMinusS = c * c / (r * (r + x))
        logValue = n * (oneMinusS * halfLogT - LN2 + math.log1p(math.exp(-2.0 * halfLogT)))
    logValue = min(0.0, logValue)
    q = (r + x) / c
    return BoundEvaluation(n, tstatThreshold(n, x), s, q * q, logValue, math.exp(logValue), Regime.Interior)


def twoSidedBound(n: int, beta: BetaParam, x: float) -> float:
    """
    Returns min(1, 2 B_n(beta, x)), a bound on P(max_k |S_k| >= x V_{n,beta})
    """
    return min(1.0, 2.0 * boundBn(n, beta, x).value)


def wangJingBound(x: float) -> float:
    """
    Returns the classical reference bound exp(-x^2 / 2) for the symmetric beta = 2 case
    """
    requireThreshold(x)
    return math.exp(-0.5 * x * x)


def corollaryChain(n: int, beta: BetaParam, x: float) -> CorollaryChain:
    bound = boundBn(n, beta, x).value
    corollary = boundCorollary(n, beta, x).value
    return CorollaryChain(bound, corollary, bound <= corollary)
