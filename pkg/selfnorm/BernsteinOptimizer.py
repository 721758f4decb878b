import math
from typing import Callable

import structlog

from selfnorm.BetaParam import BetaParam
from selfnorm.BoundEvaluation import BernsteinResult, Regime
from selfnorm.Bounds import logCosh, normalizedThreshold
from selfnorm.SelfNormError import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BernsteinOptimizer:
    """
    Minimizes the Bernstein objective f(lambda) = -lambda x + n ln cosh(lambda / n^(1/beta))
    by golden-section search, independently of the closed-form minimizer.
    """
    log = structlog.get_logger()

    def __init__(self, tolerance: float = 1e-10, maxIterations: int = 200):
        if not tolerance > 0.0:
            raise ValueError(f"requirement failed: tolerance must be positive, got {tolerance}")
        self.tolerance = tolerance
        self.maxIterations = maxIterations

    @classmethod
    def fromSettings(cls, settings):
        return cls(settings.bernsteinTolerance, settings.bernsteinMaxIterations)

    @staticmethod
    def objective(n: int, beta: BetaParam, x: float) -> Callable[[float], float]:
        rootN = beta.rootN(n)
        return lambda lam: -lam * x + n * logCosh(lam / rootN)

    def _bracket(self, n: int, beta: BetaParam, x: float) -> tuple[float, int]:
        # f is convex with f'(0) = -x < 0; double until f' turns positive
        rootN = beta.rootN(n)
        upper = rootN
        doublings = 0
        while -x + (n / rootN) * math.tanh(upper / rootN) <= 0.0:
            upper *= 2.0
            doublings += 1
            if doublings >= self.maxIterations:
                raise ConvergenceError(f"could not bracket the Bernstein minimizer for n={n}, beta={beta}, x={x}")
        return upper, doublings

    def minimize(self, n: int, beta: BetaParam, x: float) -> BernsteinResult:
        """
        Finds the minimizer of the Bernstein objective.

        Args:
            n: sample size
            beta: normalizer exponent
            x: threshold, strictly inside (0, n^((beta-1)/beta))

        Returns:
            lambda*, min(1, exp(f(lambda*))) and the iterations used
        """
        _, regime = normalizedThreshold(n, beta, x)
        if regime != Regime.Interior:
            raise ValueError(
                f"requirement failed: the Bernstein objective has no finite minimizer at x={x} ({regime.value} regime)")
        f = self.objective(n, beta, x)
        b, iterations = self._bracket(n, beta, x)
        a = 0.0
        c = b - INV_PHI * (b - a)
        d = a + INV_PHI * (b - a)
        fc, fd = f(c), f(d)
        while b - a > self.tolerance:
            if iterations >= self.maxIterations:
                raise ConvergenceError(
                    f"golden-section search did not converge within {self.maxIterations} iterations for n={n}, beta={beta}, x={x}")
            iterations += 1
            if fc < fd:
                b, d, fd = d, c, fc
                c = b - INV_PHI * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + INV_PHI * (b - a)
                fd = f(d)
        lam = 0.5 * (a + b)
        value = min(1.0, math.exp(min(0.0, f(lam))))
        self.log.debug(f"Bernstein minimizer for n={n}, beta={beta}, x={x}: lambda={lam} after {iterations} iterations")
        return BernsteinResult(lam, value, iterations)


def bernsteinNumeric(n: int, beta: BetaParam, x: float, tol: float = 1e-10) -> BernsteinResult:
    return BernsteinOptimizer(tol).minimize(n, beta, x)
