import math

import structlog

from selfnorm.BernsteinOptimizer import BernsteinOptimizer
from selfnorm.BetaParam import BetaParam
from selfnorm.BoundEvaluation import BoundEvaluation
from selfnorm.Bounds import boundBn, boundCorollary, boundTstat, lambdaStar, tstatThreshold
from selfnorm.ExactOracle import ExactOracle
from selfnorm.MagnitudeVector import MAX_LENGTH, MagnitudeVector
from selfnorm.Simulator import Simulator
from selfnorm.Statistic import Statistic
from selfnormcli.Records import SweepRow
from selfnormcli.SweepGrid import SweepGrid

BETA_TSTAT = BetaParam(2.0)


class Sweep:
    """
    Evaluates bounds, the exact oracle and simulation over every cell of a grid
    """
    log = structlog.get_logger()

    def __init__(self, oracle: ExactOracle, simulator: Simulator, optimizer: BernsteinOptimizer):
        self.oracle = oracle
        self.simulator = simulator
        self.optimizer = optimizer

    def _oracleMagnitudes(self, grid: SweepGrid, n: int) -> MagnitudeVector | None:
        if n > MAX_LENGTH:
            return None
        if grid.spec is None:
            return MagnitudeVector.unit(n)
        if grid.spec.hasExactOracle(n):
            return grid.spec.oracleMagnitudes(n)
        return None

    def _exact(self, grid: SweepGrid, n: int, beta: BetaParam, x: float) -> float | None:
        mags = self._oracleMagnitudes(grid, n)
        if mags is None:
            return None
        if grid.stat == Statistic.Tstat:
            return self.oracle.exactTstatTail(mags, x).probability
        return self.oracle.exactTail(mags, beta, x, grid.stat).probability

    def _bernstein(self, n: int, beta: BetaParam, evaluation: BoundEvaluation) -> float | None:
        if not math.isfinite(lambdaStar(n, beta, evaluation.x)):
            return None
        return self.optimizer.minimize(n, beta, evaluation.x).objectiveValue

    def row(self, grid: SweepGrid, n: int, beta: BetaParam, s: float) -> SweepRow:
        if grid.stat == Statistic.Tstat:
            x = s
            beta = BETA_TSTAT
            evaluation = boundTstat(n, x)
            corollary = boundCorollary(n, beta, tstatThreshold(n, x)).value
        else:
            x = s * beta.endpoint(n)
            evaluation = boundBn(n, beta, x)
            corollary = boundCorollary(n, beta, x).value
        estimate = None
        if grid.spec is not None:
            estimate = self.simulator.estimateTail(grid.spec, n, beta, x, grid.stat, grid.trials, grid.seed)
        return SweepRow(
            n=n,
            beta=beta.beta,
            s=evaluation.s,
            x=x,
            boundBn=evaluation.value,
            boundCorollary=corollary,
            bernsteinNumeric=self._bernstein(n, beta, evaluation),
            oracleExact=self._exact(grid, n, beta, x),
            mcPHat=estimate.pHat if estimate else None,
            mcCiLow=estimate.ciLow if estimate else None,
            mcCiHigh=estimate.ciHigh if estimate else None,
            trials=grid.trials if estimate else None,
            seed=grid.seed if estimate else None,
        )

    def run(self, grid: SweepGrid) -> list[SweepRow]:
        cells = grid.cells()
        self.log.info(f"Sweeping {len(cells)} cells ({grid.stat.value}, dist={grid.spec})")
        return [self.row(grid, n, beta, s) for n, beta, s in cells]
