import math
from typing import Callable

import numpy as np
import structlog

from selfnorm.BernsteinOptimizer import BernsteinOptimizer
from selfnorm.BetaParam import BetaParam
from selfnorm.BoundEvaluation import Regime
from selfnorm.Bounds import (LN2, boundBn, boundBnEntropyForm, boundTstat, corollaryChain, lambdaStar, logCosh,
                             tstatThreshold)
from selfnorm.DistributionSpec import DistributionSpec
from selfnorm.ExactOracle import ExactOracle
from selfnorm.MagnitudeVector import MagnitudeVector
from selfnorm.SelfNormError import SelfNormError
from selfnorm.Simulator import Simulator
from selfnorm.Statistic import Statistic
from selfnormcli.RecordWriter import RecordWriter
from selfnormcli.Records import SuiteResult
from selfnormcli.Sweep import Sweep
from selfnormcli.SweepGrid import SweepGrid

BETAS = [BetaParam(b) for b in (1.1, 1.5, 2.0, 3.0, 10.0)]
PARTIAL_SUMS = (Statistic.RunningMax, Statistic.FinalSum)


def suiteKey(name: str) -> str:
    return " ".join(name.upper().replace("-", " ").replace("_", " ").split())


class Checks:
    """
    Collects the outcome of the individual checks of one suite
    """

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, ok: bool, failure: str):
        self.count += 1
        if not ok:
            self.failures.append(failure)

    def result(self) -> SuiteResult:
        if self.failures:
            extra = f" (+{len(self.failures) - 1} more)" if len(self.failures) > 1 else ""
            detail = self.failures[0] + extra
        else:
            detail = "; ".join(self.notes) if self.notes else "ok"
        return SuiteResult(self.name, not self.failures, self.count, detail)


class VerifySuite:
    """
    Built-in checks of the bounds against each other, the exact oracle and simulation.
    With fast=True trial counts and grids are cut down about tenfold.
    """
    log = structlog.get_logger()

    def __init__(self, oracle: ExactOracle, simulator: Simulator, optimizer: BernsteinOptimizer,
                 writer: RecordWriter, fast: bool = False, seed: int = 42):
        self.oracle = oracle
        self.simulator = simulator
        self.optimizer = optimizer
        self.writer = writer
        self.fast = fast
        self.seed = seed

    def _trials(self, full: int) -> int:
        return full // 10 if self.fast else full

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def _weightedVectors(self, count: int, nMax: int) -> list[MagnitudeVector]:
        # magnitudes in [0.5, 1.5]: comparable sizes, no exact ties
        rng = self._rng()
        return [MagnitudeVector(tuple(rng.uniform(0.5, 1.5, int(rng.integers(2, nMax + 1))))) for _ in range(count)]

    def suites(self) -> dict[str, Callable[[], SuiteResult]]:
        return {
            "FORM EQUIVALENCE": self.formEquivalence,
            "ENDPOINT": self.endpoint,
            "MONOTONE IN X": self.monotoneInX,
            "MONOTONE IN N": self.monotoneInN,
            "DOMINANCE": self.dominance,
            "BERNSTEIN CONSISTENCY": self.bernsteinConsistency,
            "MAJORIZATION": self.majorization,
            "TSTAT RANGE": self.tstatRange,
            "ORACLE BOUND": self.oracleBound,
            "WEIGHTED ORACLE BOUND": self.weightedOracleBound,
            "ENDPOINT EXACTNESS": self.endpointExactness,
            "ZERO REGIME": self.zeroRegime,
            "TWO POINT BERNSTEIN": self.twoPointBernstein,
            "MIRROR SYMMETRY": self.mirrorSymmetry,
            "ORACLE MONOTONE": self.oracleMonotone,
            "EFRON EXACT": self.efronExact,
            "BOUND RESPECT": self.boundRespect,
            "ORACLE AGREEMENT": self.oracleAgreement,
            "DETERMINISM": self.determinism,
            "HEAVY TAIL DECAY": self.heavyTailDecay,
            "EFRON": self.efron,
            "LDP SCALING": self.ldpScaling,
            "ROUND TRIP": self.roundTrip,
            "BYTE IDENTICAL": self.byteIdentical,
        }

    def run(self, names: list[str] | None = None) -> list[SuiteResult]:
        """
        Runs the named suites (all of them when names is empty), in the order given
        """
        suites = self.suites()
        if not names:
            selected = list(suites)
        else:
            selected = [suiteKey(name) for name in names]
            unknown = [name for name in selected if name not in suites]
            if unknown:
                raise ValueError(f"requirement failed: unknown suite(s) {unknown}; known suites are {list(suites)}")
        results = []
        for name in selected:
            self.log.info(f"Running suite {name}")
            try:
                result = suites[name]()
            except SelfNormError as e:
                self.log.error(f"Suite {name} aborted: {e.reason}")
                result = SuiteResult(name, False, 0, f"aborted: {type(e).__name__}: {e.reason}")
            self.log.info(f"Suite {name}: {result.status()} after {result.checks} checks")
            results.append(result)
        return results

    # -- closed-form checks

    def formEquivalence(self) -> SuiteResult:
        checks = Checks("FORM EQUIVALENCE")
        for beta in BETAS:
            for n in range(1, 17 if self.fast else 65):
                for s in (0.01, 0.1, 0.5, 0.9, 0.999, 1.0):
                    x = s * beta.endpoint(n)
                    literal = boundBn(n, beta, x).logValue
                    entropyForm = boundBnEntropyForm(n, beta, x).logValue
                    checks.check(abs(literal - entropyForm) <= 1e-12 * max(1.0, abs(literal)),
                                 f"n={n} beta={beta} s={s}: {literal} vs {entropyForm}")
        return checks.result()

    def endpoint(self) -> SuiteResult:
        checks = Checks("ENDPOINT")
        for beta in BETAS[:4]:
            for n in range(1, 21):
                x = beta.endpoint(n)
                for form in (boundBn, boundBnEntropyForm):
                    e = form(n, beta, x)
                    checks.check(e.regime == Regime.Endpoint and e.value == math.ldexp(1.0, -n)
                                 and abs(e.logValue + n * LN2) <= 2 * math.ulp(n * LN2),
                                 f"{form.__name__} n={n} beta={beta}: {e.value} ({e.regime.value})")
        return checks.result()

    def monotoneInX(self) -> SuiteResult:
        checks = Checks("MONOTONE IN X")
        for beta in BETAS:
            for n in (1, 2, 5, 10, 50, 1000):
                grid = [k / 200 for k in range(1, 201)] + [1.05]
                values = [boundBn(n, beta, s * beta.endpoint(n)).value for s in grid]
                for s, a, b in zip(grid[1:], values, values[1:]):
                    checks.check(b <= a, f"n={n} beta={beta}: bound increases to {b} at s={s}")
        return checks.result()

    def monotoneInN(self) -> SuiteResult:
        checks = Checks("MONOTONE IN N")
        beta = BetaParam(2.0)
        for x in (0.5, 1.0, 2.0):
            limit = math.exp(-0.5 * x * x)
            values = [(n, boundBn(n, beta, x).value) for n in range(math.ceil(x * x), 101 if self.fast else 401)]
            for (n, a), (_, b) in zip(values, values[1:]):
                checks.check(a <= b, f"x={x}: B_{n + 1} = {b} < B_{n} = {a}")
            for n, v in values:
                checks.check(v <= limit * (1.0 + 1e-15), f"x={x}: B_{n} = {v} above exp(-x^2/2) = {limit}")
        chain = [boundBn(n, beta, 1.0).value for n in (1, 4, 16, 100, 1000, 10000, 100000)]
        checks.check(all(a < b for a, b in zip(chain, chain[1:])), f"B_n(2, 1) not increasing: {chain}")
        checks.check(chain[0] == 0.5, f"B_1(2, 1) = {chain[0]}, expected 1/2")
        checks.check(abs(chain[1] - 16 / 27) <= 1e-12, f"B_4(2, 1) = {chain[1]}, expected 16/27")
        checks.check(math.exp(-0.5) - 1e-5 <= chain[-1] <= math.exp(-0.5),
                     f"B_100000(2, 1) = {chain[-1]}, expected within 1e-5 below exp(-1/2)")
        return checks.result()

    def dominance(self) -> SuiteResult:
        checks = Checks("DOMINANCE")
        for beta in BETAS[:4]:
            for n in range(1, 17 if self.fast else 65):
                for s in (0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0):
                    x = s * beta.endpoint(n)
                    chain = corollaryChain(n, beta, x)
                    checks.check(chain.holds, f"n={n} beta={beta} s={s}: B_n = {chain.bound} > corollary {chain.corollary}")
        checks.notes.append("beta=3 cells check the corollary beyond beta <= 2")
        return checks.result()

    def bernsteinConsistency(self) -> SuiteResult:
        checks = Checks("BERNSTEIN CONSISTENCY")
        ns = (1, 2, 4, 8, 16, 32, 64) if self.fast else range(1, 65)
        for beta in BETAS:
            for n in ns:
                for s in (0.01, 0.1, 0.5, 0.9, 0.99):
                    x = s * beta.endpoint(n)
                    numeric = self.optimizer.minimize(n, beta, x)
                    closed = boundBn(n, beta, x).value
                    star = lambdaStar(n, beta, x)
                    checks.check(abs(numeric.objectiveValue - closed) <= 1e-9 * closed,
                                 f"n={n} beta={beta} s={s}: objective {numeric.objectiveValue} vs B_n {closed}")
                    checks.check(abs(numeric.lambdaStar - star) <= 1e-6 * star,
                                 f"n={n} beta={beta} s={s}: lambda {numeric.lambdaStar} vs {star}")
        return checks.result()

    def majorization(self) -> SuiteResult:
        checks = Checks("MAJORIZATION")
        grid = list(np.linspace(-50.0, 50.0, 2001)) + [0.0, 1e-8, 1e-4, 0.5, 0.999, 1.0, 1.001, 700.0]
        for u in map(float, grid):
            checks.check(logCosh(u) <= math.nextafter(0.5 * u * u, math.inf),
                         f"ln cosh({u}) = {logCosh(u)} > {0.5 * u * u}")
        return checks.result()

    def tstatRange(self) -> SuiteResult:
        checks = Checks("TSTAT RANGE")
        for n in range(2, 65):
            for x in np.logspace(-6.0, 6.0, 61):
                threshold = tstatThreshold(n, float(x))
                checks.check(0.0 < threshold <= math.sqrt(n), f"n={n} x={x}: threshold {threshold}")
        return checks.result()

    # -- exact oracle checks

    def _checkOracleBound(self, checks: Checks, mags: MagnitudeVector, beta: BetaParam, label: str):
        n = len(mags)
        for s in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.999, 1.0):
            x = s * beta.endpoint(n)
            exact = self.oracle.exactTail(mags, beta, x, Statistic.RunningMax)
            bound = boundBn(n, beta, x).value
            checks.check(exact.probability <= bound * (1.0 + 1e-12),
                         f"{label} n={n} beta={beta} s={s}: exact {exact} > bound {bound}")

    def oracleBound(self) -> SuiteResult:
        checks = Checks("ORACLE BOUND")
        for beta in BETAS[1:4]:
            for n in range(1, 11 if self.fast else 17):
                self._checkOracleBound(checks, MagnitudeVector.unit(n), beta, "rademacher")
        return checks.result()

    def weightedOracleBound(self) -> SuiteResult:
        checks = Checks("WEIGHTED ORACLE BOUND")
        vectors = self._weightedVectors(10, 10) if self.fast else self._weightedVectors(50, 14)
        for beta in BETAS[2:4]:
            for mags in vectors:
                self._checkOracleBound(checks, mags, beta, "weighted")
        checks.notes.append("unequal magnitudes are checked for beta >= 2 only")
        return checks.result()

    def endpointExactness(self) -> SuiteResult:
        checks = Checks("ENDPOINT EXACTNESS")
        for beta in BETAS[:4]:
            for n in range(1, 13 if self.fast else 21):
                for stat in PARTIAL_SUMS:
                    exact = self.oracle.exactTail(MagnitudeVector.unit(n), beta, beta.endpoint(n), stat)
                    checks.check(exact.hits == 1 and exact.probability == math.ldexp(1.0, -n),
                                 f"n={n} beta={beta} {stat.value}: {exact}, expected 1/{1 << n}")
        return checks.result()

    def zeroRegime(self) -> SuiteResult:
        checks = Checks("ZERO REGIME")
        trials = self._trials(10000)
        for beta in BETAS[1:4]:
            for n in (3, 5, 8):
                x = 1.05 * beta.endpoint(n)
                bound = boundBn(n, beta, x)
                checks.check(bound.value == 0.0 and bound.regime == Regime.Impossible,
                             f"n={n} beta={beta}: bound {bound.value} beyond the endpoint")
                exact = self.oracle.exactTail(MagnitudeVector.unit(n), beta, x)
                checks.check(exact.hits == 0, f"n={n} beta={beta}: oracle {exact} beyond the endpoint")
                for spec in (DistributionSpec.rademacher(), DistributionSpec.gaussian()):
                    estimate = self.simulator.estimateTail(spec, n, beta, x, Statistic.RunningMax, trials, self.seed)
                    checks.check(estimate.hits == 0, f"{spec} n={n} beta={beta}: {estimate.hits} hits beyond the endpoint")
        return checks.result()

    def twoPointBernstein(self) -> SuiteResult:
        checks = Checks("TWO POINT BERNSTEIN")
        for beta in BETAS[1:4]:
            for n in range(1, 9 if self.fast else 13):
                for s in (0.1, 0.3, 0.5, 0.7, 0.9):
                    x = s * beta.endpoint(n)
                    unit = self.oracle.exactTail(MagnitudeVector.unit(n), beta, x, Statistic.FinalSum)
                    objective = self.optimizer.minimize(n, beta, x).objectiveValue
                    checks.check(unit.probability <= objective * (1.0 + 1e-9),
                                 f"n={n} beta={beta} s={s}: exact {unit} > Bernstein {objective}")
                    for a in (0.5, 3.7):
                        scaled = self.oracle.exactTail(MagnitudeVector.constant(n, a), beta, x, Statistic.FinalSum)
                        checks.check(scaled.hits == unit.hits, f"n={n} beta={beta} s={s} a={a}: {scaled} vs {unit}")
        return checks.result()

    def mirrorSymmetry(self) -> SuiteResult:
        checks = Checks("MIRROR SYMMETRY")
        beta = BetaParam(2.0)
        rng = self._rng()
        for n in range(1, 13):
            for mags in (MagnitudeVector.unit(n), MagnitudeVector(tuple(rng.uniform(0.5, 1.5, n)))):
                for stat in PARTIAL_SUMS:
                    for s in (0.2, 0.5, 0.8):
                        x = s * beta.endpoint(n)
                        upper = self.oracle.exactTail(mags, beta, x, stat)
                        lower = self.oracle.exactTail(mags, beta, x, stat, lowerTail=True)
                        checks.check(upper.hits == lower.hits, f"n={n} {stat.value} s={s}: {upper} vs mirrored {lower}")
        return checks.result()

    def oracleMonotone(self) -> SuiteResult:
        checks = Checks("ORACLE MONOTONE")
        grid = [k / 20 for k in range(1, 21)]
        rng = self._rng()
        for beta in BETAS[1:3]:
            for n in (4, 8, 12):
                for mags in (MagnitudeVector.unit(n), MagnitudeVector(tuple(rng.uniform(0.5, 1.5, n)))):
                    hits = [self.oracle.exactTail(mags, beta, s * beta.endpoint(n)).hits for s in grid]
                    for s, a, b in zip(grid[1:], hits, hits[1:]):
                        checks.check(b <= a, f"n={n} beta={beta}: hits increase to {b} at s={s}")
        return checks.result()

    def efronExact(self) -> SuiteResult:
        checks = Checks("EFRON EXACT")
        vectors = [MagnitudeVector.unit(n) for n in range(2, 13)] + self._weightedVectors(8, 10)
        for mags in vectors:
            n = len(mags)
            for x in (0.1, 0.5, 1.0, 2.0, 3.0, 10.0):
                tstat = self.oracle.exactTstatTail(mags, x)
                checks.check(tstat.identityHolds(), f"n={n} x={x}: {tstat.hits} direct vs {tstat.identityHits} via identity")
                selfNormalized = self.oracle.exactTail(mags, BetaParam(2.0), tstatThreshold(n, x), Statistic.FinalSum)
                # the all-plus vector is degenerate but always in the self-normalized event
                expected = tstat.hits + (1 if mags.isUniform() else 0)
                checks.check(selfNormalized.hits == expected,
                             f"n={n} x={x}: final-sum {selfNormalized} vs t-statistic {tstat.hits} hits")
        return checks.result()

    # -- simulation checks

    def boundRespect(self) -> SuiteResult:
        checks = Checks("BOUND RESPECT")
        trials = self._trials(20000)
        seed = self.seed
        general = [DistributionSpec.rademacher(), DistributionSpec.uniform(), DistributionSpec.gaussian(),
                   DistributionSpec.pareto(1.2)]
        equalMagnitudes = [DistributionSpec.rademacher(), DistributionSpec.twoPoint(3.7)]
        cells = [(spec, beta) for beta in BETAS[2:4] for spec in general]
        cells += [(spec, BETAS[1]) for spec in equalMagnitudes]
        for spec, beta in cells:
            for n in (5, 20):
                for s in (0.3, 0.6):
                    x = s * beta.endpoint(n)
                    bound = boundBn(n, beta, x).value
                    for stat in PARTIAL_SUMS:
                        seed += 1
                        estimate = self.simulator.estimateTail(spec, n, beta, x, stat, trials, seed)
                        checks.check(estimate.respects(bound),
                                     f"{spec} n={n} beta={beta} s={s} {stat.value}: {estimate.pHat} > bound {bound}")
        for spec in general[:3]:
            for n in (5, 20):
                for x in (1.0, 2.0, 3.0):
                    seed += 1
                    estimate = self.simulator.estimateTail(spec, n, BetaParam(2.0), x, Statistic.Tstat, trials, seed)
                    bound = boundTstat(n, x).value
                    checks.check(estimate.respects(bound), f"{spec} n={n} tstat x={x}: {estimate.pHat} > bound {bound}")
        estimate = self.simulator.estimateTail(DistributionSpec.gaussian(), 20, BetaParam(2.0), 2.0, Statistic.FinalSum,
                                               self._trials(1000000), self.seed)
        checks.check(estimate.respects(math.exp(-2.0)), f"gaussian n=20 x=2: {estimate.pHat} > exp(-2)")
        checks.notes.append("beta=1.5 is simulated for equal magnitudes only")
        return checks.result()

    def oracleAgreement(self) -> SuiteResult:
        checks = Checks("ORACLE AGREEMENT")
        trials = self._trials(20000)
        rng = self._rng()
        seed = self.seed
        covered = 0
        for n in (6, 10, 14):
            weighted = DistributionSpec.fixedMagnitudes(MagnitudeVector(tuple(rng.uniform(0.5, 1.5, n))))
            for spec in (DistributionSpec.rademacher(), weighted):
                mags = spec.oracleMagnitudes(n)
                for beta in BETAS[1:3]:
                    for s in (0.2, 0.4, 0.6, 0.8):
                        x = s * beta.endpoint(n)
                        seed += 1
                        exact = self.oracle.exactTail(mags, beta, x)
                        estimate = self.simulator.estimateTail(spec, n, beta, x, Statistic.RunningMax, trials, seed)
                        covered += estimate.covers(exact.probability)
                        checks.count += 1
        fraction = covered / checks.count
        if fraction < 0.95:
            checks.failures.append(f"only {covered}/{checks.count} intervals cover the exact probability")
        checks.notes.append(f"{covered}/{checks.count} intervals cover the exact probability")
        return checks.result()

    def determinism(self) -> SuiteResult:
        checks = Checks("DETERMINISM")
        trials = self._trials(30000)
        cases = [(DistributionSpec.gaussian(), Statistic.RunningMax, 1.5),
                 (DistributionSpec.pareto(1.2), Statistic.Tstat, 1.0)]
        for spec, stat, x in cases:
            counts = [(e.hits, e.degenerateCount) for e in
                      (Simulator(workers).estimateTail(spec, 10, BetaParam(2.0), x, stat, trials, self.seed)
                       for workers in (1, 2, 8))]
            checks.check(len(set(counts)) == 1, f"{spec} {stat.value}: counts differ across workers {counts}")
        return checks.result()

    def heavyTailDecay(self) -> SuiteResult:
        checks = Checks("HEAVY TAIL DECAY")
        trials = self._trials(20000)
        spec = DistributionSpec.pareto(1.2)
        beta = BetaParam(1.5)
        estimates = [self.simulator.estimateTail(spec, n, beta, 0.5, Statistic.FinalSum, trials, self.seed)
                     for n in (10, 100, 1000)]
        for n, a, b in zip((100, 1000), estimates, estimates[1:]):
            checks.check(b.ciLow <= a.ciHigh, f"n={n}: estimate {b.pHat} rises above the previous interval {a.ciHigh}")
        return checks.result()

    def efron(self) -> SuiteResult:
        checks = Checks("EFRON")
        trials = self._trials(100000)
        seed = self.seed
        cases = [(DistributionSpec.gaussian(), n, x) for n in (2, 5, 10) for x in (0.7, 1.5)]
        cases += [(DistributionSpec.rademacher(), n, x) for n in range(2, 11) for x in (0.7, 1.0, 1.5)]
        cases += [(DistributionSpec.pareto(1.2), 5, x) for x in (0.7, 1.5)]
        for spec, n, x in cases:
            seed += 1
            violations = self.simulator.efronCheck(spec, n, x, trials, seed)
            checks.check(violations == 0, f"{spec} n={n} x={x}: {violations} trials disagree")
        return checks.result()

    def ldpScaling(self) -> SuiteResult:
        checks = Checks("LDP SCALING")
        c = 0.6
        beta = BetaParam(2.0)
        rates = self.simulator.empiricalLogRate(DistributionSpec.rademacher(), beta, c, [10, 20, 40], 0.5,
                                                self._trials(1000000), self.seed)
        for rate in rates:
            checks.check(rate.respects(c), f"n={rate.n}: rate interval [{rate.rateLower}, {rate.rateUpper}] above {-c * c / 2}")
        exact = self.oracle.exactTail(MagnitudeVector.unit(10), beta, c * 10 ** 0.5)
        checks.check(rates[0].estimate.covers(exact.probability),
                     f"n=10: exact {exact.probability} outside [{rates[0].estimate.ciLow}, {rates[0].estimate.ciHigh}]")
        return checks.result()

    # -- report checks

    def _sweepGrid(self) -> SweepGrid:
        return SweepGrid([4, 8], [BetaParam(1.5), BetaParam(2.0)], [0.5, 1.0], Statistic.RunningMax,
                         DistributionSpec.rademacher(), 2000, self.seed)

    def roundTrip(self) -> SuiteResult:
        checks = Checks("ROUND TRIP")
        rows = Sweep(self.oracle, self.simulator, self.optimizer).run(self._sweepGrid())
        parsed = RecordWriter.parseCsv(self.writer.renderCsv(rows))
        checks.check(len(parsed) == len(rows), f"{len(parsed)} rows read back, {len(rows)} written")
        tolerance = 10.0 ** (1 - self.writer.significantDigits)
        for row, fields in zip(rows, parsed):
            for key, value in row.to_dict().items():
                back = RecordWriter.parseReal(fields[key])
                if value is None or back is None:
                    checks.check(value is None and back is None, f"{key}: {value} read back as {fields[key]!r}")
                else:
                    checks.check(abs(back - value) <= tolerance * abs(value), f"{key}: {value} read back as {back}")
        return checks.result()

    def byteIdentical(self) -> SuiteResult:
        checks = Checks("BYTE IDENTICAL")
        grid = self._sweepGrid()
        outputs = [self.writer.renderCsv(Sweep(ExactOracle(workers, 64), Simulator(workers), self.optimizer).run(grid))
                   for workers in (1, 2, 8)]
        checks.check(len(set(outputs)) == 1, "sweep output differs across worker counts")
        return checks.result()
