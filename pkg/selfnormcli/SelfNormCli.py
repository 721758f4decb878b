import argparse
import logging
import math
import sys

import structlog

from selfnorm.BernsteinOptimizer import BernsteinOptimizer
from selfnorm.BetaParam import BetaParam
from selfnorm.Bounds import (boundBn, boundBnEntropyForm, boundCorollary, boundRescaled, boundTstat, lambdaStar,
                             twoSidedBound, wangJingBound)
from selfnorm.DistributionSpec import DistributionSpec
from selfnorm.ExactOracle import ExactOracle
from selfnorm.MagnitudeVector import MagnitudeVector
from selfnorm.SelfNormError import SelfNormError
from selfnorm.Settings import Settings
from selfnorm.Simulator import MIN_HITS, Simulator
from selfnorm.Statistic import Statistic
from selfnormcli.RecordWriter import OutputFormat, RecordWriter
from selfnormcli.Records import BoundRecord, OracleRecord, SimulateRecord
from selfnormcli.Sweep import Sweep
from selfnormcli.SweepGrid import SweepGrid, parseList
from selfnormcli.VerifySuite import VerifySuite

log = structlog.get_logger()

BOUND_KINDS = ["bn", "entropy", "corollary", "bernstein", "tstat", "two-sided", "rescaled"]


def configureLogging(verbose: bool):
    structlog.configure(
        processors=[structlog.processors.add_log_level, structlog.dev.ConsoleRenderer(colors=False)],
        wrapper_class=structlog.make_filtering_bound_logger(logging.INFO if verbose else logging.WARNING),
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
    )


def _threshold(args, n: int, beta: BetaParam) -> float:
    """
    Returns --x, or --s scaled by the endpoint n^((beta-1)/beta)
    """
    if args.x is not None:
        return args.x
    if not 0.0 < args.s <= 1.0:
        raise ValueError(f"requirement failed: s must be in (0, 1], got {args.s}")
    return args.s * beta.endpoint(n)


def _emit(args, settings: Settings, records: list) -> int:
    writer = RecordWriter(settings.significantDigits)
    text = writer.write(records, OutputFormat.fromString(args.format), args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _logOf(value: float) -> float:
    return math.log(value) if value > 0.0 else -math.inf


def _boundRecord(kind: str, args, n: int, beta: BetaParam, optimizer: BernsteinOptimizer) -> BoundRecord:
    match kind:
        case "bn" | "entropy":
            x = _threshold(args, n, beta)
            e = boundBn(n, beta, x) if kind == "bn" else boundBnEntropyForm(n, beta, x)
            return BoundRecord(kind, n, beta.beta, x, e.s, e.t, e.value, e.logValue, e.regime.value,
                               lambdaStar=lambdaStar(n, beta, x), extrapolated=False,
                               twoSided=twoSidedBound(n, beta, x),
                               wangJing=wangJingBound(x) if beta.beta == 2.0 else None)
        case "bernstein":
            x = _threshold(args, n, beta)
            result = optimizer.minimize(n, beta, x)
            return BoundRecord(kind, n, beta.beta, x, None, None, result.objectiveValue, _logOf(result.objectiveValue),
                               lambdaStar=result.lambdaStar)
        case "two-sided":
            x = _threshold(args, n, beta)
            value = twoSidedBound(n, beta, x)
            return BoundRecord(kind, n, beta.beta, x, None, None, value, _logOf(value))
        case "corollary":
            x = _threshold(args, n, beta)
            e = boundCorollary(n, beta, x)
            return BoundRecord(kind, n, beta.beta, x, None, None, e.value, e.logValue, extrapolated=e.extrapolated)
        case "rescaled":
            if args.alpha is None:
                raise ValueError("requirement failed: the rescaled bound needs --alpha")
            x = _threshold(args, n, beta)
            e = boundRescaled(n, beta, x, args.alpha)
            return BoundRecord(kind, n, beta.beta, x, None, None, e.value, e.logValue, extrapolated=e.extrapolated)
        case "tstat":
            if args.x is None:
                raise ValueError("requirement failed: the t-statistic bound needs --x")
            e = boundTstat(n, args.x)
            return BoundRecord(kind, n, 2.0, args.x, e.s, e.t, e.value, e.logValue, e.regime.value)


def _applicableKinds(args, beta: BetaParam) -> list[str]:
    """
    The kinds printed by --kind all: those that are defined for the given flags
    """
    kinds = ["bn", "entropy", "corollary", "two-sided"]
    if math.isfinite(lambdaStar(args.n, beta, _threshold(args, args.n, beta))):
        kinds.append("bernstein")
    if args.x is not None and args.n >= 2:
        kinds.append("tstat")
    if args.alpha is not None:
        kinds.append("rescaled")
    return kinds


def cmdBound(args, settings: Settings) -> int:
    beta = BetaParam(args.beta)
    kinds = _applicableKinds(args, beta) if args.kind == "all" else [args.kind]
    optimizer = BernsteinOptimizer.fromSettings(settings)
    records = [_boundRecord(kind, args, args.n, beta, optimizer) for kind in kinds]
    for r in records:
        if r.extrapolated:
            log.warning(f"{r.kind} bound at beta={beta}, n={r.n} is evaluated outside its established range")
    return _emit(args, settings, records)


def _magnitudes(args, n: int) -> MagnitudeVector:
    if args.dist is None:
        return MagnitudeVector.unit(n)
    return DistributionSpec.make(args.dist).oracleMagnitudes(n)


def cmdOracle(args, settings: Settings) -> int:
    oracle = ExactOracle.fromSettings(settings)
    stat = Statistic.fromString(args.stat)
    mags = _magnitudes(args, args.n)
    if stat == Statistic.Tstat:
        if args.x is None:
            raise ValueError("requirement failed: the t-statistic oracle needs --x")
        tail = oracle.exactTstatTail(mags, args.x)
        record = OracleRecord(args.n, None, args.x, stat.value, False, tail.hits, tail.total, tail.probability,
                              boundTstat(args.n, args.x).value, tail.degenerate, tail.identityHits)
    else:
        beta = BetaParam(args.beta)
        x = _threshold(args, args.n, beta)
        tail = oracle.exactTail(mags, beta, x, stat, args.lowerTail)
        record = OracleRecord(args.n, beta.beta, x, stat.value, args.lowerTail, tail.hits, tail.total,
                              tail.probability, boundBn(args.n, beta, x).value)
    return _emit(args, settings, [record])


def cmdSimulate(args, settings: Settings) -> int:
    simulator = Simulator.fromSettings(settings)
    spec = DistributionSpec.make(args.dist)
    stat = Statistic.fromString(args.stat)
    trials = args.trials if args.trials is not None else settings.trials
    seed = args.seed if args.seed is not None else settings.seed
    if stat == Statistic.Tstat:
        if args.x is None:
            raise ValueError("requirement failed: t-statistic simulation needs --x")
        beta, x = BetaParam(2.0), args.x
        bound = boundTstat(args.n, x).value
        corollary = None
    else:
        beta = BetaParam(args.beta)
        x = _threshold(args, args.n, beta)
        bound = boundBn(args.n, beta, x).value
        corollary = boundCorollary(args.n, beta, x).value
    estimate = simulator.estimateTail(spec, args.n, beta, x, stat, trials, seed)
    if estimate.hits < MIN_HITS:
        log.warning(f"only {estimate.hits} hits in {trials} trials; the estimate is unreliable")
    record = SimulateRecord(str(spec), args.n, None if stat == Statistic.Tstat else beta.beta, x, stat.value,
                            estimate.hits, estimate.trials, estimate.pHat, estimate.ciLow, estimate.ciHigh, seed,
                            estimate.degenerateCount, bound, corollary, "PASS" if estimate.respects(bound) else "FAIL")
    return _emit(args, settings, [record])


def _sweepGrid(args, settings: Settings) -> SweepGrid:
    trials = args.trials if args.trials is not None else settings.trials
    seed = args.seed if args.seed is not None else settings.seed
    if args.grid is not None:
        return SweepGrid.fromFile(args.grid, trials, seed)
    if args.n is None or args.s is None:
        raise ValueError("requirement failed: sweep needs --grid or both --n and --s")
    return SweepGrid(
        nValues=parseList(args.n, int, "n"),
        betaValues=parseList(args.beta, BetaParam.make, "beta"),
        sValues=parseList(args.s, float, "s"),
        stat=Statistic.fromString(args.stat),
        spec=DistributionSpec.make(args.dist) if args.dist else None,
        trials=trials,
        seed=seed,
    )


def cmdSweep(args, settings: Settings) -> int:
    sweep = Sweep(ExactOracle.fromSettings(settings), Simulator.fromSettings(settings),
                  BernsteinOptimizer.fromSettings(settings))
    return _emit(args, settings, sweep.run(_sweepGrid(args, settings)))


def cmdVerify(args, settings: Settings) -> int:
    suite = VerifySuite(ExactOracle.fromSettings(settings), Simulator.fromSettings(settings),
                        BernsteinOptimizer.fromSettings(settings), RecordWriter(settings.significantDigits),
                        fast=args.fast, seed=settings.seed)
    results = suite.run(args.suite)
    width = max(len(r.suite) for r in results)
    lines = [f"{'SUITE':<{width}}  STATUS  CHECKS  DETAIL"]
    lines += [f"{r.suite:<{width}}  {r.status():<6}  {r.checks:>6}  {r.detail}" for r in results]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="config", default=None, help="HOCON file overriding the default settings")
    common.add_argument("-v", "--verbose", dest="verbose", action="store_true", help="log progress to stderr")

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", dest="format", choices=OutputFormat.list(), default="csv")
    output.add_argument("--out", dest="out", default=None, help="output file (default: stdout)")

    def threshold(p: argparse.ArgumentParser):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--x", dest="x", type=float, help="threshold x > 0")
        group.add_argument("--s", dest="s", type=float, help="normalized threshold s in (0, 1]")

    parser = argparse.ArgumentParser(prog="selfnorm",
                                     description="Tail bounds for self-normalized sums of symmetric random variables")
    commands = parser.add_subparsers(dest="command", required=True)

    bound = commands.add_parser("bound", parents=[common, output], help="evaluate closed-form bounds")
    bound.add_argument("--n", dest="n", type=int, required=True)
    bound.add_argument("--beta", dest="beta", type=float, default=2.0)
    threshold(bound)
    bound.add_argument("--kind", dest="kind", choices=BOUND_KINDS + ["all"], default="bn")
    bound.add_argument("--alpha", dest="alpha", type=float, default=None, help="rescaling exponent")
    bound.set_defaults(func=cmdBound)

    oracle = commands.add_parser("oracle", parents=[common, output], help="exact tail by sign enumeration")
    oracle.add_argument("--n", dest="n", type=int, required=True)
    oracle.add_argument("--beta", dest="beta", type=float, default=2.0)
    threshold(oracle)
    oracle.add_argument("--stat", dest="stat", choices=Statistic.list(), default=Statistic.RunningMax.value)
    oracle.add_argument("--dist", dest="dist", default=None, help="rademacher (default), twopoint:A or mags:FILE")
    oracle.add_argument("--lower-tail", dest="lowerTail", action="store_true", help="count the mirrored event")
    oracle.set_defaults(func=cmdOracle)

    simulate = commands.add_parser("simulate", parents=[common, output], help="Monte Carlo tail estimate")
    simulate.add_argument("--dist", dest="dist", required=True,
                          help="rademacher, twopoint:A, uniform, gaussian, pareto:TAIL or mags:FILE")
    simulate.add_argument("--n", dest="n", type=int, required=True)
    simulate.add_argument("--beta", dest="beta", type=float, default=2.0)
    threshold(simulate)
    simulate.add_argument("--stat", dest="stat", choices=Statistic.list(), default=Statistic.RunningMax.value)
    simulate.add_argument("--trials", dest="trials", type=int, default=None)
    simulate.add_argument("--seed", dest="seed", type=int, default=None)
    simulate.set_defaults(func=cmdSimulate)

    sweep = commands.add_parser("sweep", parents=[common, output], help="evaluate a grid of cells")
    sweep.add_argument("--grid", dest="grid", default=None, help="HOCON grid file")
    sweep.add_argument("--n", dest="n", default=None, help="comma separated sample sizes")
    sweep.add_argument("--beta", dest="beta", default="2", help="comma separated beta values")
    sweep.add_argument("--s", dest="s", default=None, help="comma separated normalized thresholds")
    sweep.add_argument("--stat", dest="stat", choices=Statistic.list(), default=Statistic.RunningMax.value)
    sweep.add_argument("--dist", dest="dist", default=None, help="distribution to simulate (none: no simulation)")
    sweep.add_argument("--trials", dest="trials", type=int, default=None)
    sweep.add_argument("--seed", dest="seed", type=int, default=None)
    sweep.set_defaults(func=cmdSweep)

    verify = commands.add_parser("verify", parents=[common], help="run the built-in verification suites")
    verify.add_argument("--fast", dest="fast", action="store_true", help="about ten times fewer trials and cells")
    verify.add_argument("--suite", dest="suite", action="append", default=None, help="suite to run (repeatable)")
    verify.set_defaults(func=cmdVerify)
    return parser


def main(argv: list[str] | None = None) -> int:
    """
    Runs the command line tool.

    Returns:
        0 on success, 1 when a verification suite fails, 2 on usage or input errors
    """
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    configureLogging(args.verbose)
    try:
        return args.func(args, Settings.load(args.config))
    except (ValueError, KeyError, SelfNormError, OSError) as e:
        sys.stderr.write(f"selfnorm: error: {e}\n")
        return 2
    except Exception as e:
        log.exception(f"internal error: {e}")
        return 2


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
