from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

from pyhocon import ConfigFactory, ConfigTree

from selfnorm.BetaParam import BetaParam
from selfnorm.DistributionSpec import DistributionSpec
from selfnorm.Statistic import Statistic


def parseList(values: str, parse, name: str) -> list:
    """
    Parses a comma separated command line list
    """
    try:
        return [parse(v.strip()) for v in values.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"requirement failed: Invalid {name} list: '{values}'")


@dataclass
class SweepGrid:
    """
    The cartesian grid of a sweep. For tstat sweeps sValues lists t-statistic thresholds x
    and every cell is evaluated at beta = 2.
    """
    nValues: list[int]
    betaValues: list[BetaParam]
    sValues: list[float]
    stat: Statistic = Statistic.RunningMax
    spec: DistributionSpec | None = None
    trials: int = 100000
    seed: int = 42

    def __post_init__(self):
        if not (self.nValues and self.betaValues and self.sValues):
            raise ValueError("requirement failed: a sweep grid needs at least one n, beta and s")
        if any(isinstance(n, bool) or not isinstance(n, int) or n < 1 for n in self.nValues):
            raise ValueError(f"requirement failed: n values must be positive integers, got {self.nValues}")
        if self.stat == Statistic.Tstat:
            if any(n < 2 for n in self.nValues):
                raise ValueError("requirement failed: tstat sweeps need n >= 2")
            if any(not s > 0.0 for s in self.sValues):
                raise ValueError(f"requirement failed: t-statistic thresholds must be positive, got {self.sValues}")
        elif any(not 0.0 < s <= 1.0 for s in self.sValues):
            raise ValueError(f"requirement failed: s values must be in (0, 1], got {self.sValues}")
        if list(self.sValues) != sorted(self.sValues):
            raise ValueError(f"requirement failed: s values must be sorted ascending, got {self.sValues}")
        if self.spec is not None and self.spec.mags is not None and any(n != len(self.spec.mags) for n in self.nValues):
            raise ValueError(f"requirement failed: {len(self.spec.mags)} fixed magnitudes only support n={len(self.spec.mags)}")
        if self.trials < 1:
            raise ValueError(f"requirement failed: trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"requirement failed: seed must be an unsigned 64 bit integer, got {self.seed}")

    def cells(self) -> list[tuple[int, BetaParam, float]]:
        return [(n, beta, s) for beta in self.betaValues for n in self.nValues for s in self.sValues]

    @classmethod
    def make(cls, n: str, beta: str, s: str, stat: str = "running-max", dist: str | None = None,
             trials: int = 100000, seed: int = 42) -> Self:
        return cls(
            nValues=parseList(n, int, "n"),
            betaValues=parseList(beta, BetaParam.make, "beta"),
            sValues=parseList(s, float, "s"),
            stat=Statistic.fromString(stat),
            spec=DistributionSpec.make(dist) if dist else None,
            trials=trials,
            seed=seed,
        )

    @classmethod
    def fromConfig(cls, config: ConfigTree, trials: int, seed: int) -> Self:
        """
        Reads a grid from a HOCON tree with keys n, beta, s and the optional stat, dist, trials and seed
        """
        return cls(
            nValues=[int(n) for n in config.get_list("n")],
            betaValues=[BetaParam(float(b)) for b in config.get_list("beta")],
            sValues=[float(s) for s in config.get_list("s")],
            stat=Statistic.fromString(config.get_string("stat", "running-max")),
            spec=DistributionSpec.make(config.get_string("dist")) if "dist" in config else None,
            trials=int(config.get_float("trials", trials)),
            seed=config.get_int("seed", seed),
        )

    @classmethod
    def fromFile(cls, path: str, trials: int, seed: int) -> Self:
        return cls.fromConfig(ConfigFactory.parse_file(path), trials, seed)
