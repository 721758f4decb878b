import math
from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np

from selfnorm.EnumUtil import LowerCaseEnum
from selfnorm.MagnitudeVector import MagnitudeVector


class DistributionKind(LowerCaseEnum):
    Rademacher = "rademacher"
    TwoPoint = "twopoint"
    Uniform = "uniform"
    Gaussian = "gaussian"
    Pareto = "pareto"
    Magnitudes = "mags"


@dataclass
class DistributionSpec:
    """
    A symmetric distribution for the observations x_i.

    Args:
        kind: the distribution family
        a: the point mass magnitude of twopoint (+a or -a with probability 1/2 each)
        tailIndex: the tail index of pareto, P(|X| > u) = u^-tailIndex for u >= 1
        mags: fixed magnitudes a_i with independent random signs
    """
    kind: DistributionKind
    a: float | None = None
    tailIndex: float | None = None
    mags: MagnitudeVector | None = None

    def __post_init__(self):
        match self.kind:
            case DistributionKind.TwoPoint:
                if self.a is None or not (math.isfinite(self.a) and self.a > 0.0):
                    raise ValueError(f"requirement failed: twopoint needs a finite magnitude a > 0, got {self.a}")
            case DistributionKind.Pareto:
                if self.tailIndex is None or not (math.isfinite(self.tailIndex) and self.tailIndex > 0.0):
                    raise ValueError(f"requirement failed: pareto needs a finite tail index > 0, got {self.tailIndex}")
            case DistributionKind.Magnitudes:
                if self.mags is None:
                    raise ValueError("requirement failed: mags needs a magnitude vector")

    def __str__(self):
        match self.kind:
            case DistributionKind.TwoPoint:
                return f"twopoint:{self.a:g}"
            case DistributionKind.Pareto:
                return f"pareto:{self.tailIndex:g}"
            case DistributionKind.Magnitudes:
                return "mags:" + ",".join(f"{a:g}" for a in self.mags.magnitudes)
            case _:
                return self.kind.value

    @classmethod
    def rademacher(cls) -> Self:
        return cls(DistributionKind.Rademacher)

    @classmethod
    def twoPoint(cls, a: float) -> Self:
        return cls(DistributionKind.TwoPoint, a=a)

    @classmethod
    def uniform(cls) -> Self:
        return cls(DistributionKind.Uniform)

    @classmethod
    def gaussian(cls) -> Self:
        return cls(DistributionKind.Gaussian)

    @classmethod
    def pareto(cls, tailIndex: float) -> Self:
        return cls(DistributionKind.Pareto, tailIndex=tailIndex)

    @classmethod
    def fixedMagnitudes(cls, mags: MagnitudeVector) -> Self:
        return cls(DistributionKind.Magnitudes, mags=mags)

    @classmethod
    def make(cls, spec: str) -> Self:
        """
        Parses rademacher, twopoint:A, uniform, gaussian, pareto:TAIL or mags:FILE
        """
        match spec.strip().split(":", 1):
            case ["rademacher"]:
                return cls.rademacher()
            case ["uniform"]:
                return cls.uniform()
            case ["gaussian"]:
                return cls.gaussian()
            case ["twopoint", a]:
                return cls.twoPoint(cls._parseFloat(a, spec))
            case ["pareto", tail]:
                return cls.pareto(cls._parseFloat(tail, spec))
            case ["mags", path]:
                return cls.fixedMagnitudes(MagnitudeVector.fromFile(path))
            case _:
                raise ValueError(
                    f"requirement failed: Invalid distribution: '{spec}'. Expected one of rademacher, twopoint:A, uniform, gaussian, pareto:TAIL, mags:FILE")

    @staticmethod
    def _parseFloat(value: str, spec: str) -> float:
        try:
            return float(value)
        except ValueError:
            raise ValueError(f"requirement failed: Invalid number '{value}' in distribution '{spec}'")

    def infiniteMoment(self, beta: float) -> bool:
        """
        True when E|X|^beta is infinite
        """
        return self.kind == DistributionKind.Pareto and self.tailIndex <= beta

    def hasExactOracle(self, n: int) -> bool:
        """
        True when every sample of length n is a sign pattern of fixed magnitudes
        """
        match self.kind:
            case DistributionKind.Rademacher | DistributionKind.TwoPoint:
                return True
            case DistributionKind.Magnitudes:
                return len(self.mags) == n
            case _:
                return False

    def oracleMagnitudes(self, n: int) -> MagnitudeVector:
        match self.kind:
            case DistributionKind.Rademacher:
                return MagnitudeVector.unit(n)
            case DistributionKind.TwoPoint:
                return MagnitudeVector.constant(n, self.a)
            case DistributionKind.Magnitudes if len(self.mags) == n:
                return self.mags
            case _:
                raise ValueError(f"requirement failed: {self} has no exact oracle for n={n}")

    def sample(self, rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
        """
        Draws a trials x n array of independent observations
        """
        size = (trials, n)
        match self.kind:
            case DistributionKind.Rademacher:
                return self._signs(rng, size)
            case DistributionKind.TwoPoint:
                return self.a * self._signs(rng, size)
            case DistributionKind.Uniform:
                return rng.uniform(-1.0, 1.0, size)
            case DistributionKind.Gaussian:
                return rng.standard_normal(size)
            case DistributionKind.Pareto:
                magnitudes = (1.0 - rng.random(size)) ** (-1.0 / self.tailIndex)
                return self._signs(rng, size) * magnitudes
            case DistributionKind.Magnitudes:
                if len(self.mags) != n:
                    raise ValueError(f"requirement failed: {len(self.mags)} fixed magnitudes cannot produce samples of length {n}")
                return self._signs(rng, size) * self.mags.asArray()

    @staticmethod
    def _signs(rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
        return 2.0 * rng.integers(0, 2, size=size) - 1.0
