import math
from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import numpy as np

from selfnorm.SelfNormError import BudgetExceeded

# 2^30 sign vectors is the largest exact enumeration
MAX_LENGTH = 30


@dataclass
class MagnitudeVector:
    """
    Nonnegative magnitudes a_1..a_n; the oracle enumerates every sign pattern eps_i a_i
    """
    magnitudes: tuple[float, ...]

    def __post_init__(self):
        self.magnitudes = tuple(float(a) for a in self.magnitudes)
        n = len(self.magnitudes)
        if n == 0:
            raise ValueError("requirement failed: a magnitude vector needs at least one entry")
        if n > MAX_LENGTH:
            raise BudgetExceeded(
                f"exact enumeration of n={n} needs 2^{n} sign vectors, more than the 2^{MAX_LENGTH} budget")
        if not all(math.isfinite(a) and a >= 0.0 for a in self.magnitudes):
            raise ValueError("requirement failed: magnitudes must be finite and nonnegative")
        if not any(a > 0.0 for a in self.magnitudes):
            raise ValueError("requirement failed: at least one magnitude must be positive")

    def __len__(self):
        return len(self.magnitudes)

    def asArray(self) -> np.ndarray:
        return np.array(self.magnitudes, dtype=np.float64)

    def isUniform(self) -> bool:
        return all(a == self.magnitudes[0] for a in self.magnitudes)

    @classmethod
    def unit(cls, n: int) -> Self:
        return cls((1.0,) * n)

    @classmethod
    def constant(cls, n: int, a: float) -> Self:
        return cls((a,) * n)

    @classmethod
    def fromFile(cls, path: str) -> Self:
        """
        Reads one magnitude per line; blank lines and lines starting with # are skipped
        """
        with open(path) as f:
            lines = [line.strip() for line in f]
        values = []
        for line in lines:
            if line == "" or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ValueError(f"requirement failed: Invalid magnitude '{line}' in {path}")
        return cls(tuple(values))
