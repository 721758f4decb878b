import math
from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self


@dataclass(frozen=True)
class BetaParam:
    """
    The exponent beta > 1 of the normalizer V_{n,beta} = (sum |x_i|^beta)^(1/beta)
    """
    beta: float

    def __post_init__(self):
        if isinstance(self.beta, bool) or not isinstance(self.beta, (int, float)):
            raise ValueError(f"requirement failed: beta must be a real number, got {self.beta!r}")
        if not (math.isfinite(self.beta) and self.beta > 1.0):
            raise ValueError(f"requirement failed: beta must be finite and > 1, got {self.beta}")
        object.__setattr__(self, "beta", float(self.beta))

    def __str__(self):
        return f"{self.beta:g}"

    def rootN(self, n: int) -> float:
        """
        Returns n^(1/beta)
        """
        return n ** (1.0 / self.beta)

    def endpoint(self, n: int) -> float:
        """
        Returns n^((beta-1)/beta), the largest reachable value of S_n / V_{n,beta}
        """
        return n ** ((self.beta - 1.0) / self.beta)

    def isEstablishedRange(self) -> bool:
        """
        True for 1 < beta <= 2, where the closed-form corollary and rescaled bounds are established
        """
        return self.beta <= 2.0

    @classmethod
    def make(cls, beta: str) -> Self:
        try:
            return cls(float(beta))
        except ValueError:
            raise ValueError(f"requirement failed: Invalid beta: '{beta}'. beta must be a real number > 1")
