from dataclasses import dataclass
from fractions import Fraction


@dataclass
class ExactTail:
    """
    An exact tail probability hits / total over all 2^n equally likely sign vectors
    """
    hits: int
    total: int
    # sign vectors excluded from the event because the statistic is undefined for them
    degenerate: int = 0

    def __post_init__(self):
        if self.total < 1 or self.total & (self.total - 1) != 0:
            raise ValueError(f"requirement failed: total must be a power of two, got {self.total}")
        if not 0 <= self.hits <= self.total:
            raise ValueError(f"requirement failed: hits must be in [0, {self.total}], got {self.hits}")

    def __str__(self):
        return f"{self.hits}/{self.total}"

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.hits, self.total)

    @property
    def probability(self) -> float:
        return self.hits / self.total


@dataclass
class ExactTstatTail(ExactTail):
    """
    Exact P(T_n >= x), counted both directly and through the equivalent self-normalized event
    """
    identityHits: int = 0

    def identityHolds(self) -> bool:
        return self.hits == self.identityHits
