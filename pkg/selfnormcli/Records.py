from dataclasses import dataclass

from dataclasses_json import LetterCase, dataclass_json


@dataclass_json(letter_case=LetterCase.SNAKE)
@dataclass
class BoundRecord:
    kind: str
    n: int
    beta: float | None
    x: float
    s: float | None
    t: float | None
    value: float
    logValue: float
    regime: str | None = None
    lambdaStar: float | None = None
    extrapolated: bool | None = None
    twoSided: float | None = None
    wangJing: float | None = None


@dataclass_json(letter_case=LetterCase.SNAKE)
@dataclass
class OracleRecord:
    n: int
    beta: float | None
    x: float
    stat: str
    lowerTail: bool
    hits: int
    total: int
    probability: float
    bound: float
    degenerate: int = 0
    identityHits: int | None = None


@dataclass_json(letter_case=LetterCase.SNAKE)
@dataclass
class SimulateRecord:
    dist: str
    n: int
    beta: float | None
    x: float
    stat: str
    hits: int
    trials: int
    pHat: float
    ciLow: float
    ciHigh: float
    seed: int
    degenerateCount: int
    bound: float
    boundCorollary: float | None
    respect: str


@dataclass_json(letter_case=LetterCase.SNAKE)
@dataclass
class SweepRow:
    """
    One grid cell of a sweep; columns without a value (no oracle, no simulation) are None
    """
    n: int
    beta: float
    s: float
    x: float
    boundBn: float
    boundCorollary: float
    bernsteinNumeric: float | None
    oracleExact: float | None
    mcPHat: float | None
    mcCiLow: float | None
    mcCiHigh: float | None
    trials: int | None
    seed: int | None


@dataclass_json(letter_case=LetterCase.SNAKE)
@dataclass
class SuiteResult:
    suite: str
    passed: bool
    checks: int
    detail: str

    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"
