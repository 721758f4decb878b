import os
from dataclasses import dataclass
try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import structlog
from pyhocon import ConfigFactory, ConfigTree

_referenceConf = os.path.join(os.path.dirname(os.path.abspath(__file__)), "reference.conf")
THREADS_ENV = "SELFNORM_THREADS"


@dataclass
class Settings:
    """
    Library settings, read from the bundled reference.conf with an optional user file layered on top.
    The SELFNORM_THREADS environment variable overrides the configured thread count.
    """
    threads: int
    trials: int
    seed: int
    confidence: float
    chunkSize: int
    bernsteinTolerance: float
    bernsteinMaxIterations: int
    significantDigits: int

    log = structlog.get_logger()

    def __post_init__(self):
        if self.threads < 0:
            raise ValueError(f"requirement failed: threads must be >= 0 (0 = auto), got {self.threads}")
        if self.trials < 1:
            raise ValueError(f"requirement failed: trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"requirement failed: seed must be an unsigned 64 bit integer, got {self.seed}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"requirement failed: confidence must be in (0, 1), got {self.confidence}")
        if self.chunkSize < 1:
            raise ValueError(f"requirement failed: chunkSize must be positive, got {self.chunkSize}")
        if not self.bernsteinTolerance > 0.0:
            raise ValueError(f"requirement failed: bernstein tolerance must be positive, got {self.bernsteinTolerance}")
        if self.bernsteinMaxIterations < 1:
            raise ValueError(f"requirement failed: bernstein maxIterations must be positive, got {self.bernsteinMaxIterations}")
        if not 1 <= self.significantDigits <= 17:
            raise ValueError(f"requirement failed: significantDigits must be in [1, 17], got {self.significantDigits}")

    def workers(self) -> int:
        """
        Returns the number of worker threads to use
        """
        if self.threads > 0:
            return self.threads
        return min(8, os.cpu_count() or 1)

    @staticmethod
    def _threadsFromEnv() -> int | None:
        value = os.environ.get(THREADS_ENV)
        if value is None:
            return None
        if not value.strip().isdigit() or int(value) < 1:
            raise ValueError(f"requirement failed: {THREADS_ENV} must be a positive integer, got '{value}'")
        return int(value)

    @classmethod
    def fromConfig(cls, config: ConfigTree) -> Self:
        c = config.get_config("selfnorm")
        threads = cls._threadsFromEnv()
        return cls(
            threads=threads if threads is not None else c.get_int("threads"),
            trials=int(c.get_float("simulate.trials")),
            seed=c.get_int("simulate.seed"),
            confidence=c.get_float("simulate.confidence"),
            chunkSize=c.get_int("oracle.chunkSize"),
            bernsteinTolerance=c.get_float("bernstein.tolerance"),
            bernsteinMaxIterations=c.get_int("bernstein.maxIterations"),
            significantDigits=c.get_int("report.significantDigits"),
        )

    @classmethod
    def load(cls, path: str | None = None) -> Self:
        """
        Loads the settings.

        Args:
            path: optional HOCON file whose values override the defaults

        Returns:
            the settings
        """
        config = ConfigFactory.parse_file(_referenceConf)
        if path is not None:
            cls.log.info(f"Loading settings from {path}")
            config = ConfigFactory.parse_file(path).with_fallback(config)
        return cls.fromConfig(config)
