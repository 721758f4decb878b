from dataclasses import dataclass

import numpy as np


@dataclass
class SampleVector:
    """
    A finite, non-empty sequence of real observations x_1..x_n
    """
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("requirement failed: a sample vector must be a non-empty one dimensional sequence")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("requirement failed: sample vector entries must be finite")

    def __len__(self):
        return int(self.values.size)
