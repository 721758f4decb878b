import numpy as np

BLOCK_SIZE = 4096


class TrialStreams:
    """
    Counter-based random streams: trial block b always draws from a Philox generator keyed by (seed, b),
    so results do not depend on how blocks are spread over workers.
    """

    def __init__(self, seed: int, blockSize: int = BLOCK_SIZE):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2 ** 64:
            raise ValueError(f"requirement failed: seed must be an unsigned 64 bit integer, got {seed}")
        self.seed = int(seed)
        self.blockSize = blockSize

    def generator(self, block: int) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence(self.seed, spawn_key=(block,))))

    def blocks(self, trials: int) -> list[tuple[int, int]]:
        """
        Returns (block index, trials in block) covering the given number of trials
        """
        return [(b, min(self.blockSize, trials - start)) for b, start in enumerate(range(0, trials, self.blockSize))]
