from dataclasses import dataclass, field
from typing import Tuple
import numpy as np


@dataclass
class RngStream:
    """
    Seeded random stream: PCG64 behind a SeedSequence(seed, spawn_key)
    The same (seed, key) yields the same draws on every platform.
    """

    seed: int = 0
    key: Tuple[int, ...] = ()
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("Seed must be a non-negative integer")
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def child(self, index: int) -> 'RngStream':
        """Independent stream for partition `index`, stable under reordering of siblings"""
        return RngStream(self.seed, self.key + (index,))
