from dataclasses import dataclass
from typing import Optional
import numpy as np


@dataclass(eq=False)
class Bag:
    """One output instance: the fused term-frequency vector plus its identity"""

    name: str
    tf: np.ndarray
    time: Optional[float] = None
    label: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.tf)
