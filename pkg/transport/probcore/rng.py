from typing import List, Optional

import numpy as np


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Seedable counter-based generator (Philox) that supports ``spawn``."""
    return np.random.Generator(np.random.Philox(seed))


def split_rng(rng: np.random.Generator, parts: int) -> List[np.random.Generator]:
    """Independent child streams; the same parent state always gives the same children."""
    return rng.spawn(parts)
