"""Per-node strategy state with seed flags and validation."""

from enum import Enum
from typing import Iterable

import numpy as np

from .errors import IndexDomainError


class StateValidationError(Exception):
    """Raised when state validation fails."""
    pass


class Strategy(str, Enum):
    """Behaviour a node plays: the innovation ``A`` or the incumbent ``B``."""

    A = "A"
    B = "B"


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=bool)
    values.flags.writeable = False
    return values


class StrategyState:
    """Strategy of every node for one simulation round.

    Instances are immutable: updates return a new state, mirroring how rounds
    read the old buffer and write a fresh one.
    """

    def __init__(self, adopted: np.ndarray, is_seed: np.ndarray):
        """Initialize state with validation.

        Args:
            adopted: boolean per node, true when the node plays ``A``
            is_seed: boolean per node, true for initial adopters
        """
        adopted = _frozen(adopted)
        is_seed = _frozen(is_seed)
        if adopted.shape != is_seed.shape or adopted.ndim != 1:
            raise StateValidationError(
                f"Strategy and seed buffers must be 1-D of equal length, got {adopted.shape} and {is_seed.shape}"
            )
        if np.any(is_seed & ~adopted):
            first = int(np.flatnonzero(is_seed & ~adopted)[0])
            raise StateValidationError(f"Seed node {first} must play A")
        self._adopted = adopted
        self._is_seed = is_seed

    @classmethod
    def initial(cls, n: int, seeds: Iterable[int]) -> 'StrategyState':
        """Everyone plays ``B`` except the seeds, which play ``A``."""
        is_seed = np.zeros(n, dtype=bool)
        seeds = np.asarray(list(seeds), dtype=np.int64)
        if seeds.size and (seeds.min() < 0 or seeds.max() >= n):
            raise IndexDomainError(f"Seed index outside 0..{n - 1}")
        is_seed[seeds] = True
        return cls(is_seed.copy(), is_seed)

    @property
    def n(self) -> int:
        return int(self._adopted.size)

    @property
    def adopted(self) -> np.ndarray:
        """Read-only mask of ``A`` players."""
        return self._adopted

    @property
    def is_seed(self) -> np.ndarray:
        """Read-only mask of seed nodes."""
        return self._is_seed

    @property
    def adopter_count(self) -> int:
        return int(self._adopted.sum())

    @property
    def seed_count(self) -> int:
        return int(self._is_seed.sum())

    def strategy_of(self, u: int) -> Strategy:
        if not 0 <= u < self.n:
            raise IndexDomainError(f"Node {u} not in 0..{self.n - 1}")
        return Strategy.A if self._adopted[u] else Strategy.B

    def with_adopters(self, switched: np.ndarray) -> 'StrategyState':
        """Create new state where ``switched`` nodes additionally play ``A`` (immutable)."""
        return StrategyState(self._adopted | np.asarray(switched, dtype=bool), self._is_seed)

    def contains(self, other: 'StrategyState') -> bool:
        """True when every ``A`` player of ``other`` also plays ``A`` here."""
        return bool(np.all(self._adopted | ~other._adopted))

    def __eq__(self, other) -> bool:
        if not isinstance(other, StrategyState):
            return False
        return np.array_equal(self._adopted, other._adopted) and np.array_equal(self._is_seed, other._is_seed)

    def __repr__(self) -> str:
        return f"StrategyState(n={self.n}, adopters={self.adopter_count}, seeds={self.seed_count})"
