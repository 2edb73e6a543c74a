"""Decision rules for the multiplex coordination game - Open/Closed Principle compliant."""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, List, Optional, Type
import logging

import numpy as np

from .errors import ParameterDomainError, ShapeError
from .game import NeighborTally, PayoffVector, decide_dominant, decide_random, decide_sum
from .state import Strategy


logger = logging.getLogger(__name__)


class RuleName(str, Enum):
    """Decision approaches a node may use to weigh its layers."""

    SUM = "sum"
    DOMINANT = "dominant"
    RANDOM = "random"


def _check_counts(counts_a: np.ndarray, counts_b: np.ndarray, pay: PayoffVector) -> None:
    if counts_a.shape != counts_b.shape or counts_a.ndim != 2:
        raise ShapeError(f"count matrices must be l x n and equal, got {counts_a.shape} and {counts_b.shape}")
    if counts_a.shape[0] != pay.layers:
        raise ShapeError(f"counts cover {counts_a.shape[0]} layers but payoffs cover {pay.layers}")


class DecisionRule(ABC):
    """Abstract base class for decision rules.

    ``decide`` answers for one focal node; ``decide_all`` answers for every node
    at once from ``l x n`` count matrices and must agree with ``decide`` node by node.
    """

    name: RuleName

    @property
    def needs_rng(self) -> bool:
        return False

    @abstractmethod
    def decide(self, tally: NeighborTally, pay: PayoffVector, chosen_layer: Optional[int] = None) -> Strategy:
        """Decide the strategy of one node."""
        pass

    @abstractmethod
    def decide_all(self, counts_a: np.ndarray, counts_b: np.ndarray, pay: PayoffVector,
                   rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """Boolean mask of nodes whose best response is A."""
        pass

    @staticmethod
    def _layer_payoffs(counts_a: np.ndarray, counts_b: np.ndarray, pay: PayoffVector):
        a = np.asarray(pay.a, dtype=np.float64)[:, None]
        b = np.asarray(pay.b, dtype=np.float64)[:, None]
        return counts_a * a, counts_b * b

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


class SumRule(DecisionRule):
    """Adopt A when the payoff summed over all layers favours it."""

    name = RuleName.SUM

    def decide(self, tally, pay, chosen_layer=None):
        return decide_sum(tally, pay)

    def decide_all(self, counts_a, counts_b, pay, rng=None):
        _check_counts(counts_a, counts_b, pay)
        r, s = self._layer_payoffs(counts_a, counts_b, pay)
        r_total = np.zeros(counts_a.shape[1])
        s_total = np.zeros(counts_a.shape[1])
        # accumulate layer by layer to match the scalar left-to-right sum
        for i in range(counts_a.shape[0]):
            r_total += r[i]
            s_total += s[i]
        has_neighbour = (counts_a + counts_b).sum(axis=0) > 0
        return has_neighbour & (r_total >= s_total)


class DominantRule(DecisionRule):
    """Adopt A only when it pays at least as well in every single layer."""

    name = RuleName.DOMINANT

    def decide(self, tally, pay, chosen_layer=None):
        return decide_dominant(tally, pay)

    def decide_all(self, counts_a, counts_b, pay, rng=None):
        _check_counts(counts_a, counts_b, pay)
        r, s = self._layer_payoffs(counts_a, counts_b, pay)
        has_neighbour = (counts_a + counts_b).sum(axis=0) > 0
        return has_neighbour & np.all(r >= s, axis=0)


class RandomRule(DecisionRule):
    """Adopt A when it pays in one layer drawn uniformly per node and round."""

    name = RuleName.RANDOM

    @property
    def needs_rng(self) -> bool:
        return True

    def decide(self, tally, pay, chosen_layer=None):
        if chosen_layer is None:
            raise ParameterDomainError("the random rule needs the layer drawn for this node")
        return decide_random(tally, pay, chosen_layer)

    def draw_layers(self, rng: np.random.Generator, l: int, n: int) -> np.ndarray:
        return rng.integers(0, l, size=n)

    def decide_all(self, counts_a, counts_b, pay, rng=None, chosen=None):
        _check_counts(counts_a, counts_b, pay)
        l, n = counts_a.shape
        if chosen is None:
            if rng is None:
                raise ParameterDomainError("the random rule needs a random generator")
            chosen = self.draw_layers(rng, l, n)
        nodes = np.arange(n)
        ca = counts_a[chosen, nodes]
        cb = counts_b[chosen, nodes]
        a = np.asarray(pay.a, dtype=np.float64)[chosen]
        b = np.asarray(pay.b, dtype=np.float64)[chosen]
        return ((ca + cb) > 0) & (ca * a >= cb * b)


class RuleFactory:
    """Factory for creating decision rules."""

    _rules: Dict[RuleName, Type[DecisionRule]] = {
        RuleName.SUM: SumRule,
        RuleName.DOMINANT: DominantRule,
        RuleName.RANDOM: RandomRule,
    }

    @classmethod
    def create(cls, name) -> DecisionRule:
        """Create a rule from its name (``sum``, ``dominant`` or ``random``)."""
        if isinstance(name, DecisionRule):
            return name
        try:
            key = RuleName(name)
        except ValueError:
            raise ParameterDomainError(
                f"Unknown rule: {name}. Use {', '.join(r.value for r in RuleName)}"
            ) from None
        return cls._rules[key]()

    @classmethod
    def available(cls) -> List[str]:
        return [r.value for r in cls._rules]
