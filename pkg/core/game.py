"""Multiplex coordination game: payoffs, neighbour tallies and best responses."""

from dataclasses import dataclass
from typing import List, Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import IndexDomainError, ParameterDomainError, ShapeError
from .network import MultiplexNetwork
from .random_streams import SEED_STREAM, derive_rng
from .state import Strategy, StrategyState


logger = logging.getLogger(__name__)

CONSTANT_SUM_RTOL = 1e-12


class PayoffVector(BaseModel):
    """Per-layer payoffs: ``a[i]`` when both ends play A, ``b[i]`` when both play B."""

    model_config = ConfigDict(frozen=True)

    a: Tuple[float, ...]
    b: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_payoffs(self) -> 'PayoffVector':
        if len(self.a) != len(self.b):
            raise ValueError(f"payoff lists differ in length: {len(self.a)} vs {len(self.b)}")
        if not self.a:
            raise ValueError("payoff lists must cover at least one layer")
        for i, (a_i, b_i) in enumerate(zip(self.a, self.b)):
            if not (a_i > 0 and b_i > 0) or not (math.isfinite(a_i) and math.isfinite(b_i)):
                raise ValueError(f"layer {i}: payoffs must be positive and finite, got a={a_i}, b={b_i}")
        total = self.a[0] + self.b[0]
        for i, (a_i, b_i) in enumerate(zip(self.a, self.b)):
            if not math.isclose(a_i + b_i, total, rel_tol=CONSTANT_SUM_RTOL, abs_tol=0.0):
                raise ValueError(
                    f"layer {i}: a+b = {a_i + b_i} breaks the constant-sum constraint a+b = {total}"
                )
        return self

    @classmethod
    def uniform(cls, a: float, b: float, l: int) -> 'PayoffVector':
        """Equal scalar payoffs replicated over ``l`` layers."""
        if l < 1:
            raise ParameterDomainError(f"layer count must be positive, got {l}")
        return cls(a=(a,) * l, b=(b,) * l)

    @property
    def layers(self) -> int:
        return len(self.a)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.a)) == 1 and len(set(self.b)) == 1


@dataclass(frozen=True)
class NeighborTally:
    """Per-layer counts of A and B neighbours of one focal node."""

    count_a: Tuple[int, ...]
    count_b: Tuple[int, ...]

    def __post_init__(self):
        if len(self.count_a) != len(self.count_b):
            raise ShapeError("count_a and count_b must have one entry per layer")
        if any(c < 0 for c in self.count_a + self.count_b):
            raise ParameterDomainError("neighbour counts must be non-negative")

    @classmethod
    def from_pairs(cls, pairs) -> 'NeighborTally':
        """Build from ``[(count_a, count_b), ...]`` per layer."""
        pairs = list(pairs)
        return cls(tuple(int(a) for a, _ in pairs), tuple(int(b) for _, b in pairs))

    @property
    def layers(self) -> int:
        return len(self.count_a)

    def degree(self, i: int) -> int:
        return self.count_a[i] + self.count_b[i]

    @property
    def total_degree(self) -> int:
        return sum(self.count_a) + sum(self.count_b)



@dataclass(frozen=True)
class PayoffTally:
    """Payoffs ``r_i`` (for playing A) and ``s_i`` (for playing B) per layer."""

    r: Tuple[float, ...]
    s: Tuple[float, ...]

    @property
    def r_total(self) -> float:
        return sum(self.r, 0.0)

    @property
    def s_total(self) -> float:
        return sum(self.s, 0.0)


def _check_shape(tally: NeighborTally, pay: PayoffVector) -> None:
    if tally.layers != pay.layers:
        raise ShapeError(f"tally covers {tally.layers} layers but payoffs cover {pay.layers}")


def tally_neighbors(net: MultiplexNetwork, state: StrategyState, u: int) -> NeighborTally:
    """Exact per-layer counts of A and B neighbours of node ``u``."""
    if state.n != net.n:
        raise ShapeError(f"state sized {state.n} for a network of {net.n} nodes")
    adopted = state.adopted
    count_a, count_b = [], []
    for i in range(net.l):
        nbrs = net.neighbors(u, i)
        a = int(adopted[nbrs].sum()) if nbrs else 0
        count_a.append(a)
        count_b.append(len(nbrs) - a)
    return NeighborTally(tuple(count_a), tuple(count_b))


def payoff_tally(tally: NeighborTally, pay: PayoffVector) -> PayoffTally:
    """Per-layer payoffs collected for playing A and for playing B."""
    _check_shape(tally, pay)
    r = tuple(c * a for c, a in zip(tally.count_a, pay.a))
    s = tuple(c * b for c, b in zip(tally.count_b, pay.b))
    return PayoffTally(r, s)


def decide_sum(tally: NeighborTally, pay: PayoffVector) -> Strategy:
    """A when the summed A payoff is at least the summed B payoff; isolated nodes stay B."""
    payoffs = payoff_tally(tally, pay)
    if tally.total_degree == 0:
        return Strategy.B
    return Strategy.A if payoffs.r_total >= payoffs.s_total else Strategy.B


def decide_dominant(tally: NeighborTally, pay: PayoffVector) -> Strategy:
    """A when A pays at least as much as B in every layer and some layer has a neighbour."""
    payoffs = payoff_tally(tally, pay)
    if tally.total_degree == 0:
        return Strategy.B
    if all(r_i >= s_i for r_i, s_i in zip(payoffs.r, payoffs.s)):
        return Strategy.A
    return Strategy.B


def decide_random(tally: NeighborTally, pay: PayoffVector, chosen_layer: int) -> Strategy:
    """Best response restricted to ``chosen_layer``; an empty chosen layer means B."""
    _check_shape(tally, pay)
    if not 0 <= chosen_layer < tally.layers:
        raise IndexDomainError(f"Layer {chosen_layer} not in 0..{tally.layers - 1}")
    if tally.degree(chosen_layer) == 0:
        return Strategy.B
    r_i = tally.count_a[chosen_layer] * pay.a[chosen_layer]
    s_i = tally.count_b[chosen_layer] * pay.b[chosen_layer]
    return Strategy.A if r_i >= s_i else Strategy.B


def seed_count_for(n: int, q0: float) -> int:
    """``round(q0 * n)`` with halves rounded up."""
    if not 0.0 <= q0 <= 1.0:
        raise ParameterDomainError(f"seed fraction must lie in [0, 1], got {q0}")
    return min(n, int(math.floor(q0 * n + 0.5)))


def select_seeds(n: int, q0: float, rng_seed: int) -> np.ndarray:
    """Uniformly random sorted seed set of size ``round(q0 * n)``."""
    k = seed_count_for(n, q0)
    rng = derive_rng(rng_seed, SEED_STREAM)
    seeds = np.sort(rng.choice(n, size=k, replace=False)) if k else np.zeros(0, dtype=np.int64)
    if k == 0:
        logger.warning(f"Seed fraction {q0} yields an empty seed set for n={n}")
    return seeds.astype(np.int64)


def brute_force_decide(net: MultiplexNetwork, state: StrategyState, pay: PayoffVector, u: int) -> Strategy:
    """Play one copy of the pairwise game per incident edge and pick the better choice.

    Accrues ``a_i`` for A-A, ``b_i`` for B-B and 0 for mismatched pairs under both
    hypothetical choices of ``u``. Ties go to A; zero totals (no neighbours) give B.
    """
    if pay.layers != net.l:
        raise ShapeError(f"payoffs cover {pay.layers} layers but the network has {net.l}")
    if_a: List[float] = []
    if_b: List[float] = []
    for i in range(net.l):
        for v in net.neighbors(u, i):
            neighbour_plays_a = state.strategy_of(v) is Strategy.A
            if_a.append(pay.a[i] if neighbour_plays_a else 0.0)
            if_b.append(0.0 if neighbour_plays_a else pay.b[i])
    total_a, total_b = math.fsum(if_a), math.fsum(if_b)
    if total_a == 0.0 and total_b == 0.0:
        return Strategy.B
    return Strategy.A if total_a >= total_b else Strategy.B
