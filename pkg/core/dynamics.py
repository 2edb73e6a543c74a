"""Synchronous progressive diffusion: one step and a full run."""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Tuple
import logging
import time

from .errors import ParameterDomainError, ShapeError
from .game import PayoffVector
from .network import MultiplexNetwork
from .random_streams import RngLike, as_generator
from .rules import RuleFactory
from .state import StrategyState


logger = logging.getLogger(__name__)

StepObserver = Callable[[int, StrategyState], None]


class TerminalStatus(str, Enum):
    """Why a run stopped."""

    COMPLETE_CASCADE = "complete_cascade"
    FIXED_POINT = "fixed_point"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class DiffusionTrace:
    """Adopter count after every step of one run; step 0 holds the seeds."""

    n: int
    adopters_per_step: Tuple[int, ...]
    terminal_status: TerminalStatus
    steps_run: int

    @property
    def final_count(self) -> int:
        return self.adopters_per_step[-1]

    @property
    def final_fraction(self) -> float:
        return self.final_count / self.n

    def fractions(self) -> Tuple[float, ...]:
        return tuple(c / self.n for c in self.adopters_per_step)


def step(net: MultiplexNetwork, state: StrategyState, pay: PayoffVector, rule,
         rng: RngLike = None) -> Tuple[StrategyState, int]:
    """Advance one synchronous round.

    Every B node is judged against the old buffer; nodes whose rule returns A
    switch in the new buffer. A players and seeds never revert.

    Returns:
        The next state and the number of B-to-A switches.
    """
    if state.n != net.n:
        raise ShapeError(f"state sized {state.n} for a network of {net.n} nodes")
    if pay.layers != net.l:
        raise ShapeError(f"payoffs cover {pay.layers} layers but the network has {net.l}")
    rule = RuleFactory.create(rule)

    adopted = state.adopted
    counts_a = net.neighbor_counts(adopted)
    counts_b = net.degree_matrix() - counts_a
    generator = as_generator(rng) if rule.needs_rng else None
    wants_a = rule.decide_all(counts_a, counts_b, pay, generator)

    switched = wants_a & ~adopted
    switches = int(switched.sum())
    if switches == 0:
        return state, 0
    return state.with_adopters(switched), switches


def run(net: MultiplexNetwork, seeds: Iterable[int], pay: PayoffVector, rule, max_steps: int = 50,
        rng: RngLike = None, on_step: Optional[StepObserver] = None) -> DiffusionTrace:
    """Iterate :func:`step` until a complete cascade, a fixed point or ``max_steps``."""
    if max_steps < 1:
        raise ParameterDomainError(f"max_steps must be at least 1, got {max_steps}")
    rule = RuleFactory.create(rule)
    generator = as_generator(rng) if rule.needs_rng else None
    start_time = time.time()

    state = StrategyState.initial(net.n, seeds)
    counts = [state.adopter_count]
    if on_step is not None:
        on_step(0, state)

    status = TerminalStatus.STEP_LIMIT
    if counts[0] == net.n:
        status = TerminalStatus.COMPLETE_CASCADE
    else:
        for m in range(1, max_steps + 1):
            state, switches = step(net, state, pay, rule, generator)
            counts.append(state.adopter_count)
            if on_step is not None:
                on_step(m, state)
            logger.debug(f"Step {m}: {switches} switch(es), {counts[-1]} adopter(s)")
            if counts[-1] == net.n:
                status = TerminalStatus.COMPLETE_CASCADE
                break
            if switches == 0:
                status = TerminalStatus.FIXED_POINT
                break

    trace = DiffusionTrace(net.n, tuple(counts), status, len(counts) - 1)
    logger.debug(
        f"Run with {rule.name.value} rule finished: {status.value} after {trace.steps_run} step(s), "
        f"{trace.final_count}/{net.n} adopters in {time.time() - start_time:.4f}s"
    )
    return trace
