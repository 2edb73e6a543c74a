"""Base sweep interfaces and the replicated work-item runner."""

from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from numbers import Real
from typing import Dict, List, Optional, Tuple, Union
import logging
import time

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.analytics import AnalyticParams
from core.dynamics import DiffusionTrace, TerminalStatus, run
from core.game import PayoffVector, select_seeds, seed_count_for
from core.network import GenParams, generate_er_multiplex
from core.random_streams import RULE_STREAM, WORK_ITEM_STREAM, derive_rng, derive_seed
from core.rules import RuleName
from core.worker_selector import select_workers


logger = logging.getLogger(__name__)


class SweptParameter(str, Enum):
    """Parameter varied along a sweep grid."""

    SEED_FRACTION = "seed_fraction"
    LAYER_COUNT = "layer_count"
    EDGE_PROBABILITY = "edge_probability"
    RULE = "rule"


class PhaseLabel(str, Enum):
    """Regimes of final adoption as edge probability grows."""

    ADOPTING = "adopting"
    EPIDEMIC_A = "epidemic_A"
    BACKING_TO_B = "backing_to_B"
    EPIDEMIC_B = "epidemic_B"


class SweepBase(AnalyticParams):
    """Fixed simulation parameters of a sweep, plus the decision rule."""

    rule: RuleName = RuleName.SUM


class SweepSpec(BaseModel):
    """One parameter swept over a grid, replicated ``samples`` times per point."""

    model_config = ConfigDict(frozen=True)

    base: SweepBase
    swept_parameter: SweptParameter
    grid: Tuple[Union[float, RuleName], ...]
    samples: int = Field(default=20, ge=1)
    max_steps: int = Field(default=50, ge=1)
    rng_seed: int = Field(default=0, ge=0, le=(1 << 64) - 1)
    workers: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_grid(self) -> 'SweepSpec':
        if not self.grid:
            raise ValueError("grid must not be empty")
        if self.swept_parameter is SweptParameter.RULE:
            if not all(isinstance(v, RuleName) for v in self.grid):
                raise ValueError("a rule sweep takes rule names as grid values")
            if len(set(self.grid)) != len(self.grid):
                raise ValueError("rule grid must not repeat a rule")
            return self

        if not all(isinstance(v, Real) and not isinstance(v, bool) for v in self.grid):
            raise ValueError(f"a {self.swept_parameter.value} sweep takes numeric grid values")
        values = np.asarray(self.grid, dtype=np.float64)
        if np.any(np.diff(values) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.swept_parameter is SweptParameter.SEED_FRACTION and (values[0] < 0 or values[-1] > 1):
            raise ValueError("seed fractions must lie in [0, 1]")
        if self.swept_parameter is SweptParameter.EDGE_PROBABILITY and (values[0] <= 0 or values[-1] > 1):
            raise ValueError("edge probabilities must lie in (0, 1]")
        if self.swept_parameter is SweptParameter.LAYER_COUNT:
            if values[0] < 1 or np.any(values != np.round(values)):
                raise ValueError("layer counts must be positive integers")
            if not self.base.pay.is_uniform:
                raise ValueError("a layer sweep needs equal payoffs on every layer")
        return self


@dataclass(frozen=True)
class PointParams:
    """Concrete simulation parameters of one grid point."""

    n: int
    l: int
    p: float
    pay: PayoffVector
    q0: float
    rule: RuleName


@dataclass(frozen=True)
class ReplicateOutcome:
    """Summary of one replicate run."""

    final_count: int
    steps_run: int
    status: TerminalStatus


@dataclass
class PointSummary:
    """Aggregate of the replicates run at one grid point."""

    value: Union[float, int, str]
    mean_final_fraction: float
    std_final_fraction: float
    samples: int
    mean_steps: float
    complete_cascades: int
    status_counts: Dict[str, int]
    seed_count: int
    mean_final_count: float
    phase: Optional[PhaseLabel] = None


@dataclass
class SweepResult:
    """Per-point summaries of one sweep, in grid order."""

    parameter: SweptParameter
    n: int
    points: List[PointSummary] = field(default_factory=list)

    def values(self) -> list:
        return [pt.value for pt in self.points]

    def means(self) -> List[float]:
        return [pt.mean_final_fraction for pt in self.points]

    def phases(self) -> List[Optional[PhaseLabel]]:
        return [pt.phase for pt in self.points]


def run_replicate(point: PointParams, max_steps: int, rng_seed: int, pairing_key: int,
                  replicate: int) -> ReplicateOutcome:
    """Draw a network and seed set for ``(rng_seed, pairing_key, replicate)`` and diffuse once."""
    item_seed = derive_seed(rng_seed, WORK_ITEM_STREAM, pairing_key, replicate)
    net = generate_er_multiplex(GenParams(n=point.n, l=point.l, p=point.p, rng_seed=item_seed))
    seeds = select_seeds(point.n, point.q0, item_seed)
    trace: DiffusionTrace = run(net, seeds, point.pay, point.rule, max_steps, derive_rng(item_seed, RULE_STREAM))
    return ReplicateOutcome(trace.final_count, trace.steps_run, trace.terminal_status)


def summarize(value, point: PointParams, outcomes: List[ReplicateOutcome]) -> PointSummary:
    """Aggregate replicate outcomes; order of ``outcomes`` is the replicate order."""
    counts = np.array([o.final_count for o in outcomes], dtype=np.float64)
    fractions = counts / point.n
    std = float(np.std(fractions, ddof=1)) if len(outcomes) > 1 else 0.0
    status_counts = {status.value: 0 for status in TerminalStatus}
    for o in outcomes:
        status_counts[o.status.value] += 1
    return PointSummary(
        value=value,
        mean_final_fraction=float(fractions.mean()),
        std_final_fraction=std,
        samples=len(outcomes),
        mean_steps=float(np.mean([o.steps_run for o in outcomes])),
        complete_cascades=status_counts[TerminalStatus.COMPLETE_CASCADE.value],
        status_counts=status_counts,
        seed_count=seed_count_for(point.n, point.q0),
        mean_final_count=float(counts.mean()),
    )


class BaseSweep(ABC):
    """Abstract base class for sweeps.

    Each (grid point, replicate) pair is an independent work item with its own
    random stream, so results do not depend on how items are scheduled.
    """

    parameter: SweptParameter

    def __init__(self, spec: SweepSpec):
        """Initialize sweep."""
        if spec.swept_parameter is not self.parameter:
            raise ValueError(
                f"{self.__class__.__name__} sweeps {self.parameter.value}, got {spec.swept_parameter.value}"
            )
        self.spec = spec

    @abstractmethod
    def point_params(self, value) -> PointParams:
        """Simulation parameters of the grid point ``value``."""
        pass

    def pairing_key(self, grid_index: int) -> int:
        """Key shared by replicates that must see the same networks and seeds."""
        return grid_index

    def display_value(self, value):
        return value

    def finalize(self, result: SweepResult) -> SweepResult:
        """Post-process the aggregated result."""
        return result

    def _base_point(self) -> PointParams:
        base = self.spec.base
        return PointParams(base.n, base.l, base.p, base.pay, base.q0, base.rule)

    def run(self) -> SweepResult:
        """Run every work item and aggregate per grid point."""
        spec = self.spec
        start_time = time.time()
        points = [self.point_params(value) for value in spec.grid]
        items = [(g, r) for g in range(len(points)) for r in range(spec.samples)]
        workers = select_workers(spec.workers, len(items))

        def work(item):
            g, r = item
            return run_replicate(points[g], spec.max_steps, spec.rng_seed, self.pairing_key(g), r)

        logger.info(
            f"Sweep over {self.parameter.value}: {len(points)} point(s) x {spec.samples} replicate(s) "
            f"on {workers} worker(s)"
        )
        if workers == 1:
            outcomes = [work(item) for item in items]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(work, items))

        result = SweepResult(self.parameter, spec.base.n)
        for g, value in enumerate(spec.grid):
            chunk = outcomes[g * spec.samples:(g + 1) * spec.samples]
            result.points.append(summarize(self.display_value(value), points[g], chunk))

        result = self.finalize(result)
        logger.info(f"Sweep over {self.parameter.value} completed in {time.time() - start_time:.3f}s")
        return result
