"""Concrete sweeps over seed fraction, layer count, edge probability and rule."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple, Union
import logging

from core.analytics import AnalyticParams, adoption_probability, lower_bound_curve, recurrence_curve
from core.errors import ParameterDomainError
from core.game import PayoffVector
from core.rules import RuleName
from .base import BaseSweep, PhaseLabel, PointParams, SweepResult, SweepSpec, SweptParameter


logger = logging.getLogger(__name__)

EPIDEMIC_A_FRACTION = 0.99
EPIDEMIC_B_MARGIN = 0.01


@dataclass(frozen=True)
class SeedCompanion:
    """Analytic values paired with one seed-fraction grid point."""

    q0: float
    alpha: float
    bound_final: float
    recurrence_final: float
    mean_final_fraction: float


@dataclass
class SeedSweepReport:
    """Seed-fraction sweep with the analytic bound at the final step of each point."""

    result: SweepResult
    companions: List[SeedCompanion] = field(default_factory=list)


class SeedFractionSweep(BaseSweep):
    parameter = SweptParameter.SEED_FRACTION

    def point_params(self, value) -> PointParams:
        base = self._base_point()
        return PointParams(base.n, base.l, base.p, base.pay, float(value), base.rule)

    def display_value(self, value):
        return float(value)

    def report(self) -> SeedSweepReport:
        """Run the sweep and attach ``alpha = P(l, q0, u)`` and the final-step bound."""
        result = self.run()
        base = self.spec.base
        steps = self.spec.max_steps
        companions = []
        for point in result.points:
            ap = AnalyticParams(n=base.n, p=base.p, l=base.l, pay=base.pay, q0=point.value)
            alpha = adoption_probability(ap, ap.q0)
            companions.append(SeedCompanion(
                q0=point.value,
                alpha=alpha,
                bound_final=lower_bound_curve(ap.q0, alpha, steps).values[-1],
                recurrence_final=recurrence_curve(ap, steps)[-1],
                mean_final_fraction=point.mean_final_fraction,
            ))
        return SeedSweepReport(result, companions)


class LayerSweep(BaseSweep):
    """Equal scalar payoffs replicated on each layer count of the grid."""

    parameter = SweptParameter.LAYER_COUNT

    def point_params(self, value) -> PointParams:
        base = self._base_point()
        l = int(value)
        pay = PayoffVector.uniform(base.pay.a[0], base.pay.b[0], l)
        return PointParams(base.n, l, base.p, pay, base.q0, base.rule)

    def display_value(self, value):
        return int(value)


class EdgeProbabilitySweep(BaseSweep):
    parameter = SweptParameter.EDGE_PROBABILITY

    def point_params(self, value) -> PointParams:
        base = self._base_point()
        return PointParams(base.n, base.l, float(value), base.pay, base.q0, base.rule)

    def display_value(self, value):
        return float(value)

    def finalize(self, result: SweepResult) -> SweepResult:
        seen_epidemic_a = False
        for point in result.points:
            point.phase = classify_phase(point.mean_final_count, point.seed_count, result.n, seen_epidemic_a)
            seen_epidemic_a = seen_epidemic_a or point.phase is PhaseLabel.EPIDEMIC_A
        logger.info(f"Phases along p: {[pt.phase.value for pt in result.points]}")
        return result


class RuleSweep(BaseSweep):
    """Every rule of the grid sees the same networks and seed sets."""

    parameter = SweptParameter.RULE

    def point_params(self, value) -> PointParams:
        base = self._base_point()
        return PointParams(base.n, base.l, base.p, base.pay, base.q0, RuleName(value))

    def pairing_key(self, grid_index: int) -> int:
        return 0

    def display_value(self, value):
        return RuleName(value).value


def classify_phase(mean_final_count: float, seed_count: int, n: int,
                   seen_epidemic_a: bool = False) -> PhaseLabel:
    """Label one edge-probability point.

    Mixed outcomes are told apart by sweep position: ``adopting`` before the
    first ``epidemic_A`` point, ``backing_to_B`` after it.
    """
    if n < 1 or not 0 <= seed_count <= n:
        raise ParameterDomainError(f"need 0 <= seed_count <= n, got seed_count={seed_count}, n={n}")
    if not seed_count - 1e-9 <= mean_final_count <= n + 1e-9:
        raise ParameterDomainError(
            f"mean final count {mean_final_count} outside [{seed_count}, {n}]"
        )
    if mean_final_count >= EPIDEMIC_A_FRACTION * n:
        return PhaseLabel.EPIDEMIC_A
    if mean_final_count <= seed_count + EPIDEMIC_B_MARGIN * n:
        return PhaseLabel.EPIDEMIC_B
    return PhaseLabel.BACKING_TO_B if seen_epidemic_a else PhaseLabel.ADOPTING


def epidemic_window(result: SweepResult) -> Optional[Tuple[float, float, float]]:
    """First and last ``epidemic_A`` edge probability and the width between them."""
    hits = [pt.value for pt in result.points if pt.phase is PhaseLabel.EPIDEMIC_A]
    if not hits:
        return None
    return hits[0], hits[-1], hits[-1] - hits[0]


def sweep_seed_fraction(spec: SweepSpec) -> SeedSweepReport:
    return SeedFractionSweep(spec).report()


def sweep_layers(spec: SweepSpec) -> SweepResult:
    return LayerSweep(spec).run()


def sweep_edge_probability(spec: SweepSpec) -> SweepResult:
    return EdgeProbabilitySweep(spec).run()


def sweep_rules(spec: SweepSpec) -> SweepResult:
    return RuleSweep(spec).run()


def compare_strategies(spec: SweepSpec) -> Dict[str, SweepResult]:
    """Seed-fraction sweep repeated for every rule on identical networks and seed sets."""
    if spec.swept_parameter is not SweptParameter.SEED_FRACTION:
        raise ParameterDomainError(
            f"rule comparison sweeps seed_fraction, got {spec.swept_parameter.value}"
        )
    results: Dict[str, SweepResult] = {}
    for rule in RuleName:
        ruled = spec.model_copy(update={"base": spec.base.model_copy(update={"rule": rule})})
        results[rule.value] = SeedFractionSweep(ruled).run()
    return results


def layer_epidemic_windows(spec: SweepSpec, layer_counts: Iterable[int]) -> Dict[int, Optional[Tuple[float, float, float]]]:
    """Edge-probability sweep repeated per layer count; returns each ``epidemic_A`` window.

    Scalar payoffs are replicated on every layer, and work items keep their
    pairing keys, so layer ``i`` of every network is shared across layer counts.
    """
    if spec.swept_parameter is not SweptParameter.EDGE_PROBABILITY:
        raise ParameterDomainError(
            f"window comparison sweeps edge_probability, got {spec.swept_parameter.value}"
        )
    if not spec.base.pay.is_uniform:
        raise ParameterDomainError("window comparison needs equal payoffs on every layer")
    a, b = spec.base.pay.a[0], spec.base.pay.b[0]
    windows: Dict[int, Optional[Tuple[float, float, float]]] = {}
    for l in layer_counts:
        if l < 1:
            raise ParameterDomainError(f"layer counts must be positive, got {l}")
        base = spec.base.model_copy(update={"l": int(l), "pay": PayoffVector.uniform(a, b, int(l))})
        windows[int(l)] = epidemic_window(EdgeProbabilitySweep(spec.model_copy(update={"base": base})).run())
        logger.info(f"epidemic_A window with {l} layer(s): {windows[int(l)]}")
    return windows


_SWEEPS = {
    SweptParameter.SEED_FRACTION: SeedFractionSweep,
    SweptParameter.LAYER_COUNT: LayerSweep,
    SweptParameter.EDGE_PROBABILITY: EdgeProbabilitySweep,
    SweptParameter.RULE: RuleSweep,
}


def run_sweep(spec: SweepSpec) -> Union[SeedSweepReport, SweepResult]:
    """Dispatch on the swept parameter."""
    sweep = _SWEEPS[spec.swept_parameter](spec)
    if isinstance(sweep, SeedFractionSweep):
        return sweep.report()
    return sweep.run()
