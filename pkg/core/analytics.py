"""Closed-form adoption estimates for ER multiplexes.

The per-node count of A neighbours over ``l`` layers is approximated by a
Poisson variable with rate ``l * p * q * (n - 1)``; a node adopts when that
count exceeds ``floor(beta_l * p * (n - 1))``. The tail is summed from ``i = 0``
(a true Poisson CDF) everywhere.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import gammaln, logsumexp

from .errors import ParameterDomainError
from .game import PayoffVector


logger = logging.getLogger(__name__)

LOG_SPACE_RATE = 700.0


class AnalyticParams(BaseModel):
    """Inputs of the adoption-probability approximation."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    p: float = Field(gt=0.0, le=1.0)
    l: int = Field(ge=1)
    pay: PayoffVector
    q0: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_layers(self) -> 'AnalyticParams':
        if self.pay.layers != self.l:
            raise ValueError(f"payoffs cover {self.pay.layers} layers, expected {self.l}")
        return self

    @classmethod
    def uniform(cls, n: int, p: float, l: int, a: float, b: float, q0: float) -> 'AnalyticParams':
        return cls(n=n, p=p, l=l, pay=PayoffVector.uniform(a, b, l), q0=q0)


@dataclass(frozen=True)
class PoissonTerms:
    """Rates, threshold and resulting adoption probability for one ``q``."""

    lam: float
    lam_prime: float
    threshold_count: int
    probability: float


@dataclass(frozen=True)
class BoundCurve:
    """Lower bound on the adopter fraction per step, for a fixed ``alpha``."""

    alpha: float
    values: Tuple[float, ...]


@dataclass(frozen=True)
class AnalyticCurve:
    """Recurrence values and lower bound side by side, one row per step."""

    alpha: float
    q: Tuple[float, ...]
    bound: Tuple[float, ...]

    def rows(self) -> List[Tuple[int, float, float]]:
        return [(m, q_m, b_m) for m, (q_m, b_m) in enumerate(zip(self.q, self.bound))]


@dataclass(frozen=True)
class LayerOrdering:
    """Floors of the two adopting thresholds and the seed fraction above which k < j holds."""

    q_star: float
    floors_equal: bool
    floor_k: int
    floor_j: int


def adopting_threshold(pay: PayoffVector) -> float:
    """``beta_l = sum(b) / (a_1 + b_1)``."""
    return math.fsum(pay.b) / (pay.a[0] + pay.b[0])


def poisson_upper_tail(threshold_count: int, rate: float) -> float:
    """``P(U > threshold_count)`` for ``U ~ Poisson(rate)``, clamped to ``[0, 1]``.

    Terms are built by the recurrence ``t_i = t_{i-1} * rate / i`` in linear
    space; above ``LOG_SPACE_RATE`` the sum moves to log space to avoid
    underflow of ``exp(-rate)``.
    """
    if rate < 0 or math.isnan(rate):
        raise ParameterDomainError(f"Poisson rate must be non-negative, got {rate}")
    if threshold_count < 0:
        raise ParameterDomainError(f"threshold count must be non-negative, got {threshold_count}")
    if rate == 0.0:
        return 0.0

    if rate > LOG_SPACE_RATE:
        i = np.arange(threshold_count + 1, dtype=np.float64)
        log_cdf = logsumexp(i * math.log(rate) - rate - gammaln(i + 1.0))
        cdf = math.exp(log_cdf)
    else:
        term = math.exp(-rate)
        cdf = term
        for i in range(1, threshold_count + 1):
            term *= rate / i
            cdf += term
    return min(1.0, max(0.0, 1.0 - cdf))


def threshold_count(ap: AnalyticParams) -> int:
    """``floor(beta_l * p * (n - 1))``."""
    return int(math.floor(adopting_threshold(ap.pay) * ap.p * (ap.n - 1)))


def adoption_terms(ap: AnalyticParams, q: float) -> PoissonTerms:
    """Rates ``lambda``, ``lambda'`` and threshold behind :func:`adoption_probability`."""
    if not 0.0 <= q <= 1.0:
        raise ParameterDomainError(f"adopter fraction must lie in [0, 1], got {q}")
    lam = ap.p * q * (ap.n - 1)
    lam_prime = ap.l * lam
    t = threshold_count(ap)
    return PoissonTerms(lam, lam_prime, t, poisson_upper_tail(t, lam_prime))


def adoption_probability(ap: AnalyticParams, q: float) -> float:
    """Probability that a B node switches when a fraction ``q`` already plays A."""
    return adoption_terms(ap, q).probability


def recurrence_curve(ap: AnalyticParams, steps: int) -> List[float]:
    """``q_{m+1} = (1 - q_m) * P(l, q_m, u) + q_m`` from ``q_0 = ap.q0``."""
    if steps < 0:
        raise ParameterDomainError(f"steps must be non-negative, got {steps}")
    values = [ap.q0]
    for _ in range(steps):
        q_m = values[-1]
        q_next = (1.0 - q_m) * adoption_probability(ap, q_m) + q_m
        values.append(min(1.0, max(q_m, q_next)))
    return values


def lower_bound_curve(q0: float, alpha: float, steps: int) -> BoundCurve:
    """``(1 - (1 - alpha)^m) + (1 - alpha)^m * q0`` for ``m = 0..steps``."""
    if not 0.0 <= q0 <= 1.0:
        raise ParameterDomainError(f"q0 must lie in [0, 1], got {q0}")
    if not 0.0 <= alpha <= 1.0:
        raise ParameterDomainError(f"alpha must lie in [0, 1], got {alpha}")
    if steps < 0:
        raise ParameterDomainError(f"steps must be non-negative, got {steps}")
    values = [q0]
    for m in range(1, steps + 1):
        stay = (1.0 - alpha) ** m
        values.append(min(1.0, (1.0 - stay) + stay * q0))
    return BoundCurve(alpha, tuple(values))


def analytic_curve(ap: AnalyticParams, steps: int) -> AnalyticCurve:
    """Recurrence and lower bound with ``alpha = P(l, q0, u)``."""
    alpha = adoption_probability(ap, ap.q0)
    bound = lower_bound_curve(ap.q0, alpha, steps)
    return AnalyticCurve(alpha, tuple(recurrence_curve(ap, steps)), bound.values)


def cascade_step(values: Sequence[float], tolerance: float = 1e-3) -> Optional[int]:
    """First step whose adopter fraction is within ``tolerance`` of 1, if any."""
    for m, value in enumerate(values):
        if value >= 1.0 - tolerance:
            return m
    return None


def _floor_for(layers: int, n: int, p: float, a: float, b: float) -> int:
    return int(math.floor(layers * b / (a + b) * p * (n - 1)))


def layer_ordering_threshold(n: int, p: float, a: float, b: float, k: int, j: int) -> LayerOrdering:
    """Seed fraction above which ``k`` layers spread less than ``j`` layers.

    Uses ``q > i * ln(j / k) / ((j - k) * (n - 1) * p)`` for every
    ``i < floor(k * b / (a + b) * p * (n - 1))``; an empty range gives ``q_star = 0``.
    The bound is meaningful only when both floors are equal.
    """
    if not 1 <= k < j:
        raise ParameterDomainError(f"layer counts must satisfy 1 <= k < j, got k={k}, j={j}")
    if a <= 0 or b <= 0:
        raise ParameterDomainError(f"payoffs must be positive, got a={a}, b={b}")
    if n < 2 or not 0 < p <= 1:
        raise ParameterDomainError(f"need n >= 2 and 0 < p <= 1, got n={n}, p={p}")
    floor_k = _floor_for(k, n, p, a, b)
    floor_j = _floor_for(j, n, p, a, b)
    scale = math.log(j / k) / ((j - k) * (n - 1) * p)
    q_star = max((i * scale for i in range(floor_k)), default=0.0)
    return LayerOrdering(q_star, floor_k == floor_j, floor_k, floor_j)


def layer_ordering_holds(n: int, p: float, a: float, b: float, k: int, j: int, q: float) -> bool:
    """Direct check that ``P(k, q, u) < P(j, q, u)`` with equal scalar payoffs."""
    p_k = adoption_probability(AnalyticParams.uniform(n, p, k, a, b, q), q)
    p_j = adoption_probability(AnalyticParams.uniform(n, p, j, a, b, q), q)
    return p_k < p_j
