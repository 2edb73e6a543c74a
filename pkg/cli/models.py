"""Pydantic models for command-line configuration."""

from enum import Enum
from typing import Any, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.analytics import AnalyticParams
from core.game import PayoffVector
from core.network import GenParams
from core.rules import RuleName
from experiments.base import SweepBase, SweepSpec, SweptParameter


DEFAULT_A = 2.0
DEFAULT_B = 1.0


class Command(str, Enum):
    GENERATE = "generate"
    RUN = "run"
    ANALYTIC = "analytic"
    SWEEP = "sweep"
    COMPARE = "compare"


def default_grid(parameter: SweptParameter) -> Tuple[Union[float, RuleName], ...]:
    """Grid used when none is given on the command line."""
    if parameter is SweptParameter.SEED_FRACTION:
        return tuple(round(0.05 * k, 2) for k in range(1, 11))
    if parameter is SweptParameter.LAYER_COUNT:
        return (1.0, 2.0, 3.0, 4.0)
    if parameter is SweptParameter.EDGE_PROBABILITY:
        return tuple(float(p) for p in np.geomspace(0.001, 0.5, 25))
    return tuple(RuleName)


# field names of nested parameter models mapped to the RunConfig field behind them
_FIELD_ALIASES = {
    "n": "nodes", "l": "layers", "p": "edge_prob", "q0": "seed_fraction",
    "pay": "payoff_a", "a": "payoff_a", "b": "payoff_b",
    "grid": "grid", "samples": "samples", "max_steps": "max_steps",
    "rng_seed": "rng_seed", "workers": "workers", "rule": "rule",
}


def flag_for(field: str) -> str:
    return "--" + field.replace("_", "-")


def diagnostic(error: ValidationError, fallback: str) -> str:
    """``--flag: message`` for the first error; ``fallback`` names model-level failures."""
    first = error.errors()[0]
    loc = [part for part in first["loc"] if isinstance(part, str)]
    field = next((_FIELD_ALIASES.get(part, part) for part in reversed(loc)
                  if part in _FIELD_ALIASES or part in RunConfig.model_fields), loc[0] if loc else fallback)
    message = first["msg"]
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    if message.startswith("--"):
        return message
    return f"{flag_for(field)}: {message}"


class RunConfig(BaseModel):
    """Validated configuration of one CLI invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    nodes: int = Field(default=500, ge=1)
    layers: int = Field(default=2, ge=1)
    edge_prob: float = Field(default=0.1, ge=0.0, le=1.0)
    payoff_a: Tuple[float, ...] = ()
    payoff_b: Tuple[float, ...] = ()
    seed_fraction: float = Field(default=0.25, ge=0.0, le=1.0)
    rule: RuleName = RuleName.SUM
    max_steps: int = Field(default=50, ge=1)
    samples: int = Field(default=20, ge=1)
    rng_seed: int = Field(default=0, ge=0, le=(1 << 64) - 1)
    workers: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    network: Optional[str] = None
    param: SweptParameter = SweptParameter.SEED_FRACTION
    grid: Optional[Tuple[Union[float, RuleName], ...]] = None
    companion: Optional[str] = None

    @model_validator(mode="before")
    @classmethod
    def _fill_payoffs(cls, data: Any) -> Any:
        # omitted payoff lists default to a=2, b=1 on every layer
        if isinstance(data, dict):
            layers = data.get("layers", 2)
            if isinstance(layers, int):
                data = dict(data)
                if not data.get("payoff_a"):
                    data["payoff_a"] = (DEFAULT_A,) * layers
                if not data.get("payoff_b"):
                    data["payoff_b"] = (DEFAULT_B,) * layers
        return data

    @model_validator(mode="after")
    def _check_consistency(self) -> 'RunConfig':
        if len(self.payoff_a) != self.layers or len(self.payoff_b) != self.layers:
            raise ValueError(
                f"--payoff-a: payoff lists have {len(self.payoff_a)} and {len(self.payoff_b)} entries, "
                f"--layers is {self.layers}"
            )
        try:
            self.payoff()
        except ValidationError as e:
            raise ValueError(diagnostic(e, "payoff_a")) from None
        try:
            if self.command is Command.ANALYTIC:
                self.analytic_params()
            elif self.command is Command.SWEEP:
                self.sweep_spec()
            elif self.command is Command.COMPARE:
                self.sweep_spec(SweptParameter.SEED_FRACTION)
        except ValidationError as e:
            raise ValueError(diagnostic(e, "grid")) from None
        return self

    def payoff(self) -> PayoffVector:
        return PayoffVector(a=self.payoff_a, b=self.payoff_b)

    def gen_params(self) -> GenParams:
        return GenParams(n=self.nodes, l=self.layers, p=self.edge_prob, rng_seed=self.rng_seed)

    def analytic_params(self) -> AnalyticParams:
        return AnalyticParams(n=self.nodes, p=self.edge_prob, l=self.layers, pay=self.payoff(), q0=self.seed_fraction)

    def sweep_spec(self, parameter: Optional[SweptParameter] = None) -> SweepSpec:
        parameter = parameter or self.param
        base = SweepBase(
            n=self.nodes, p=self.edge_prob, l=self.layers, pay=self.payoff(),
            q0=self.seed_fraction, rule=self.rule,
        )
        return SweepSpec(
            base=base,
            swept_parameter=parameter,
            grid=self.grid if self.grid is not None else default_grid(parameter),
            samples=self.samples,
            max_steps=self.max_steps,
            rng_seed=self.rng_seed,
            workers=self.workers,
        )

    def to_argv(self) -> List[str]:
        """Flags that parse back to this configuration."""
        argv = [
            self.command.value,
            "--nodes", str(self.nodes),
            "--layers", str(self.layers),
            "--edge-prob", repr(self.edge_prob),
            "--payoff-a", ",".join(repr(v) for v in self.payoff_a),
            "--payoff-b", ",".join(repr(v) for v in self.payoff_b),
            "--seed-fraction", repr(self.seed_fraction),
            "--rule", self.rule.value,
            "--max-steps", str(self.max_steps),
            "--samples", str(self.samples),
            "--rng-seed", str(self.rng_seed),
            "--param", self.param.value,
        ]
        if self.workers is not None:
            argv += ["--workers", str(self.workers)]
        if self.output is not None:
            argv += ["--output", self.output]
        if self.network is not None:
            argv += ["--network", self.network]
        if self.grid is not None:
            argv += ["--grid", ",".join(v.value if isinstance(v, RuleName) else repr(v) for v in self.grid)]
        if self.companion is not None:
            argv += ["--companion", self.companion]
        return argv
