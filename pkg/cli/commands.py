"""Subcommand handlers."""

from typing import Callable, Dict
import logging
import time

from core.analytics import analytic_curve, cascade_step
from core.dynamics import DiffusionTrace, run
from core.errors import ShapeError
from core.game import select_seeds
from core.network import MultiplexNetwork, generate_er_multiplex
from core.random_streams import RULE_STREAM, derive_rng
from experiments.base import SweptParameter
from experiments.sweeps import SeedSweepReport, compare_strategies, run_sweep
from .models import Command, RunConfig
from .serialization import emit_companion, emit_results, load_network, save_network


logger = logging.getLogger(__name__)


def handle_generate(config: RunConfig) -> MultiplexNetwork:
    net = generate_er_multiplex(config.gen_params())
    logger.info(net.visualize())
    save_network(net, config.output)
    return net


def handle_run(config: RunConfig) -> DiffusionTrace:
    """One diffusion on a loaded or freshly generated network."""
    if config.network is not None:
        net = load_network(config.network)
        if net.l != config.layers:
            raise ShapeError(f"network has {net.l} layers but payoffs cover {config.layers}")
    else:
        net = generate_er_multiplex(config.gen_params())

    seeds = select_seeds(net.n, config.seed_fraction, config.rng_seed)
    trace = run(net, seeds, config.payoff(), config.rule, config.max_steps,
                derive_rng(config.rng_seed, RULE_STREAM))
    logger.info(
        f"Run finished: {trace.terminal_status.value}, {trace.final_count}/{net.n} adopters "
        f"after {trace.steps_run} step(s)"
    )
    emit_results(trace, config.output)
    return trace


def handle_analytic(config: RunConfig):
    curve = analytic_curve(config.analytic_params(), config.max_steps)
    step = cascade_step(curve.q)
    logger.info(
        f"alpha={curve.alpha:.6g}; recurrence "
        + (f"reaches a complete cascade at step {step}" if step is not None else "stays below a complete cascade")
    )
    emit_results(curve, config.output)
    return curve


def handle_sweep(config: RunConfig):
    result = run_sweep(config.sweep_spec())
    emit_results(result, config.output)
    if config.companion is not None:
        if isinstance(result, SeedSweepReport):
            emit_companion(result, config.companion)
        else:
            logger.warning(f"--companion applies to seed_fraction sweeps only, ignored for {config.param.value}")
    return result


def handle_compare(config: RunConfig):
    results = compare_strategies(config.sweep_spec(SweptParameter.SEED_FRACTION))
    emit_results(results, config.output)
    return results


HANDLERS: Dict[Command, Callable[[RunConfig], object]] = {
    Command.GENERATE: handle_generate,
    Command.RUN: handle_run,
    Command.ANALYTIC: handle_analytic,
    Command.SWEEP: handle_sweep,
    Command.COMPARE: handle_compare,
}


def execute(config: RunConfig):
    """Dispatch ``config`` to its subcommand handler."""
    start_time = time.time()
    logger.info(f"Starting {config.command.value} (rng_seed={config.rng_seed})")
    result = HANDLERS[config.command](config)
    logger.info(f"Finished {config.command.value} in {time.time() - start_time:.3f}s")
    return result
