"""Tests for the command-line interface and result files."""

import json

import numpy as np
import pytest

from cli.app import ConfigError, main, parse_config
from cli.models import Command, RunConfig
from cli.serialization import (
    emit_results,
    format_network,
    load_network,
    parse_network,
    save_network,
    to_csv_text,
)
from core.analytics import AnalyticParams, analytic_curve
from core.dynamics import DiffusionTrace, TerminalStatus
from core.errors import NetworkFormatError, ResultsIOError
from core.network import GenParams, generate_er_multiplex
from core.rules import RuleName
from experiments.base import SweptParameter

DEFAULT_RUN = [
    "run", "--nodes", "500", "--layers", "2", "--edge-prob", "0.1",
    "--payoff-a", "2,2", "--payoff-b", "1,1", "--seed-fraction", "0.25",
    "--rule", "sum", "--rng-seed", "42",
]


class TestParseConfig:
    """Test flag and config-file parsing."""

    def test_default_command(self):
        """Test a full valid command line."""
        config = parse_config(DEFAULT_RUN)
        assert config.command is Command.RUN
        assert config.nodes == 500
        assert config.payoff_a == (2.0, 2.0)
        assert config.rule is RuleName.SUM
        assert config.rng_seed == 42
        assert config.max_steps == 50

    def test_constant_sum_violation(self):
        """Test that 2+1 and 3+1 payoffs are rejected naming the flag."""
        with pytest.raises(ConfigError, match="--payoff-a"):
            parse_config(["run", "--payoff-a", "2,3", "--payoff-b", "1,1"])

    def test_payoff_length_must_match_layers(self):
        """Test the layer count check."""
        with pytest.raises(ConfigError, match="--payoff-a"):
            parse_config(["run", "--layers", "3", "--payoff-a", "2,2", "--payoff-b", "1,1"])

    def test_payoffs_default_per_layer(self):
        """Test omitted payoffs on a three-layer config."""
        config = parse_config(["run", "--layers", "3"])
        assert config.payoff_a == (2.0, 2.0, 2.0)
        assert config.payoff_b == (1.0, 1.0, 1.0)

    def test_domain_error_names_flag(self):
        """Test a diagnostic for an out-of-range value."""
        with pytest.raises(ConfigError, match="--seed-fraction"):
            parse_config(["run", "--seed-fraction", "1.5"])
        with pytest.raises(ConfigError, match="--edge-prob"):
            parse_config(["analytic", "--edge-prob", "0"])

    def test_bad_grid_names_flag(self):
        """Test a sweep grid that does not increase."""
        with pytest.raises(ConfigError, match="--grid"):
            parse_config(["sweep", "--grid", "0.3,0.1"])

    def test_config_file_and_flags_compose(self):
        """Test that flags win over the config file."""
        text = json.dumps({"nodes": 120, "seed_fraction": 0.4, "rule": "dominant"})
        config = parse_config(["run", "--nodes", "80"], config_text=text)
        assert config.nodes == 80
        assert config.seed_fraction == 0.4
        assert config.rule is RuleName.DOMINANT

    def test_config_file_on_disk(self, tmp_path):
        """Test --config with a file path."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"samples": 3, "param": "layer_count", "grid": [1, 2]}))
        config = parse_config(["sweep", "--config", str(path)])
        assert config.samples == 3
        assert config.param is SweptParameter.LAYER_COUNT
        assert config.grid == (1.0, 2.0)

    def test_unknown_config_key(self):
        """Test that unknown config keys are rejected."""
        with pytest.raises(ConfigError, match="--colour"):
            parse_config(["run"], config_text=json.dumps({"colour": "blue"}))

    def test_rule_grid(self):
        """Test a rule sweep grid."""
        config = parse_config(["sweep", "--param", "rule", "--grid", "sum,random"])
        assert config.grid == (RuleName.SUM, RuleName.RANDOM)

    def test_render_round_trip(self):
        """Test parse(render(config)) == config on random valid configs."""
        rng = np.random.default_rng(5)
        commands = list(Command)
        for _ in range(50):
            layers = int(rng.integers(1, 4))
            total = float(rng.integers(2, 6))
            a = tuple(float(x) for x in rng.uniform(0.1, total - 0.1, size=layers))
            config = RunConfig(
                command=commands[int(rng.integers(0, len(commands)))],
                nodes=int(rng.integers(2, 1000)),
                layers=layers,
                edge_prob=float(rng.uniform(0.001, 1.0)),
                payoff_a=a,
                payoff_b=tuple(total - x for x in a),
                seed_fraction=float(rng.uniform(0.0, 1.0)),
                rule=list(RuleName)[int(rng.integers(0, 3))],
                max_steps=int(rng.integers(1, 100)),
                samples=int(rng.integers(1, 30)),
                rng_seed=int(rng.integers(0, 2 ** 63)),
                output="out.csv" if rng.random() < 0.5 else None,
            )
            assert parse_config(config.to_argv()) == config


class TestMain:
    """Test exit codes and end-to-end commands."""

    def test_empty_argv(self, capsys):
        """Test usage text and exit code 2."""
        assert main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        """Test argparse rejection."""
        assert main(["run", "--colour", "blue"]) == 2

    def test_unknown_rule_lists_registered_rules(self, capsys):
        """Test that --rule only accepts registered rule names."""
        assert main(["run", "--rule", "majority"]) == 2
        err = capsys.readouterr().err
        assert "invalid choice" in err
        assert all(name in err for name in ("sum", "dominant", "random"))

    def test_payoff_violation_exit_code(self, capsys):
        """Test exit code 2 with a diagnostic."""
        assert main(["run", "--payoff-a", "2,3", "--payoff-b", "1,1"]) == 2
        assert "--payoff-a" in capsys.readouterr().err

    def test_runtime_error_exit_code(self, tmp_path):
        """Test exit code 1 for a missing network file."""
        assert main(["run", "--network", str(tmp_path / "missing.txt")]) == 1

    def test_run_is_deterministic(self, tmp_path):
        """Test byte-identical output for the same seed."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["run", "--nodes", "200", "--rule", "random", "--rng-seed", "42"]
        assert main(args + ["-o", str(first)]) == 0
        assert main(args + ["-o", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text().splitlines()
        assert lines[0] == "step,adopters,fraction"
        assert lines[1] == "0,50,0.25"
        assert lines[-1].startswith("# terminal=")

    def test_sweep_and_compare_are_deterministic(self, tmp_path):
        """Test repeated sweeps and comparisons."""
        for command in (["sweep", "--param", "edge_probability", "--grid", "0.02,0.2"], ["compare"]):
            outputs = []
            for name in ("a.csv", "b.csv"):
                path = tmp_path / name
                args = command + ["--nodes", "80", "--samples", "2", "--rng-seed", "7", "-o", str(path)]
                assert main(args) == 0
                outputs.append(path.read_bytes())
            assert outputs[0] == outputs[1]

    def test_generate_then_run_on_saved_network(self, tmp_path):
        """Test diffusion on a saved network."""
        network = tmp_path / "net.txt"
        trace = tmp_path / "trace.csv"
        assert main(["generate", "--nodes", "50", "--layers", "3", "--edge-prob", "0.2", "-o", str(network)]) == 0
        assert load_network(network) == generate_er_multiplex(GenParams(n=50, l=3, p=0.2, rng_seed=0))
        assert main(["run", "--layers", "3", "--network", str(network), "-o", str(trace)]) == 0
        assert trace.read_text().startswith("step,adopters,fraction\n0,13,0.26000000000000001\n")

    def test_analytic_to_stdout(self, capsys):
        """Test the analytic curve on stdout."""
        assert main(["analytic", "--max-steps", "5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "m,q_m,bound_m"
        assert lines[1] == "0,0.25,0.25"
        assert len(lines) == 7

    def test_sweep_with_companion(self, tmp_path):
        """Test the seed-sweep companion file."""
        out, companion = tmp_path / "sweep.csv", tmp_path / "companion.csv"
        assert main(["sweep", "--nodes", "60", "--samples", "2", "--grid", "0.1,0.3",
                     "-o", str(out), "--companion", str(companion)]) == 0
        assert out.read_text().splitlines()[0] == (
            "param,value,mean_final_fraction,std_final_fraction,samples,mean_steps,complete_cascades,phase"
        )
        rows = companion.read_text().splitlines()
        assert rows[0] == "q0,alpha,bound_final,recurrence_final,mean_final_fraction"
        assert len(rows) == 3


class TestNetworkFiles:
    """Test the edge-list format."""

    def test_empty_graph_round_trip(self, tmp_path):
        """Test a graph without edges."""
        net = generate_er_multiplex(GenParams(n=7, l=2, p=0.0))
        path = tmp_path / "empty.txt"
        save_network(net, path)
        assert path.read_text() == "7 2\n"
        assert load_network(path) == net

    def test_generated_round_trip(self, tmp_path):
        """Test n=50, l=3, p=0.2."""
        net = generate_er_multiplex(GenParams(n=50, l=3, p=0.2, rng_seed=9))
        path = tmp_path / "net.txt"
        save_network(net, path)
        assert load_network(path) == net

    def test_format(self, path_network):
        """Test header and edge lines."""
        assert format_network(path_network) == "5 2\n0 0 1\n0 1 2\n0 2 3\n0 3 4\n1 0 4\n"

    def test_self_loop_rejected(self):
        """Test a self-loop line."""
        with pytest.raises(NetworkFormatError, match="line 2: self-loop") as excinfo:
            parse_network("6 2\n1 5 5\n")
        assert excinfo.value.line_number == 2

    def test_malformed_lines(self):
        """Test line numbers in diagnostics."""
        with pytest.raises(NetworkFormatError, match="line 3"):
            parse_network("6 2\n0 1 2\n0 1\n")
        with pytest.raises(NetworkFormatError, match="line 2"):
            parse_network("6 2\n0 a 2\n")
        with pytest.raises(NetworkFormatError, match="line 2"):
            parse_network("6 2\n2 1 2\n")
        with pytest.raises(NetworkFormatError, match="line 2"):
            parse_network("6 2\n0 4 1\n")
        with pytest.raises(NetworkFormatError, match="line 1"):
            parse_network("")

    def test_duplicate_edge_rejected(self):
        """Test that validation runs on load."""
        with pytest.raises(NetworkFormatError, match="duplicate"):
            parse_network("4 1\n0 1 2\n0 1 2\n")


class TestResultFiles:
    """Test CSV emission."""

    def test_trace_rows(self):
        """Test three data rows plus the terminal comment."""
        trace = DiffusionTrace(500, (125, 300, 500), TerminalStatus.COMPLETE_CASCADE, 2)
        lines = to_csv_text(trace).splitlines()
        assert lines[0] == "step,adopters,fraction"
        assert lines[1] == "0,125,0.25"
        assert lines[3] == "2,500,1"
        assert lines[4] == "# terminal=complete_cascade"
        assert len(lines) == 5

    def test_seventeen_digits(self):
        """Test round-trippable floats."""
        trace = DiffusionTrace(3, (1,), TerminalStatus.STEP_LIMIT, 0)
        value = to_csv_text(trace).splitlines()[1].split(",")[2]
        assert float(value) == 1 / 3
        assert value == "0.33333333333333331"

    def test_analytic_first_row(self):
        """Test that the bound starts at q0."""
        curve = analytic_curve(AnalyticParams.uniform(500, 0.1, 2, 2.0, 1.0, 0.25), 3)
        assert to_csv_text(curve).splitlines()[1] == "0,0.25,0.25"

    def test_reemission_is_byte_identical(self, tmp_path):
        """Test determinism of emission."""
        curve = analytic_curve(AnalyticParams.uniform(300, 0.05, 3, 2.0, 1.0, 0.2), 10)
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_results(curve, first)
        emit_results(curve, second)
        assert first.read_bytes() == second.read_bytes()

    def test_io_error_carries_path(self, tmp_path):
        """Test output failures."""
        target = tmp_path / "missing" / "out.csv"
        trace = DiffusionTrace(2, (1,), TerminalStatus.STEP_LIMIT, 0)
        with pytest.raises(ResultsIOError, match="missing"):
            emit_results(trace, target)

    def test_unsupported_result(self):
        """Test emission of an unknown result type."""
        with pytest.raises(TypeError):
            to_csv_text(42)
