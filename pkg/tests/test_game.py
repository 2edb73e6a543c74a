"""Tests for payoffs, neighbour tallies and best responses."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import IndexDomainError, ParameterDomainError, ShapeError
from core.game import (
    NeighborTally,
    PayoffVector,
    brute_force_decide,
    decide_dominant,
    decide_random,
    decide_sum,
    payoff_tally,
    seed_count_for,
    select_seeds,
    tally_neighbors,
)
from core.network import GenParams, generate_er_multiplex
from core.state import Strategy, StrategyState


def dyadic_payoffs(rng, l):
    """Exactly representable payoffs sharing an integer constant sum."""
    total = int(rng.integers(1, 5))
    a = tuple(int(k) / 8 for k in rng.integers(1, 8 * total, size=l))
    return PayoffVector(a=a, b=tuple(total - x for x in a))


class TestPayoffVector:
    """Test PayoffVector validation."""

    def test_uniform(self):
        """Test scalar payoffs replicated per layer."""
        pay = PayoffVector.uniform(2.0, 1.0, 3)
        assert pay.a == (2.0, 2.0, 2.0)
        assert pay.layers == 3
        assert pay.is_uniform

    def test_constant_sum_violation(self):
        """Test that a+b must be equal on every layer."""
        with pytest.raises(ValidationError, match="constant-sum"):
            PayoffVector(a=(2.0, 3.0), b=(1.0, 1.0))

    def test_heterogeneous_constant_sum_accepted(self):
        """Test layer-specific payoffs with a common sum."""
        pay = PayoffVector(a=(2.0, 1.5), b=(1.0, 1.5))
        assert not pay.is_uniform

    def test_non_positive_and_mismatched(self):
        """Test positivity and length checks."""
        with pytest.raises(ValidationError):
            PayoffVector(a=(0.0,), b=(3.0,))
        with pytest.raises(ValidationError):
            PayoffVector(a=(2.0, 2.0), b=(1.0,))
        with pytest.raises(ValidationError):
            PayoffVector(a=(), b=())


class TestDecisions:
    """Test sum, dominant and random best responses."""

    def test_sum_rule_examples(self, default_pay):
        """Test the summed payoff comparison."""
        assert decide_sum(NeighborTally((1, 0), (1, 1)), default_pay) is Strategy.A  # 2 vs 2
        assert decide_sum(NeighborTally((0, 1), (3, 0)), default_pay) is Strategy.B  # 2 vs 3
        assert decide_sum(NeighborTally((0, 0), (0, 0)), default_pay) is Strategy.B

    def test_payoff_tally(self, default_pay):
        """Test r and s per layer."""
        payoffs = payoff_tally(NeighborTally((1, 2), (3, 0)), default_pay)
        assert payoffs.r == (2.0, 4.0)
        assert payoffs.s == (3.0, 0.0)
        assert payoffs.r_total == 6.0
        assert payoffs.s_total == 3.0

    def test_dominant_needs_every_layer(self, default_pay):
        """Test that one losing layer blocks dominant adoption."""
        tally = NeighborTally((3, 0), (0, 1))
        assert decide_sum(tally, default_pay) is Strategy.A
        assert decide_dominant(tally, default_pay) is Strategy.B
        assert decide_dominant(NeighborTally((1, 0), (2, 0)), default_pay) is Strategy.A

    def test_random_uses_chosen_layer(self, default_pay):
        """Test the single-layer comparison."""
        tally = NeighborTally((3, 0), (0, 1))
        assert decide_random(tally, default_pay, 0) is Strategy.A
        assert decide_random(tally, default_pay, 1) is Strategy.B
        assert decide_random(NeighborTally((3, 0), (0, 0)), default_pay, 1) is Strategy.B
        with pytest.raises(IndexDomainError):
            decide_random(tally, default_pay, 2)

    def test_layer_mismatch(self, default_pay):
        """Test shape errors on mismatched layer counts."""
        with pytest.raises(ShapeError):
            decide_sum(NeighborTally((1,), (0,)), default_pay)
        with pytest.raises(ShapeError):
            NeighborTally((1, 2), (0,))

    def test_tally_from_pairs(self):
        """Test per-layer pairs and degrees."""
        tally = NeighborTally.from_pairs([(2, 1), (0, 0)])
        assert tally == NeighborTally((2, 0), (1, 0))
        assert tally.degree(0) == 3
        assert tally.total_degree == 3
        assert tally.degree(1) == 0

    def test_equal_payoffs_reduce_to_fraction_threshold(self):
        """Test that equal payoffs compare the A-neighbour share with b/(a+b)."""
        rng = np.random.default_rng(4)
        for _ in range(300):
            l = int(rng.integers(1, 4))
            a, b = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            pay = PayoffVector.uniform(float(a), float(b), l)
            ca = tuple(int(x) for x in rng.integers(0, 6, size=l))
            cb = tuple(int(x) for x in rng.integers(0, 6, size=l))
            tally = NeighborTally(ca, cb)
            degree = sum(ca) + sum(cb)
            expected = Strategy.A if degree and sum(ca) * (a + b) >= b * degree else Strategy.B
            assert decide_sum(tally, pay) is expected


class TestBruteForceOracle:
    """Test the per-edge game oracle against the tally-based rule."""

    def test_tally_neighbors(self, path_network):
        """Test exact per-layer counts."""
        state = StrategyState.initial(5, [0, 2])
        assert tally_neighbors(path_network, state, 1) == NeighborTally((2, 0), (0, 0))
        assert tally_neighbors(path_network, state, 4) == NeighborTally((0, 1), (1, 0))

    def test_oracle_agrees_with_sum_rule(self):
        """Test 1000 random small instances with zero mismatches."""
        rng = np.random.default_rng(2024)
        mismatches = 0
        for trial in range(1000):
            n = int(rng.integers(1, 9))
            l = int(rng.integers(1, 4))
            net = generate_er_multiplex(GenParams(n=n, l=l, p=float(rng.uniform(0.1, 0.9)), rng_seed=trial))
            pay = dyadic_payoffs(rng, l)
            adopted = rng.random(n) < 0.5
            state = StrategyState(adopted, np.zeros(n, dtype=bool))
            u = int(rng.integers(0, n))
            if brute_force_decide(net, state, pay, u) is not decide_sum(tally_neighbors(net, state, u), pay):
                mismatches += 1
        assert mismatches == 0

    def test_isolated_node_stays_b(self, path_network, default_pay):
        """Test that zero totals yield B."""
        net = generate_er_multiplex(GenParams(n=3, l=2, p=0.0))
        state = StrategyState.initial(3, [0, 1])
        assert brute_force_decide(net, state, default_pay, 2) is Strategy.B


class TestSeeds:
    """Test seed selection."""

    def test_seed_count_rounding(self):
        """Test round half up."""
        assert seed_count_for(500, 0.25) == 125
        assert seed_count_for(10, 0.25) == 3
        assert seed_count_for(10, 0.0) == 0
        assert seed_count_for(10, 1.0) == 10
        with pytest.raises(ParameterDomainError):
            seed_count_for(10, 1.2)

    def test_select_seeds(self):
        """Test size, uniqueness and determinism."""
        seeds = select_seeds(500, 0.25, 9)
        assert seeds.size == 125
        assert np.unique(seeds).size == 125
        assert np.all(np.diff(seeds) > 0)
        assert np.array_equal(seeds, select_seeds(500, 0.25, 9))
        assert not np.array_equal(seeds, select_seeds(500, 0.25, 10))

    def test_empty_seed_set_warns(self, caplog):
        """Test the warning on an empty seed set."""
        assert select_seeds(10, 0.01, 0).size == 0
        assert "empty seed set" in caplog.text
