import math

import numpy as np
import pytest

from voteweight import (
    TOL,
    RandomizedCopeland,
    RandomizedPositional,
    SchemeConfig,
    SchemeState,
    act,
    anonymize,
    full_info_update,
    initial_state,
    partial_info_update,
    unanimous,
    voter_distribution,
)
from voteweight.errors import ConfigError, EstimatorUndefinedError

from conftest import random_rankings, ranking


def config(kind="full_info", n=3, T=100, eta=None):
    return SchemeConfig(kind, n=n, horizon=T, eta=eta)


class TestConfig:
    def test_default_eta_full_info(self):
        cfg = config(n=10, T=400)
        assert cfg.learning_rate == pytest.approx(math.sqrt(2 * math.log(10) / 400))

    def test_default_eta_partial_info(self):
        cfg = config("partial_info", n=10, T=400)
        assert cfg.learning_rate == pytest.approx(
            math.sqrt(2 * math.log(10) / (400 * 10))
        )

    def test_explicit_eta_wins(self):
        assert config(eta=0.25).learning_rate == 0.25

    def test_bad_kind(self):
        with pytest.raises(ConfigError):
            config("softmax")

    def test_bad_eta(self):
        with pytest.raises(ConfigError):
            config(eta=-1.0)


class TestVoterDistribution:
    def test_first_round_is_uniform(self):
        cfg = config(n=5)
        p = voter_distribution(initial_state(cfg), cfg)
        assert np.allclose(p, 0.2, atol=TOL)

    def test_softmax_by_hand(self):
        cfg = config(n=2, eta=1.0)
        p = voter_distribution(SchemeState(np.array([0.0, 1.0]), 0), cfg)
        z = 1 + math.exp(-1)
        assert np.allclose(p, [1 / z, math.exp(-1) / z], atol=1e-9)

    def test_shift_invariance(self, rng):
        cfg = config(n=6, eta=0.3)
        cum = rng.random(6) * 5
        base = voter_distribution(SchemeState(cum, 0), cfg)
        shifted = voter_distribution(SchemeState(cum + 17.0, 0), cfg)
        assert np.allclose(base, shifted, atol=TOL)

    def test_overflow_safety(self):
        cfg = config(n=2, eta=1.0)
        p = voter_distribution(SchemeState(np.array([0.0, 5000.0]), 0), cfg)
        assert np.isfinite(p).all()
        assert p[0] == pytest.approx(1.0, abs=1e-9)

    def test_permutation_equivariance(self, rng):
        cfg = config(n=5, eta=0.7)
        cum = rng.random(5) * 3
        perm = rng.permutation(5)
        base = voter_distribution(SchemeState(cum, 0), cfg)
        permuted = voter_distribution(SchemeState(cum[perm], 0), cfg)
        assert np.allclose(base[perm], permuted, atol=TOL)


class TestFullInfoUpdate:
    def test_borda_increment(self, abc, bac):
        cfg = config(n=2, T=10)
        rule = RandomizedPositional("borda")
        state = full_info_update(
            initial_state(cfg), cfg, [abc, bac], np.array([1.0, 0.0, 0.5]), rule
        )
        # voter 0 reports abc: (2/3, 1/3, 0) . (1, 0, 0.5) = 2/3
        assert state.cumulative[0] == pytest.approx(2 / 3, abs=TOL)
        assert state.t == 1

    def test_zero_losses(self, abc, bac):
        cfg = config(n=2, T=10)
        state = full_info_update(
            initial_state(cfg), cfg, [abc, bac], np.zeros(3),
            RandomizedPositional("borda"),
        )
        assert np.array_equal(state.cumulative, [0.0, 0.0])
        assert state.t == 1

    def test_identical_rankings_identical_increments(self, abc, rng):
        cfg = config(n=3, T=10)
        state = full_info_update(
            initial_state(cfg), cfg, [abc, abc, abc], rng.random(3),
            RandomizedCopeland(),
        )
        assert state.cumulative[0] == state.cumulative[1] == state.cumulative[2]

    def test_horizon_guard(self, abc):
        cfg = config(n=1, T=1)
        state = SchemeState(np.zeros(1), 1)
        with pytest.raises(ConfigError):
            full_info_update(state, cfg, [abc], np.zeros(3), RandomizedCopeland())


class TestPartialInfoUpdate:
    def test_importance_weighting(self):
        cfg = config("partial_info", n=2, T=10)
        state = partial_info_update(
            initial_state(cfg), cfg, chosen=1, observed_loss=0.75,
            probs=np.array([0.5, 0.5]),
        )
        assert np.allclose(state.cumulative, [0.0, 1.5], atol=TOL)

    def test_zero_observed_loss(self):
        cfg = config("partial_info", n=2, T=10)
        state = partial_info_update(
            initial_state(cfg), cfg, 0, 0.0, np.array([0.5, 0.5])
        )
        assert np.array_equal(state.cumulative, [0.0, 0.0])
        assert state.t == 1

    def test_small_probability_blows_up(self):
        cfg = config("partial_info", n=2, T=10)
        state = partial_info_update(
            initial_state(cfg), cfg, 0, 1.0, np.array([0.25, 0.75])
        )
        assert np.allclose(state.cumulative, [4.0, 0.0], atol=TOL)

    def test_touches_exactly_one_entry(self, rng):
        cfg = config("partial_info", n=6, T=10)
        before = SchemeState(rng.random(6), 3)
        after = partial_info_update(before, cfg, 4, 0.5, np.full(6, 1 / 6))
        changed = before.cumulative != after.cumulative
        assert changed.sum() == 1 and changed[4]

    def test_zero_probability_rejected(self):
        cfg = config("partial_info", n=2, T=10)
        with pytest.raises(EstimatorUndefinedError):
            partial_info_update(
                initial_state(cfg), cfg, 0, 0.5, np.array([0.0, 1.0])
            )


class TestAct:
    def test_constant_plays_first_voter(self, rng):
        cfg = config("constant", n=4)
        weights, chosen = act(SchemeState(np.array([9.0, 0, 0, 0]), 5), cfg, rng)
        assert np.array_equal(weights, [1, 0, 0, 0])
        assert chosen is None

    def test_deterministic_unilateral_plays_distribution(self, rng):
        cfg = config("deterministic_unilateral", n=3)
        weights, chosen = act(initial_state(cfg), cfg, rng)
        assert np.allclose(weights, 1 / 3, atol=TOL)
        assert chosen is None

    def test_point_mass_distribution_is_deterministic(self, rng):
        cfg = config("full_info", n=3, eta=1.0)
        state = SchemeState(np.array([0.0, 1e6, 1e6]), 0)
        for _ in range(10):
            weights, chosen = act(state, cfg, rng)
            assert chosen == 0
            assert np.array_equal(weights, [1, 0, 0])


class TestSingleVoterIdentity:
    def test_mixing_equals_averaging(self, rng):
        # evaluating the p-weighted profile must equal averaging over voters,
        # for rules that decompose across voters
        rule = RandomizedPositional("borda")
        for _ in range(30):
            votes = random_rankings(5, 4, rng)
            p = rng.random(5) + 1e-3
            p /= p.sum()
            mixed = rule.evaluate(anonymize(votes, p))
            averaged = sum(p[i] * rule.evaluate(unanimous(votes[i])) for i in range(5))
            assert np.max(np.abs(mixed - averaged)) <= TOL

    def test_copeland_does_not_decompose(self):
        # the identity fails for randomized Copeland: a known witness
        rule = RandomizedCopeland()
        votes = [ranking(0, 1, 2), ranking(1, 0, 2)]
        p = np.array([0.6, 0.4])
        mixed = rule.evaluate(anonymize(votes, p))
        averaged = p[0] * rule.evaluate(unanimous(votes[0])) + p[1] * rule.evaluate(
            unanimous(votes[1])
        )
        assert np.max(np.abs(mixed - averaged)) > 0.05
        assert not rule.is_distribution_over_unilaterals()


class TestEstimatorMoments:
    def test_unbiased_mean_and_second_moment(self, rng):
        # fixed round; draw (voter, winner) pairs and check the estimator sums
        n, m, draws = 5, 3, 10**5
        rule = RandomizedPositional("borda")
        votes = random_rankings(n, m, rng)
        ell = rng.random(m)
        p = rng.random(n) + 1e-3
        p /= p.sum()
        dists = np.array([rule.evaluate(unanimous(v)) for v in votes])
        exact = float(p @ (dists @ ell))

        voters = rng.choice(n, size=draws, p=p)
        u = rng.random(draws)
        winners = (np.cumsum(dists, axis=1)[voters] < u[:, None]).sum(axis=1)
        first = ell[winners]
        second = ell[winners] ** 2 / p[voters]

        stderr = first.std(ddof=1) / math.sqrt(draws)
        assert abs(first.mean() - exact) <= 3 * stderr
        second_stderr = second.std(ddof=1) / math.sqrt(draws)
        assert second.mean() <= n + 3 * second_stderr
