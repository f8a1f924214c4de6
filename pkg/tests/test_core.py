import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voteweight import (
    TOL,
    ConstantUniform,
    RandomizedPositional,
    anonymize,
    expected_loss,
    make_ranking,
    sample_alternative,
    unanimous,
)
from voteweight.errors import (
    DegenerateWeightsError,
    InvalidRankingError,
    ShapeError,
)

from conftest import random_rankings, ranking


class TestMakeRanking:
    def test_identity_permutation(self):
        r = make_ranking([0, 1, 2], 3)
        assert r.order == (0, 1, 2)
        assert r.position(0) == 0

    def test_transposition_positions(self):
        r = make_ranking([1, 0, 2], 3)
        assert r.position(1) == 0
        assert r.position(0) == 1
        assert r.prefers(1, 0)

    def test_duplicate_id_rejected(self):
        with pytest.raises(InvalidRankingError):
            make_ranking([0, 0, 2], 3)

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidRankingError):
            make_ranking([0, 1, 3], 3)

    def test_wrong_length_rejected(self):
        with pytest.raises(InvalidRankingError):
            make_ranking([0, 1], 3)


class TestAnonymize:
    def test_unanimous_profile(self, abc):
        profile = anonymize([abc, abc], [1, 1])
        assert profile.mass == {abc: 1.0}

    def test_weight_fractions(self, abc, bca):
        profile = anonymize([abc, bca, bca, bca], [1, 1, 1, 1])
        assert profile.mass[abc] == pytest.approx(0.25, abs=TOL)
        assert profile.mass[bca] == pytest.approx(0.75, abs=TOL)

    def test_zero_total_weight(self, abc, bca):
        with pytest.raises(DegenerateWeightsError):
            anonymize([abc, bca], [0, 0])

    @given(seed=st.integers(0, 10**6), n=st.integers(1, 8), m=st.integers(1, 5))
    @settings(max_examples=60, deadline=None)
    def test_mass_sums_to_one(self, seed, n, m):
        rng = np.random.default_rng(seed)
        rankings = random_rankings(n, m, rng)
        weights = rng.random(n) + 1e-6
        profile = anonymize(rankings, weights)
        assert abs(sum(profile.mass.values()) - 1.0) <= TOL

    @given(seed=st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_voter_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        rankings = random_rankings(6, 3, rng)
        weights = rng.random(6) + 1e-6
        perm = rng.permutation(6)
        base = anonymize(rankings, weights)
        shuffled = anonymize([rankings[i] for i in perm], weights[perm])
        assert set(base.mass) == set(shuffled.mass)
        for r in base.mass:
            assert base.mass[r] == pytest.approx(shuffled.mass[r], abs=TOL)

    @given(seed=st.integers(0, 10**6), scale=st.floats(1e-3, 1e3))
    @settings(max_examples=40, deadline=None)
    def test_rescaling_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        rankings = random_rankings(5, 3, rng)
        weights = rng.random(5) + 1e-6
        base = anonymize(rankings, weights)
        scaled = anonymize(rankings, weights * scale)
        for r in base.mass:
            assert base.mass[r] == pytest.approx(scaled.mass[r], abs=1e-9)


class TestExpectedLoss:
    def test_dot_product_by_hand(self, abc):
        # randomized Borda on the unanimous profile gives (2/3, 1/3, 0)
        rule = RandomizedPositional("borda")
        loss = expected_loss(rule, unanimous(abc), np.array([1.0, 0.0, 0.5]))
        assert loss == pytest.approx(2 / 3, abs=TOL)

    def test_zero_losses(self, abc, bca):
        rule = ConstantUniform()
        profile = anonymize([abc, bca], [1, 2])
        assert expected_loss(rule, profile, np.zeros(3)) == 0.0

    def test_point_mass_distribution(self, abc):
        rule = RandomizedPositional("plurality")
        loss = expected_loss(rule, unanimous(abc), np.array([0.7, 0.1, 0.2]))
        assert loss == pytest.approx(0.7, abs=TOL)

    def test_shape_mismatch(self, abc):
        with pytest.raises(ShapeError):
            expected_loss(ConstantUniform(), unanimous(abc), np.zeros(4))

    @given(seed=st.integers(0, 10**6), alpha=st.floats(0, 1))
    @settings(max_examples=40, deadline=None)
    def test_linearity_in_losses(self, seed, alpha):
        rng = np.random.default_rng(seed)
        rule = RandomizedPositional("borda")
        profile = anonymize(random_rankings(4, 3, rng), rng.random(4) + 1e-6)
        l1, l2 = rng.random(3), rng.random(3)
        combined = expected_loss(rule, profile, alpha * l1 + (1 - alpha) * l2)
        split = alpha * expected_loss(rule, profile, l1) + (1 - alpha) * expected_loss(
            rule, profile, l2
        )
        assert combined == pytest.approx(split, abs=TOL)


class TestSample:
    def test_point_mass(self, rng):
        dist = np.array([0.0, 1.0, 0.0])
        assert all(sample_alternative(dist, rng) == 1 for _ in range(20))

    def test_point_mass_any_seed(self):
        dist = np.array([1.0, 0.0, 0.0])
        stale = np.random.default_rng(0)
        stale.random(100)
        fresh = np.random.default_rng(99)
        assert sample_alternative(dist, stale) == sample_alternative(dist, fresh) == 0

    def test_monte_carlo_frequency(self, rng):
        draws = 10**5
        dist = np.array([0.5, 0.5])
        hits = sum(sample_alternative(dist, rng) == 0 for _ in range(draws))
        assert abs(hits / draws - 0.5) <= 3 * math.sqrt(0.25 / draws)
