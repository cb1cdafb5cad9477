import math

import numpy as np
import pytest

from conftest import kmeanspp_second_seed_marginal
from lloydlab.mixtures import MixtureSpec, model_functionals, check_initial_condition
from lloydlab.seeding import (
    default_truncation_level,
    seeding_tail_bound,
    kmeanspp_seed,
    oracle_init,
    chi_mean,
    seed_separation_event,
)


class TestKmeansppSeed:
    def test_every_point_chosen_when_k_equals_n(self):
        y = np.array([[0.0], [1.0], [5.0], [9.0]])
        _, idx = kmeanspp_seed(y, 4, seed=0)
        assert sorted(idx.tolist()) == [0, 1, 2, 3]

    def test_identical_points_rejected(self):
        y = np.ones((5, 2))
        with pytest.raises(ValueError, match="zero sampling mass"):
            kmeanspp_seed(y, 2, seed=0)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(1)
        y = rng.standard_normal((30, 3))
        a = kmeanspp_seed(y, 3, seed=7)
        b = kmeanspp_seed(y, 3, seed=7)
        assert np.array_equal(a[1], b[1])

    def test_chosen_rows_returned(self):
        rng = np.random.default_rng(2)
        y = rng.standard_normal((10, 2))
        centers, idx = kmeanspp_seed(y, 3, seed=3)
        assert np.array_equal(centers, y[idx])

    def test_conditional_rule_three_points(self):
        # points {0, 1, 3}: given first seed = 0, the sampling rule puts
        # probability 1/10 on 1 and 9/10 on 3.
        y = np.array([[0.0], [1.0], [3.0]])
        hits = {1: 0, 2: 0}
        total = 0
        for seed in range(30_000):
            _, idx = kmeanspp_seed(y, 2, seed=seed)
            if idx[0] == 0:
                hits[idx[1]] += 1
                total += 1
        freq_1 = hits[1] / total
        se = math.sqrt(0.1 * 0.9 / total)
        assert abs(freq_1 - 0.1) <= 3 * se

    def test_marginal_matches_enumeration_small_input(self):
        # two far blobs of two points each
        y = np.array([[0.0], [0.1], [10.0], [10.1]])
        probs = kmeanspp_second_seed_marginal(y)
        draws = 10_000
        counts = np.zeros(4)
        for seed in range(draws):
            _, idx = kmeanspp_seed(y, 2, seed=seed)
            counts[idx[1]] += 1
        freqs = counts / draws
        se = np.sqrt(probs * (1 - probs) / draws)
        assert np.all(np.abs(freqs - probs) <= 3 * se + 1e-12)
        # separation probability: oracle says different blobs almost surely
        blob = np.array([0, 0, 1, 1])
        exact_sep = 0.9999500000004998
        sep_draws = 0
        for seed in range(draws):
            _, idx = kmeanspp_seed(y, 2, seed=seed)
            sep_draws += blob[idx[0]] != blob[idx[1]]
        assert abs(sep_draws / draws - exact_sep) <= 0.03


class TestSeparationEvent:
    def test_separated(self):
        assert seed_separation_event([0, 3], np.array([0, 0, 1, 1])) is True

    def test_not_separated(self):
        assert seed_separation_event([0, 1], np.array([0, 0, 1, 1])) is False

    def test_requires_two_seeds(self):
        with pytest.raises(ValueError):
            seed_separation_event([0, 1, 2], np.array([0, 1, 0]))

    def test_monotone_in_separation(self):
        # separation frequency grows with Delta/sigma
        freqs = []
        for delta in (2.0, 6.0, 20.0):
            spec = MixtureSpec(centers=[[0.0, 0.0], [delta, 0.0]], sigma=1.0)
            hits = 0
            reps = 400
            for seed in range(reps):
                rng = np.random.default_rng(seed)
                labels = rng.integers(0, 2, 120)
                y = spec.centers[labels] + rng.standard_normal((120, 2))
                _, idx = kmeanspp_seed(y, 2, seed=seed + 10_000)
                hits += seed_separation_event(idx, labels)
            freqs.append(hits / reps)
        assert freqs[0] < freqs[1] < freqs[2]
        assert freqs[2] > 0.95


class TestChiMean:
    def test_r_one(self):
        assert chi_mean(1) == pytest.approx(math.sqrt(2.0 / math.pi), abs=1e-12)

    def test_r_two(self):
        assert chi_mean(2) == pytest.approx(math.sqrt(math.pi / 2.0), abs=1e-12)

    def test_large_r_asymptotics(self):
        assert abs(chi_mean(10_000) - 100.0) < 0.01

    def test_strictly_increasing(self):
        vals = [chi_mean(r) for r in range(1, 51)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_invalid_r(self):
        with pytest.raises(ValueError):
            chi_mean(0)


class TestEllOfA:
    def test_hand_value(self):
        got = seeding_tail_bound(truncation=5.0, eps_param=0.1, delta=10.0, sigma=1.0, r=2, center_norm=1.0)
        assert got == pytest.approx(0.22618294010207207, rel=1e-12)

    def test_vanishes_at_high_separation(self):
        # first and third terms die; only the truncation term survives
        psi2 = chi_mean(2)
        got = seeding_tail_bound(truncation=5.0, eps_param=0.1, delta=1e9, sigma=1.0, r=2, center_norm=1.0)
        expected_t2 = 2.0 * math.exp(-0.5 * (5.0 - (psi2 + 1.0)) ** 2)
        assert got == pytest.approx(expected_t2, rel=1e-9)

    def test_truncation_term_vanishes_for_large_a(self):
        small_a = seeding_tail_bound(truncation=default_truncation_level(1.0, 1.0, 2), eps_param=0.1,
                           delta=10.0, sigma=1.0, r=2, center_norm=1.0)
        large_a = seeding_tail_bound(truncation=1e6, eps_param=0.1, delta=10.0, sigma=1.0, r=2, center_norm=1.0)
        assert large_a < small_a

    def test_strictly_decreasing_in_separation(self):
        vals = [
            seeding_tail_bound(truncation=6.0, eps_param=0.1, delta=d, sigma=1.0, r=2, center_norm=1.0)
            for d in np.linspace(4.0, 30.0, 10)
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            seeding_tail_bound(5.0, 0.6, 10.0, 1.0, 2, 1.0)
        with pytest.raises(ValueError):
            seeding_tail_bound(5.0, 0.1, 10.0, 0.0, 2, 1.0)


class TestOracleInit:
    SPEC = MixtureSpec(centers=[[0.0, 0.0], [4.0, 0.0]], sigma=0.0)

    def test_zero_offset_returns_truth(self):
        assert np.array_equal(oracle_init(self.SPEC, 0.0, 1), self.SPEC.centers)

    def test_offset_is_exact_gamma(self):
        init = oracle_init(self.SPEC, 0.5, 2)
        dists = np.linalg.norm(init - self.SPEC.centers, axis=1)
        assert np.allclose(dists, 0.5 * 4.0, atol=1e-12)

    def test_threshold_flip_at_half(self):
        f = model_functionals(self.SPEC, np.array([0, 1] * 5), eps=0.0)
        assert check_initial_condition(None, 0.49, f, 0.0) == "satisfied_via_Gamma0"
        assert check_initial_condition(None, 0.51, f, 0.0) == "unsatisfied"

    def test_negative_offset_rejected(self):
        with pytest.raises(ValueError):
            oracle_init(self.SPEC, -0.1, 0)
