"""Batch kernels against the scalar reference implementations."""

import numpy as np
import pytest

from swaprobust import _batch
from swaprobust.mallows import MallowsParams, calibrate_norm_phi
from swaprobust.profiles import PreferenceProfile, swap_distance
from swaprobust.rules import (
    RuleSpec,
    bucklin_winners,
    copeland_winners,
    positional_winners,
    stv_winner,
)

from conftest import random_profile


def orders_to_profile(row: np.ndarray, m: int, names) -> PreferenceProfile:
    """One sample row (n, max_len) back to a profile, dropping pad ids."""
    ballots = tuple(
        tuple(int(c) for c in ballot if c != m) for ballot in row
    )
    return PreferenceProfile(m=m, candidate_names=names, ballots=ballots)


def sampled_profiles(p, norm_phi, samples, seed):
    prep = _batch.prepare(p)
    phis = {
        k: calibrate_norm_phi(norm_phi, k) for k, _, _ in prep.groups
    }
    rng = np.random.default_rng(seed)
    orders = _batch.sample_orders(prep, phis, samples, rng)
    return prep, orders


class TestOffsets:
    def test_shapes_and_ranges(self, rng):
        offsets = _batch.draw_offsets(0.7, 5, 200, rng)
        assert offsets.shape == (200, 5)
        assert (offsets[:, 0] == 0).all()
        for t in range(5):
            assert (offsets[:, t] <= t).all()
            assert (offsets[:, t] >= 0).all()

    def test_zero_phi_all_zero(self, rng):
        assert (_batch.draw_offsets(0.0, 4, 50, rng) == 0).all()

    def test_column_distribution(self, rng):
        # P(offset = j) proportional to phi**j within each column.
        phi = 0.5
        draws = 200000
        offsets = _batch.draw_offsets(phi, 3, draws, rng)
        for t in (1, 2):
            weights = phi ** np.arange(t + 1)
            probs = weights / weights.sum()
            counts = np.bincount(offsets[:, t], minlength=t + 1)
            for j in range(t + 1):
                se = np.sqrt(probs[j] * (1 - probs[j]) / draws)
                assert counts[j] / draws == pytest.approx(
                    probs[j], abs=5 * se
                )

    def test_positions_match_python_insertion(self, rng):
        offsets = rng.integers(0, np.arange(1, 7)[None, :], size=(50, 6))
        positions = _batch.offsets_to_positions(offsets)
        for row_off, row_pos in zip(offsets, positions):
            ranking = []
            for t, j in enumerate(row_off):
                ranking.insert(len(ranking) - int(j), t)
            expected = [ranking.index(t) for t in range(6)]
            assert list(row_pos) == expected

    def test_offset_sum_is_swap_distance(self, rng):
        center = np.arange(6, dtype=np.int16)
        offsets = _batch.draw_offsets(0.8, 6, 100, rng)
        positions = _batch.offsets_to_positions(offsets)
        centers = np.tile(center, (100, 1))
        orders = _batch.apply_centers(positions, centers)
        for row, off in zip(orders, offsets):
            assert swap_distance(tuple(range(6)), tuple(row)) == off.sum()

    def test_apply_centers_relabels(self, rng):
        # The same positions scatter any center labels consistently.
        offsets = _batch.draw_offsets(0.5, 4, 20, rng)
        positions = _batch.offsets_to_positions(offsets)
        center = np.array([9, 2, 7, 4], dtype=np.int16)
        orders = _batch.apply_centers(positions, np.tile(center, (20, 1)))
        for row in orders:
            assert sorted(row.tolist()) == [2, 4, 7, 9]


class TestPrepare:
    def test_groups_and_padding(self):
        p = PreferenceProfile.from_ballots(
            [(0, 1, 2), (2,), (1, 0), (2, 1, 0)], 3
        )
        prep = _batch.prepare(p)
        assert prep.m == 3
        assert prep.n == 4
        assert prep.max_len == 3
        assert [k for k, _, _ in prep.groups] == [1, 2, 3]
        k1 = prep.groups[0]
        assert k1[1].tolist() == [1]
        assert prep.base_orders.tolist() == [
            [0, 1, 2],
            [2, 3, 3],
            [1, 0, 3],
            [2, 1, 0],
        ]


class TestSampleOrders:
    def test_rows_permute_their_own_subset(self, rng):
        p = PreferenceProfile.from_ballots(
            [(0, 1, 2, 3), (3, 1), (2,), (1, 2, 0)], 4
        )
        prep, orders = sampled_profiles(p, 0.8, 40, 11)
        assert orders.shape == (40, 4, 4)
        for s in range(40):
            for v, ballot in enumerate(p.ballots):
                row = [int(c) for c in orders[s, v] if c != 4]
                assert sorted(row) == sorted(ballot)
                # padding stays at the tail
                assert all(
                    int(c) == 4 for c in orders[s, v, len(ballot):]
                )

    def test_zero_noise_is_identity(self, rng):
        p = random_profile(rng, m=5, n=7)
        prep, orders = sampled_profiles(p, 0.0, 10, 3)
        assert (orders == prep.base_orders[None, :, :]).all()

    def test_deterministic_for_seed(self, rng):
        p = random_profile(rng, m=4, n=6)
        _, a = sampled_profiles(p, 0.6, 25, 42)
        _, b = sampled_profiles(p, 0.6, 25, 42)
        assert (a == b).all()

    def test_sampling_matches_scalar_distribution(self):
        # Batch and scalar samplers draw from the same distribution:
        # compare swap-distance histograms for a single ballot shape.
        center = (0, 1, 2)
        params = MallowsParams.from_norm_phi(center, 0.5)
        p = PreferenceProfile.from_ballots([center], 3)
        draws = 30000
        _, orders = sampled_profiles(p, 0.5, draws, 5)
        batch_counts = np.zeros(4, dtype=np.int64)
        for s in range(draws):
            d = swap_distance(center, tuple(int(c) for c in orders[s, 0]))
            batch_counts[d] += 1
        from swaprobust.mallows import pmf
        import itertools

        exact = np.zeros(4)
        for perm in itertools.permutations(center):
            exact[swap_distance(center, perm)] += pmf(params, perm)
        for d in range(4):
            se = np.sqrt(exact[d] * (1 - exact[d]) / draws)
            assert batch_counts[d] / draws == pytest.approx(
                exact[d], abs=5 * se
            )


class TestPositions:
    def test_inverse_of_orders(self, rng):
        p = random_profile(rng, m=5, n=6)
        _, orders = sampled_profiles(p, 0.7, 15, 9)
        pos = _batch.positions_of_candidates(orders, 5)
        assert pos.shape == (15, 6, 5)
        for s in range(15):
            for v in range(6):
                row = [int(c) for c in orders[s, v] if c != 5]
                for c in range(5):
                    if c in row:
                        assert pos[s, v, c] == row.index(c)
                    else:
                        assert pos[s, v, c] == 5


class TestRowBincount:
    def test_matches_numpy(self, rng):
        values = rng.integers(0, 5, size=(30, 8))
        got = _batch._row_bincount(values, 4)
        for s in range(30):
            expected = np.bincount(values[s], minlength=5)[:4]
            assert (got[s] == expected).all()


class TestRuleKernels:
    @pytest.fixture
    def cases(self, rng):
        out = []
        for m, n, norm in [(3, 4, 0.4), (5, 9, 0.7), (4, 6, 1.0)]:
            p = random_profile(rng, m=m, n=n)
            prep, orders = sampled_profiles(p, norm, 30, seed=m * 101 + n)
            out.append((p, prep, orders))
        return out

    def test_positional_matches_scalar(self, cases):
        for p, prep, orders in cases:
            vec = tuple(float(x) for x in range(p.m, 0, -1))
            weights = np.asarray(vec)
            scores = _batch.positional_scores(orders, weights, p.m)
            mask = _batch.argmax_mask(scores)
            spec = RuleSpec(kind="positional", scoring_vector=vec)
            for s in range(orders.shape[0]):
                q = orders_to_profile(orders[s], p.m, p.candidate_names)
                ws = positional_winners(q, spec)
                assert scores[s].tolist() == pytest.approx(list(ws.scores))
                assert set(np.flatnonzero(mask[s])) == set(ws.winners)

    def test_best_k_matches_scalar(self, cases):
        for p, prep, orders in cases:
            vec = tuple(float(x) for x in range(p.m, 0, -1))
            for best_k in (1, 2, p.n):
                scores = _batch.best_k_scores(
                    orders, np.asarray(vec), p.m, best_k
                )
                spec = RuleSpec(
                    kind="positional", scoring_vector=vec, best_k=best_k
                )
                for s in range(orders.shape[0]):
                    q = orders_to_profile(
                        orders[s], p.m, p.candidate_names
                    )
                    ws = positional_winners(q, spec)
                    assert scores[s].tolist() == pytest.approx(
                        list(ws.scores)
                    )

    def test_copeland_matches_scalar(self, cases):
        for p, prep, orders in cases:
            pos = _batch.positions_of_candidates(orders, p.m)
            scores = _batch.copeland_scores(pos, p.n)
            for s in range(orders.shape[0]):
                q = orders_to_profile(orders[s], p.m, p.candidate_names)
                ws = copeland_winners(q)
                assert scores[s].tolist() == list(ws.scores)

    def test_bucklin_matches_scalar(self, cases):
        for p, prep, orders in cases:
            mask = _batch.bucklin_winner_mask(orders, p.n, p.m)
            for s in range(orders.shape[0]):
                q = orders_to_profile(orders[s], p.m, p.candidate_names)
                ws = bucklin_winners(q)
                assert set(np.flatnonzero(mask[s])) == set(ws.winners)

    def test_stv_matches_scalar(self, cases, rng):
        for p, prep, orders in cases:
            S = orders.shape[0]
            tb_orders = [
                tuple(int(c) for c in rng.permutation(p.m))
                for _ in range(S)
            ]
            tb_ranks = np.empty((S, p.m), dtype=np.int64)
            for s, order in enumerate(tb_orders):
                for rank, c in enumerate(order):
                    tb_ranks[s, c] = rank
            winners = _batch.stv_winners(orders, p.m, tb_ranks)
            for s in range(S):
                q = orders_to_profile(orders[s], p.m, p.candidate_names)
                assert int(winners[s]) == stv_winner(q, tb_orders[s])


class TestUniformTbRanks:
    def test_rows_are_rank_vectors(self, rng):
        ranks = _batch.uniform_tb_ranks(50, 5, rng)
        assert ranks.shape == (50, 5)
        for row in ranks:
            assert sorted(row.tolist()) == [0, 1, 2, 3, 4]

    def test_roughly_uniform(self, rng):
        draws = 30000
        ranks = _batch.uniform_tb_ranks(draws, 3, rng)
        # candidate 0 is rank 0 in 1/3 of orders
        frac = (ranks[:, 0] == 0).mean()
        assert frac == pytest.approx(1 / 3, abs=0.02)
