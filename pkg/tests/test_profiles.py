import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swaprobust.profiles import (
    DistanceUndefinedError,
    PreferenceProfile,
    ProfileError,
    default_candidate_names,
    election_distance,
    single_swap_neighbors,
    swap_distance,
    validate_ballot,
)

from conftest import oracle_bfs_distance, oracle_pair_distance, st_ballot


class TestValidateBallot:
    def test_valid(self):
        assert validate_ballot([2, 0], 3) == (2, 0)

    def test_empty(self):
        with pytest.raises(ProfileError):
            validate_ballot([], 3)

    def test_too_long(self):
        with pytest.raises(ProfileError):
            validate_ballot([0, 1, 2, 3], 3)

    def test_out_of_range(self):
        with pytest.raises(ProfileError):
            validate_ballot([0, 3], 3)
        with pytest.raises(ProfileError):
            validate_ballot([-1], 3)

    def test_duplicate(self):
        with pytest.raises(ProfileError):
            validate_ballot([0, 1, 0], 3)


class TestProfile:
    def test_basic(self):
        p = PreferenceProfile.from_ballots([(0, 1), (1,)], 2)
        assert p.m == 2
        assert p.n == 2
        assert p.candidate_names == ("a", "b")
        assert not p.is_complete

    def test_complete(self):
        p = PreferenceProfile.from_ballots([(1, 0)], 2)
        assert p.is_complete

    def test_m_positive(self):
        with pytest.raises(ProfileError):
            PreferenceProfile(m=0, candidate_names=(), ballots=((0,),))

    def test_needs_ballots(self):
        with pytest.raises(ProfileError):
            PreferenceProfile(m=2, candidate_names=("a", "b"), ballots=())

    def test_name_count_mismatch(self):
        with pytest.raises(ProfileError):
            PreferenceProfile(m=2, candidate_names=("a",), ballots=((0,),))

    def test_invalid_ballot_rejected(self):
        with pytest.raises(ProfileError):
            PreferenceProfile.from_ballots([(0, 2)], 2)

    def test_default_names_large(self):
        names = default_candidate_names(30)
        assert names[0] == "c0"
        assert len(set(names)) == 30
        assert default_candidate_names(26)[-1] == "z"


class TestSwapDistance:
    def test_identity(self):
        assert swap_distance((0, 1, 2), (0, 1, 2)) == 0

    def test_known_value(self):
        assert swap_distance((0, 1, 2, 3), (1, 0, 3, 2)) == 2

    def test_reverse_is_max(self):
        k = 5
        a = tuple(range(k))
        assert swap_distance(a, a[::-1]) == k * (k - 1) // 2

    def test_single_element(self):
        assert swap_distance((4,), (4,)) == 0

    def test_different_sets(self):
        with pytest.raises(DistanceUndefinedError):
            swap_distance((0, 1), (0, 2))

    def test_different_lengths(self):
        with pytest.raises(DistanceUndefinedError):
            swap_distance((0, 1, 2), (0, 1))

    def test_works_on_sparse_ids(self):
        # Ballots over a subset of candidates keep their original ids.
        assert swap_distance((7, 2, 9), (9, 7, 2)) == 2

    @given(
        st.permutations(list(range(6))),
        st.permutations(list(range(6))),
    )
    def test_matches_pair_counting(self, a, b):
        assert swap_distance(a, b) == oracle_pair_distance(a, b)

    @given(
        st.permutations(list(range(4))),
        st.permutations(list(range(4))),
    )
    @settings(max_examples=40, deadline=None)
    def test_equals_min_adjacent_transpositions(self, a, b):
        assert swap_distance(a, b) == oracle_bfs_distance(a, b)

    @given(
        st.permutations(list(range(5))),
        st.permutations(list(range(5))),
    )
    def test_symmetric(self, a, b):
        assert swap_distance(a, b) == swap_distance(b, a)


class TestElectionDistance:
    def test_sums_ballot_distances(self):
        p = PreferenceProfile.from_ballots([(0, 1, 2), (2, 1)], 3)
        q = PreferenceProfile.from_ballots([(1, 0, 2), (2, 1)], 3)
        assert election_distance(p, q) == 1

    def test_shape_mismatch(self):
        p = PreferenceProfile.from_ballots([(0, 1)], 2)
        q = PreferenceProfile.from_ballots([(0, 1), (1, 0)], 2)
        with pytest.raises(DistanceUndefinedError):
            election_distance(p, q)

    def test_paired_ballots_must_share_candidates(self):
        p = PreferenceProfile.from_ballots([(0, 1)], 3)
        q = PreferenceProfile.from_ballots([(0, 2)], 3)
        with pytest.raises(DistanceUndefinedError):
            election_distance(p, q)


class TestSingleSwapNeighbors:
    def test_count(self):
        p = PreferenceProfile.from_ballots([(0, 1, 2), (1, 0), (2,)], 3)
        neighbors = single_swap_neighbors(p)
        assert len(neighbors) == sum(len(b) - 1 for b in p.ballots)

    def test_each_neighbor_at_distance_one(self):
        p = PreferenceProfile.from_ballots([(0, 1, 2), (2, 1, 0)], 3)
        for q in single_swap_neighbors(p):
            assert election_distance(p, q) == 1

    def test_order_is_ballot_then_depth(self):
        p = PreferenceProfile.from_ballots([(0, 1, 2)], 3)
        got = [q.ballots[0] for q in single_swap_neighbors(p)]
        assert got == [(1, 0, 2), (0, 2, 1)]

    def test_no_neighbors_for_singleton_ballots(self):
        p = PreferenceProfile.from_ballots([(0,), (1,)], 2)
        assert single_swap_neighbors(p) == []

    @given(st.data())
    @settings(max_examples=30, deadline=None)
    def test_shape_preserved(self, data):
        from conftest import st_profile

        p = data.draw(st_profile(max_m=4, max_n=4))
        for q in single_swap_neighbors(p):
            assert q.m == p.m
            assert q.n == p.n
            assert [len(b) for b in q.ballots] == [len(b) for b in p.ballots]
