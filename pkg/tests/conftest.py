"""Shared fixtures, independent oracles, and hypothesis strategies.

The oracles here deliberately re-derive results through different
algorithms than the library (quadratic pair counting instead of merge
sort, breadth-first search over transpositions, full enumeration,
straightforward rule re-implementations) so tests compare two
independent routes.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import strategies as st

from swaprobust.profiles import PreferenceProfile


# ---------------------------------------------------------------- distances


def oracle_pair_distance(a, b) -> int:
    """Discordant-pair count by direct O(k^2) comparison."""
    pos_a = {c: i for i, c in enumerate(a)}
    pos_b = {c: i for i, c in enumerate(b)}
    count = 0
    for x, y in itertools.combinations(a, 2):
        if (pos_a[x] - pos_a[y]) * (pos_b[x] - pos_b[y]) < 0:
            count += 1
    return count


def oracle_bfs_distance(a, b) -> int:
    """Minimum number of adjacent transpositions from a to b, by BFS."""
    start, goal = tuple(a), tuple(b)
    seen = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            return seen[cur]
        for i in range(len(cur) - 1):
            nxt = list(cur)
            nxt[i], nxt[i + 1] = nxt[i + 1], nxt[i]
            t = tuple(nxt)
            if t not in seen:
                seen[t] = seen[cur] + 1
                queue.append(t)
    raise AssertionError("goal not reachable")


# ------------------------------------------------------------------ Mallows


def oracle_expected_distance(phi: float, k: int) -> float:
    """Expected swap distance to the center, by full enumeration."""
    center = tuple(range(k))
    num = 0.0
    den = 0.0
    for perm in itertools.permutations(center):
        d = oracle_pair_distance(center, perm)
        w = phi**d
        num += d * w
        den += w
    return num / den


def oracle_pmf_table(phi: float, center) -> dict[tuple, float]:
    """Mallows pmf over all permutations of the center, by enumeration."""
    weights = {}
    for perm in itertools.permutations(center):
        weights[perm] = phi ** oracle_pair_distance(center, perm)
    total = sum(weights.values())
    return {perm: w / total for perm, w in weights.items()}


# -------------------------------------------------------------------- rules


def oracle_positional_scores(ballots, m, vector, best_k=None):
    awards = [[] for _ in range(m)]
    for ballot in ballots:
        for i, c in enumerate(ballot):
            awards[c].append(vector[i])
    if best_k is None:
        return [sum(a) for a in awards]
    return [sum(sorted(a, reverse=True)[:best_k]) for a in awards]


def oracle_copeland_scores(ballots, m, n):
    def prefers(ballot, c, d):
        # True when the ballot ranks c above d (unranked loses to ranked).
        if c in ballot and d in ballot:
            return ballot.index(c) < ballot.index(d)
        return c in ballot

    scores = []
    for c in range(m):
        s = 0
        for d in range(m):
            if c == d:
                continue
            for_c = sum(1 for b in ballots if prefers(b, c, d))
            for_d = sum(1 for b in ballots if prefers(b, d, c))
            if for_c * 2 > n:
                s += 1
            if for_d * 2 > n:
                s -= 1
        scores.append(s)
    return scores


def oracle_bucklin_winners(ballots, m, n):
    def count_at(c, depth):
        return sum(1 for b in ballots if c in b[:depth])

    levels = {}
    for c in range(m):
        levels[c] = next(
            (
                depth
                for depth in range(1, m + 1)
                if count_at(c, depth) * 2 > n
            ),
            None,
        )
    crossers = [c for c in range(m) if levels[c] is not None]
    if crossers:
        istar = min(levels[c] for c in crossers)
        eligible = [c for c in crossers if levels[c] == istar]
        best = max(count_at(c, istar) for c in eligible)
        return tuple(c for c in eligible if count_at(c, istar) == best)
    finals = [count_at(c, m) for c in range(m)]
    best = max(finals)
    return tuple(c for c in range(m) if finals[c] == best)


def oracle_stv_winner(ballots, m, tiebreak):
    tiebreak = list(tiebreak)

    def run(alive):
        if len(alive) == 1:
            return next(iter(alive))
        scores = {c: 0 for c in alive}
        for ballot in ballots:
            for c in ballot:
                if c in alive:
                    scores[c] += 1
                    break
        worst = min(scores.values())
        tied = [c for c in alive if scores[c] == worst]
        victim = max(tied, key=tiebreak.index)
        return run(alive - {victim})

    return run(set(range(m)))


# ----------------------------------------------------------------- profiles


def random_profile(
    rng: np.random.Generator,
    m: int,
    n: int,
    truncated: bool = True,
    names=None,
) -> PreferenceProfile:
    ballots = []
    for _ in range(n):
        perm = rng.permutation(m)
        length = int(rng.integers(1, m + 1)) if truncated else m
        ballots.append(tuple(int(c) for c in perm[:length]))
    return PreferenceProfile.from_ballots(ballots, m, candidate_names=names)


@st.composite
def st_ballot(draw, m: int, complete: bool = False):
    perm = draw(st.permutations(list(range(m))))
    length = m if complete else draw(st.integers(min_value=1, max_value=m))
    return tuple(perm[:length])


@st.composite
def st_profile(
    draw, max_m: int = 5, max_n: int = 6, complete: bool = False
):
    m = draw(st.integers(min_value=1, max_value=max_m))
    n = draw(st.integers(min_value=1, max_value=max_n))
    ballots = [draw(st_ballot(m, complete=complete)) for _ in range(n)]
    return PreferenceProfile.from_ballots(ballots, m)


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)


# --- acceptance reporting -------------------------------------------------

_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
