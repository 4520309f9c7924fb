"""Vectorized internals for sampling and winner evaluation.

Not public API. Everything here operates on numpy arrays shaped
(samples, voters, positions); the scalar implementations in
:mod:`swaprobust.mallows` and :mod:`swaprobust.rules` remain the
reference semantics, and the test suite checks agreement.

Conventions: candidate ids fit in int16; the value ``m`` is used as a
padding / sentinel id, so arrays reserve slot ``m`` where needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .profiles import PreferenceProfile


def draw_offsets(
    phi: float, k: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, k) insertion offsets; column t is in {0..t}, P(j) ~ phi**j.

    Column 0 is always 0. Consumes one uniform batch of size ``count``
    per column t >= 1, in ascending t order.
    """
    offsets = np.zeros((count, k), dtype=np.int64)
    if phi == 0.0 or k == 1 or count == 0:
        return offsets
    weights = phi ** np.arange(k, dtype=np.float64)
    for t in range(1, k):
        cum = np.cumsum(weights[: t + 1])
        cum /= cum[-1]
        u = rng.random(count)
        offsets[:, t] = np.searchsorted(cum, u, side="right")
    return offsets


def offsets_to_positions(offsets: np.ndarray) -> np.ndarray:
    """Final position of the t-th center candidate for each offset row.

    Mirrors repeated insertion: candidate t lands at slot t - j and every
    earlier candidate at or below that slot shifts down one. The row sum
    of ``offsets`` equals the swap distance of the resulting ranking to
    the center.
    """
    count, k = offsets.shape
    pos = np.empty((count, k), dtype=np.int64)
    for t in range(k):
        idx = t - offsets[:, t]
        if t:
            pos[:, :t] += pos[:, :t] >= idx[:, None]
        pos[:, t] = idx
    return pos


def apply_centers(positions: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Scatter center candidates into their sampled positions.

    positions: (count, k); centers: (count, k) int16 candidate ids.
    Returns (count, k) sampled rankings, most preferred first.
    """
    count, k = positions.shape
    out = np.empty((count, k), dtype=np.int16)
    rows = np.arange(count)[:, None]
    out[rows, positions] = centers
    return out


@dataclass(frozen=True)
class PreparedProfile:
    """Profile reshaped for batch perturbation and tallying."""

    m: int
    n: int
    lengths: np.ndarray  # (n,) ballot lengths
    max_len: int
    # ballots grouped by length: (k, ballot indices (g,), centers (g, k))
    groups: tuple[tuple[int, np.ndarray, np.ndarray], ...]
    base_orders: np.ndarray  # (n, max_len) original ballots padded with m


def prepare(profile: PreferenceProfile) -> PreparedProfile:
    m, n = profile.m, profile.n
    lengths = np.array([len(b) for b in profile.ballots], dtype=np.int64)
    max_len = int(lengths.max())
    by_len: dict[int, list[int]] = {}
    for i, b in enumerate(profile.ballots):
        by_len.setdefault(len(b), []).append(i)
    groups = []
    for k in sorted(by_len):
        idx = np.array(by_len[k], dtype=np.int64)
        centers = np.array(
            [profile.ballots[i] for i in by_len[k]], dtype=np.int16
        )
        groups.append((k, idx, centers))
    base = np.full((n, max_len), m, dtype=np.int16)
    for i, b in enumerate(profile.ballots):
        base[i, : len(b)] = b
    return PreparedProfile(
        m=m,
        n=n,
        lengths=lengths,
        max_len=max_len,
        groups=tuple(groups),
        base_orders=base,
    )


def sample_orders(
    prep: PreparedProfile,
    phi_by_len: dict[int, float],
    samples: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """(samples, n, max_len) perturbed ballots, padded with id m.

    Each ballot is replaced by a Mallows draw centered at itself over its
    own ranked subset, using ``phi_by_len[len]``. Draw order is fixed:
    groups by ascending ballot length, one offsets batch per insertion
    step. When every phi is zero no draws are consumed.
    """
    out = np.empty((samples, prep.n, prep.max_len), dtype=np.int16)
    out[:] = prep.base_orders[None, :, :]
    for k, idx, centers in prep.groups:
        phi = phi_by_len[k]
        if phi == 0.0 or k == 1:
            continue
        count = samples * len(idx)
        offsets = draw_offsets(phi, k, count, rng)
        positions = offsets_to_positions(offsets)
        tiled = np.tile(centers, (samples, 1))
        orders = apply_centers(positions, tiled).reshape(samples, len(idx), k)
        out[:, idx, :k] = orders
    return out


def positions_of_candidates(orders: np.ndarray, m: int) -> np.ndarray:
    """(S, n, m) rank of each candidate per ballot; unranked get m."""
    s, n, max_len = orders.shape
    pos = np.full((s, n, m + 1), m, dtype=np.int16)
    sidx = np.arange(s)[:, None]
    vidx = np.arange(n)[None, :]
    for i in range(max_len):
        pos[sidx, vidx, orders[:, :, i]] = i
    return pos[:, :, :m]


def _row_bincount(values: np.ndarray, m: int) -> np.ndarray:
    """Per-sample histogram over candidate ids; values (S, n) in [0, m]."""
    s = values.shape[0]
    base = (np.arange(s, dtype=np.int64) * (m + 1))[:, None]
    flat = (values.astype(np.int64) + base).ravel()
    counts = np.bincount(flat, minlength=s * (m + 1))
    return counts.reshape(s, m + 1)[:, :m]


def positional_scores(
    orders: np.ndarray, weights: np.ndarray, m: int
) -> np.ndarray:
    """(S, m) positional scores; pad entries (id m) are ignored."""
    s, n, max_len = orders.shape
    scores = np.zeros((s, m), dtype=np.float64)
    for i in range(min(max_len, len(weights))):
        w = weights[i]
        if w == 0.0:
            continue
        scores += w * _row_bincount(orders[:, :, i], m)
    return scores


def best_k_scores(
    orders: np.ndarray, weights: np.ndarray, m: int, best_k: int
) -> np.ndarray:
    """(S, m) sums of each candidate's best_k highest per-ballot awards.

    Requires non-negative weights: a candidate missing from a ballot is
    treated as receiving a zero award, which only coincides with "no
    award" when awards cannot be negative.
    """
    s, n, max_len = orders.shape
    awards = np.zeros((s, n, m + 1), dtype=np.float64)
    sidx = np.arange(s)[:, None]
    vidx = np.arange(n)[None, :]
    for i in range(min(max_len, len(weights))):
        awards[sidx, vidx, orders[:, :, i]] = weights[i]
    awards = awards[:, :, :m]
    if best_k >= n:
        return awards.sum(axis=1)
    top = np.partition(awards, n - best_k, axis=1)[:, n - best_k :, :]
    return top.sum(axis=1)


def copeland_scores(pos: np.ndarray, n: int) -> np.ndarray:
    """(S, m) Copeland scores from candidate positions with sentinel m.

    A voter prefers c to d when pos[c] < pos[d]; two unranked candidates
    share the sentinel and contribute to neither side. Majorities are
    strict and measured against all n voters.
    """
    s, _, m = pos.shape
    scores = np.zeros((s, m), dtype=np.int64)
    for c in range(m):
        pc = pos[:, :, c]
        for d in range(c + 1, m):
            pd = pos[:, :, d]
            c_over_d = (pc < pd).sum(axis=1)
            d_over_c = (pd < pc).sum(axis=1)
            c_beats = 2 * c_over_d > n
            d_beats = 2 * d_over_c > n
            scores[:, c] += c_beats
            scores[:, d] -= c_beats
            scores[:, d] += d_beats
            scores[:, c] -= d_beats
    return scores


def bucklin_winner_mask(orders: np.ndarray, n: int, m: int) -> np.ndarray:
    """(S, m) winner masks under simplified Bucklin.

    i_c is the first depth at which c appears in more than half of all n
    ballots; winners are the candidates with the most appearances within
    the first i* positions where i* is the minimal i_c. If nobody ever
    reaches a strict majority (possible with truncation), winners are the
    candidates with the most appearances within the first m positions.
    """
    s, _, max_len = orders.shape
    cum = np.zeros((s, max_len, m), dtype=np.int64)
    running = np.zeros((s, m), dtype=np.int64)
    for i in range(max_len):
        running = running + _row_bincount(orders[:, :, i], m)
        cum[:, i, :] = running
    majority = 2 * cum > n  # (S, depth, m)
    any_majority = majority.any(axis=2)  # (S, depth)
    has = any_majority.any(axis=1)
    istar = np.argmax(any_majority, axis=1)  # first True; 0 when none
    depth_idx = np.where(has, istar, max_len - 1)
    at_depth = np.take_along_axis(
        cum, depth_idx[:, None, None], axis=1
    ).squeeze(1)
    return at_depth == at_depth.max(axis=1, keepdims=True)


def stv_winners(
    orders: np.ndarray, m: int, tb_ranks: np.ndarray
) -> np.ndarray:
    """(S,) STV winners.

    tb_ranks[s, c] is c's position in the tie-break order (0 = most
    preferred, kept longest). Each round eliminates the candidate with
    the lowest Plurality score over still-alive candidates; ties
    eliminate the tie-break-last candidate. Exhausted ballots award
    nothing.
    """
    s, n, max_len = orders.shape
    alive = np.ones((s, m + 1), dtype=bool)
    alive[:, m] = False  # padding id is never alive
    sidx = np.arange(s)
    # smaller key is eliminated first: key = score * m + (m - 1 - rank)
    tb_component = (m - 1 - tb_ranks).astype(np.int64)
    for _ in range(m - 1):
        alive_at = alive[sidx[:, None, None], orders]  # (S, n, max_len)
        first = np.argmax(alive_at, axis=2)
        has_pick = np.take_along_axis(alive_at, first[:, :, None], 2).squeeze(2)
        top = np.take_along_axis(orders, first[:, :, None], 2).squeeze(2)
        top = np.where(has_pick, top, m).astype(np.int16)
        scores = _row_bincount(top, m)
        key = scores * np.int64(m) + tb_component
        key[~alive[:, :m]] = np.iinfo(np.int64).max
        eliminated = key.argmin(axis=1)
        alive[sidx, eliminated] = False
    return alive[:, :m].argmax(axis=1)


def argmax_mask(scores: np.ndarray) -> np.ndarray:
    """(S, m) boolean mask of per-row maxima (ties share)."""
    return scores == scores.max(axis=1, keepdims=True)


def uniform_tb_ranks(
    samples: int, m: int, rng: np.random.Generator
) -> np.ndarray:
    """(samples, m) ranks of uniformly random tie-break orders."""
    u = rng.random((samples, m))
    order = np.argsort(u, axis=1, kind="stable")
    return np.argsort(order, axis=1, kind="stable").astype(np.int64)
