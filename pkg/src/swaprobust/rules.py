"""Winner determination: positional scoring, Copeland, Bucklin, and STV.

All rules accept top-truncated ballots. A truncated ballot prefers every
ranked candidate to every unranked one and expresses no preference
between two unranked candidates; majorities are always measured against
all n voters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .profiles import PreferenceProfile, ProfileError

KINDS = ("positional", "copeland", "bucklin", "stv")


class RuleError(ValueError):
    """Invalid rule specification or rule/profile mismatch."""


@dataclass(frozen=True)
class RuleSpec:
    """Which voting rule to apply.

    kind "positional" requires ``scoring_vector`` (non-increasing,
    length equal to the profile's m at evaluation time) and optionally
    ``best_k``: only a candidate's best_k highest per-ballot awards are
    summed (awards must then be non-negative, and best_k must not exceed
    the profile's ballot count). ``stv_tiebreak`` is an explicit strict
    order over all candidates used by :func:`stv_winner`.
    """

    kind: str
    scoring_vector: tuple[float, ...] | None = None
    best_k: int | None = None
    stv_tiebreak: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise RuleError(f"unknown rule kind {self.kind!r}")
        if self.kind == "positional":
            if self.scoring_vector is None:
                raise RuleError("positional rule needs a scoring vector")
            vec = tuple(float(x) for x in self.scoring_vector)
            if any(a < b for a, b in zip(vec, vec[1:])):
                raise RuleError("scoring vector must be non-increasing")
            if self.best_k is not None:
                if self.best_k < 1:
                    raise RuleError("best_k must be positive")
                if any(x < 0 for x in vec):
                    raise RuleError(
                        "best_k aggregation requires non-negative scores"
                    )
            object.__setattr__(self, "scoring_vector", vec)
        else:
            if self.scoring_vector is not None or self.best_k is not None:
                raise RuleError(
                    f"{self.kind} rule takes no scoring vector or best_k"
                )
        if self.stv_tiebreak is not None:
            if self.kind != "stv":
                raise RuleError("stv_tiebreak only applies to kind 'stv'")
            object.__setattr__(
                self, "stv_tiebreak", tuple(int(c) for c in self.stv_tiebreak)
            )

    @classmethod
    def plurality(cls, m: int) -> "RuleSpec":
        return cls(kind="positional", scoring_vector=(1.0,) + (0.0,) * (m - 1))

    @classmethod
    def borda(cls, m: int) -> "RuleSpec":
        return cls(
            kind="positional",
            scoring_vector=tuple(float(m - 1 - i) for i in range(m)),
        )

    @classmethod
    def positional(
        cls, vector: Sequence[float], best_k: int | None = None
    ) -> "RuleSpec":
        return cls(
            kind="positional", scoring_vector=tuple(vector), best_k=best_k
        )

    @classmethod
    def copeland(cls) -> "RuleSpec":
        return cls(kind="copeland")

    @classmethod
    def bucklin(cls) -> "RuleSpec":
        return cls(kind="bucklin")

    @classmethod
    def stv(cls, tiebreak: Sequence[int] | None = None) -> "RuleSpec":
        return cls(
            kind="stv",
            stv_tiebreak=tuple(tiebreak) if tiebreak is not None else None,
        )


@dataclass(frozen=True)
class WinnerSet:
    """Winners plus the per-candidate score record that produced them.

    Score semantics depend on the rule: positional scores, Copeland
    scores, (level, count) pairs for Bucklin, or the elimination round
    for STV (the survivor gets round m). Winners are the argmax of the
    rule's score ordering.
    """

    winners: tuple[int, ...]
    scores: tuple


def _argmax_set(keys: Sequence) -> tuple[int, ...]:
    best = max(keys)
    return tuple(i for i, k in enumerate(keys) if k == best)


def positional_winners(p: PreferenceProfile, spec: RuleSpec) -> WinnerSet:
    """Positional scoring; ballot of length j awards its first j entries.

    With ``best_k`` set, a candidate's score is the sum of its best_k
    highest per-ballot awards instead of the sum over all ballots.
    """
    if spec.kind != "positional":
        raise RuleError(f"expected positional rule, got {spec.kind}")
    vec = spec.scoring_vector
    assert vec is not None
    if len(vec) != p.m:
        raise RuleError(
            f"scoring vector length {len(vec)} does not match m={p.m}"
        )
    if spec.best_k is not None and spec.best_k > p.n:
        raise RuleError(f"best_k={spec.best_k} exceeds ballot count {p.n}")
    if spec.best_k is None:
        scores = [0.0] * p.m
        for ballot in p.ballots:
            for i, c in enumerate(ballot):
                scores[c] += vec[i]
    else:
        awards: list[list[float]] = [[] for _ in range(p.m)]
        for ballot in p.ballots:
            for i, c in enumerate(ballot):
                awards[c].append(vec[i])
        scores = [
            sum(sorted(a, reverse=True)[: spec.best_k]) for a in awards
        ]
    return WinnerSet(winners=_argmax_set(scores), scores=tuple(scores))


def copeland_winners(p: PreferenceProfile) -> WinnerSet:
    """Pairwise-majority wins minus losses, strict majorities over all n."""
    m, n = p.m, p.n
    prefer = [[0] * m for _ in range(m)]
    for ballot in p.ballots:
        rank = {c: i for i, c in enumerate(ballot)}
        ranked = list(ballot)
        unranked = [c for c in range(m) if c not in rank]
        for i, c in enumerate(ranked):
            for d in ranked[i + 1 :]:
                prefer[c][d] += 1
            for d in unranked:
                prefer[c][d] += 1
    scores = [0] * m
    for c in range(m):
        for d in range(m):
            if c == d:
                continue
            if 2 * prefer[c][d] > n:
                scores[c] += 1
            if 2 * prefer[d][c] > n:
                scores[c] -= 1
    return WinnerSet(winners=_argmax_set(scores), scores=tuple(scores))


def bucklin_winners(p: PreferenceProfile) -> WinnerSet:
    """Simplified Bucklin with cumulative counts.

    i_c is the minimal depth at which c appears in more than half of all
    n ballots; winners have the minimal i* and, among those, the highest
    count within the first i* positions. If truncation prevents any
    strict majority, winners are the candidates appearing in the most
    ballots within the first m positions (recorded level m + 1).

    Scores are (level, count) pairs per candidate: level is i_c (m + 1
    when no majority is ever reached) and count is the cumulative
    appearance count at depth min(i_c, m). Maximizing (-level, count)
    yields the winner set in both the majority and fallback cases.
    """
    m, n = p.m, p.n
    cum = [0] * m
    level = [m + 1] * m
    count_at_level = [0] * m
    for depth in range(m):
        for ballot in p.ballots:
            if depth < len(ballot):
                cum[ballot[depth]] += 1
        for c in range(m):
            if level[c] == m + 1 and 2 * cum[c] > n:
                level[c] = depth + 1
                count_at_level[c] = cum[c]
    for c in range(m):
        if level[c] == m + 1:
            count_at_level[c] = cum[c]
    winners = _argmax_set(
        [(-level[c], count_at_level[c]) for c in range(m)]
    )
    scores = tuple((level[c], count_at_level[c]) for c in range(m))
    return WinnerSet(winners=winners, scores=scores)


def _validate_tiebreak(tiebreak: Sequence[int], m: int) -> tuple[int, ...]:
    tb = tuple(int(c) for c in tiebreak)
    if sorted(tb) != list(range(m)):
        raise RuleError("tiebreak must be a strict order over all candidates")
    return tb


def stv_winner(p: PreferenceProfile, tiebreak: Sequence[int]) -> int:
    """Single transferable vote with an explicit tie-break order.

    m - 1 rounds; each round removes the candidate with the lowest
    Plurality score among the survivors, where a ballot's point goes to
    its highest-ranked surviving candidate (none if all its candidates
    were eliminated). Score ties remove the candidate ranked last in
    ``tiebreak``. Always returns exactly one winner.
    """
    tb = _validate_tiebreak(tiebreak, p.m)
    rank = {c: i for i, c in enumerate(tb)}
    alive = set(range(p.m))
    for _ in range(p.m - 1):
        scores = {c: 0 for c in alive}
        for ballot in p.ballots:
            for c in ballot:
                if c in alive:
                    scores[c] += 1
                    break
        eliminated = min(alive, key=lambda c: (scores[c], -rank[c]))
        alive.discard(eliminated)
    return alive.pop()


def stv_result(p: PreferenceProfile, tiebreak: Sequence[int]) -> WinnerSet:
    """Like :func:`stv_winner` but records each candidate's elimination round.

    Scores are 1-based elimination rounds; the winner is never eliminated
    and gets round m.
    """
    tb = _validate_tiebreak(tiebreak, p.m)
    rank = {c: i for i, c in enumerate(tb)}
    alive = set(range(p.m))
    round_out = [p.m] * p.m
    for rnd in range(p.m - 1):
        scores = {c: 0 for c in alive}
        for ballot in p.ballots:
            for c in ballot:
                if c in alive:
                    scores[c] += 1
                    break
        eliminated = min(alive, key=lambda c: (scores[c], -rank[c]))
        alive.discard(eliminated)
        round_out[eliminated] = rnd + 1
    winner = alive.pop()
    return WinnerSet(winners=(winner,), scores=tuple(round_out))


def winners_of(p: PreferenceProfile, spec: RuleSpec) -> WinnerSet:
    """Dispatch a RuleSpec; STV requires spec.stv_tiebreak to be set."""
    if spec.kind == "positional":
        return positional_winners(p, spec)
    if spec.kind == "copeland":
        return copeland_winners(p)
    if spec.kind == "bucklin":
        return bucklin_winners(p)
    if spec.stv_tiebreak is None:
        raise RuleError("winners_of needs stv_tiebreak for an STV rule")
    return stv_result(p, spec.stv_tiebreak)
