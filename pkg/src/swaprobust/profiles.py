"""Core election types: ballots, preference profiles, and swap distance.

Candidates are dense integer ids in ``[0, m)``. A ballot is a strict order
over a subset of candidates, most preferred first; a ballot that ranks
fewer than ``m`` candidates is top-truncated and implicitly prefers every
ranked candidate to every unranked one.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

# A ballot is a plain tuple of candidate ids, most preferred first.
# Keeping it a tuple (rather than a wrapper class) keeps perturbation and
# enumeration hot paths allocation-light; validation happens at profile
# construction and inside the operations that need stronger preconditions.
Ballot = tuple[int, ...]


class ProfileError(ValueError):
    """Invalid ballot or profile structure."""


class DistanceUndefinedError(ProfileError):
    """Swap distance requested for rankings it is not defined on."""


def validate_ballot(ballot: Sequence[int], m: int) -> Ballot:
    """Return ``ballot`` as a tuple, checking it is a valid ballot for ``m``.

    Raises:
        ProfileError: on duplicates, out-of-range ids, or empty ballots.
    """
    b = tuple(int(c) for c in ballot)
    if len(b) < 1:
        raise ProfileError("ballot must rank at least one candidate")
    if len(b) > m:
        raise ProfileError(f"ballot ranks {len(b)} candidates but m={m}")
    seen = set()
    for c in b:
        if c < 0 or c >= m:
            raise ProfileError(f"candidate id {c} out of range [0, {m})")
        if c in seen:
            raise ProfileError(f"candidate id {c} appears twice in ballot")
        seen.add(c)
    return b


def default_candidate_names(m: int) -> tuple[str, ...]:
    """Lowercase letters for small m, ``c<i>`` beyond that."""
    if m <= 26:
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"c{i}" for i in range(m))


@dataclass(frozen=True)
class PreferenceProfile:
    """An election: ``m`` candidates and an ordered sequence of ballots.

    Ballot order is significant because perturbation replaces ballots
    position by position. Instances are immutable and safe to share
    across worker processes.
    """

    m: int
    candidate_names: tuple[str, ...]
    ballots: tuple[Ballot, ...]

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ProfileError("profile needs at least one candidate")
        names = tuple(str(s) for s in self.candidate_names)
        if len(names) != self.m:
            raise ProfileError(
                f"expected {self.m} candidate names, got {len(names)}"
            )
        ballots = tuple(validate_ballot(b, self.m) for b in self.ballots)
        if len(ballots) < 1:
            raise ProfileError("profile needs at least one ballot")
        object.__setattr__(self, "candidate_names", names)
        object.__setattr__(self, "ballots", ballots)

    @classmethod
    def from_ballots(
        cls,
        ballots: Iterable[Sequence[int]],
        m: int,
        candidate_names: Sequence[str] | None = None,
    ) -> "PreferenceProfile":
        names = (
            tuple(candidate_names)
            if candidate_names is not None
            else default_candidate_names(m)
        )
        return cls(m=m, candidate_names=names, ballots=tuple(tuple(b) for b in ballots))

    @property
    def n(self) -> int:
        """Number of ballots."""
        return len(self.ballots)

    @property
    def is_complete(self) -> bool:
        """True when every ballot ranks all m candidates."""
        return all(len(b) == self.m for b in self.ballots)


def _count_inversions(seq: list[int]) -> int:
    # Bottom-up merge sort; counts pairs out of natural order in O(k log k).
    a = list(seq)
    k = len(a)
    buf = [0] * k
    inv = 0
    width = 1
    while width < k:
        for lo in range(0, k, 2 * width):
            mid = min(lo + width, k)
            hi = min(lo + 2 * width, k)
            if mid >= hi:
                continue
            i, j, out = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[out] = a[i]
                    i += 1
                else:
                    buf[out] = a[j]
                    j += 1
                    inv += mid - i
                out += 1
            while i < mid:
                buf[out] = a[i]
                i += 1
                out += 1
            while j < hi:
                buf[out] = a[j]
                j += 1
                out += 1
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return inv


def swap_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of candidate pairs the two rankings order differently.

    Both arguments must be complete rankings of the same candidate set
    (for ballots drawn from a profile with truncation, that means equal
    ranked subsets). Equals the minimum number of adjacent transpositions
    turning one ranking into the other.

    Raises:
        DistanceUndefinedError: if the candidate sets differ.
    """
    ta, tb = tuple(a), tuple(b)
    if len(ta) != len(tb) or set(ta) != set(tb):
        raise DistanceUndefinedError(
            "swap distance requires two complete rankings of the same candidate set"
        )
    if len(set(ta)) != len(ta):
        raise DistanceUndefinedError("ranking contains duplicate candidates")
    pos_b = {c: i for i, c in enumerate(tb)}
    return _count_inversions([pos_b[c] for c in ta])


def election_distance(p: PreferenceProfile, q: PreferenceProfile) -> int:
    """Sum of per-ballot swap distances between two paired profiles."""
    if p.m != q.m or p.n != q.n:
        raise DistanceUndefinedError(
            "election distance requires equal candidate and ballot counts"
        )
    return sum(swap_distance(x, y) for x, y in zip(p.ballots, q.ballots))


def single_swap_neighbors(p: PreferenceProfile) -> list[PreferenceProfile]:
    """All profiles reachable by one adjacent swap inside one ballot.

    The result has exactly ``sum(len(v) - 1 for v in p.ballots)`` entries,
    in ballot order and top-to-bottom swap order within each ballot.
    """
    out: list[PreferenceProfile] = []
    ballots = list(p.ballots)
    for i, ballot in enumerate(ballots):
        for j in range(len(ballot) - 1):
            swapped = list(ballot)
            swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
            neighbor = ballots[:i] + [tuple(swapped)] + ballots[i + 1 :]
            out.append(
                PreferenceProfile(
                    m=p.m,
                    candidate_names=p.candidate_names,
                    ballots=tuple(neighbor),
                )
            )
    return out
