"""Mallows noise model over rankings.

A Mallows distribution around a center ranking ``v*`` with dispersion
``phi`` in [0, 1] assigns each ranking ``v`` of the same candidates the
probability ``phi ** kappa(v, v*) / Z`` where ``kappa`` is the swap
distance and ``Z = prod_{i=1..k} (1 + phi + ... + phi**(i-1))``.

``phi`` is awkward to compare across ranking lengths, so callers usually
specify a normalized dispersion ``norm_phi`` in [0, 1], defined so that
the expected swap distance between a sample and the center equals
``norm_phi * k * (k - 1) / 4`` (half the uniform-limit expectation at
``norm_phi = 1``). :func:`calibrate_norm_phi` converts one to the other.
"""

from __future__ import annotations

import functools
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import _batch
from .profiles import Ballot, ProfileError, swap_distance


def normalizing_constant(phi: float, k: int) -> float:
    """Z(phi, k) = prod_{i=1..k} (1 + phi + ... + phi**(i-1))."""
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must be in [0, 1], got {phi}")
    if k < 1:
        raise ValueError("k must be >= 1")
    z = 1.0
    term = 0.0
    power = 1.0
    for _ in range(k):
        term += power
        power *= phi
        z *= term
    return z


def expected_swap_distance(phi: float, k: int) -> float:
    """Exact expected swap distance to the center under Mallows(phi, k).

    Computed as the sum over insertion steps of the repeated-insertion
    model, E = sum_{i=1..k} (sum_j j*phi**j) / (sum_j phi**j) with j
    ranging over 0..i-1. This form stays finite at phi = 1, where it
    reduces to k(k-1)/4. Monotone non-decreasing in phi.
    """
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must be in [0, 1], got {phi}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if phi == 0.0:
        return 0.0
    total = 0.0
    num = 0.0  # sum of j * phi**j for j < i
    den = 1.0  # sum of phi**j for j < i
    power = 1.0
    for i in range(1, k):
        power *= phi
        num += i * power
        den += power
        total += num / den
    return total


@functools.lru_cache(maxsize=None)
def calibrate_norm_phi(norm_phi: float, k: int) -> float:
    """Dispersion phi whose expected swap distance is norm_phi * k(k-1)/4.

    Solved by bisection to absolute tolerance 1e-10 on phi; the endpoints
    map exactly (0 -> 0, 1 -> 1) and a length-1 ranking has nothing to
    perturb, so k = 1 always yields phi = 0. Results are memoized since
    profiles typically contain many ballots of the same length.
    """
    if not 0.0 <= norm_phi <= 1.0:
        raise ValueError(f"norm_phi must be in [0, 1], got {norm_phi}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1 or norm_phi == 0.0:
        return 0.0
    if norm_phi == 1.0:
        return 1.0
    target = norm_phi * k * (k - 1) / 4.0
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-10:
        mid = (lo + hi) / 2.0
        if expected_swap_distance(mid, k) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class MallowsParams:
    """Center ranking plus dispersion, with optional norm_phi provenance.

    When ``norm_phi`` is given, ``phi`` must equal its calibrated value
    for the center's length (within calibration tolerance).
    """

    center: Ballot
    phi: float
    norm_phi: float | None = None

    def __post_init__(self) -> None:
        center = tuple(int(c) for c in self.center)
        if len(center) < 1:
            raise ProfileError("center ranking must be non-empty")
        if len(set(center)) != len(center):
            raise ProfileError("center ranking contains duplicates")
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must be in [0, 1], got {self.phi}")
        if self.norm_phi is not None:
            expected = calibrate_norm_phi(float(self.norm_phi), len(center))
            if abs(expected - self.phi) > 1e-8:
                raise ValueError(
                    f"phi={self.phi} inconsistent with norm_phi={self.norm_phi} "
                    f"(calibrated {expected})"
                )
        object.__setattr__(self, "center", center)

    @classmethod
    def from_norm_phi(cls, center: Ballot, norm_phi: float) -> "MallowsParams":
        phi = calibrate_norm_phi(float(norm_phi), len(tuple(center)))
        return cls(center=tuple(center), phi=phi, norm_phi=float(norm_phi))

    @property
    def k(self) -> int:
        return len(self.center)


def pmf(params: MallowsParams, v: Ballot) -> float:
    """Probability of ranking ``v`` under the given Mallows parameters.

    ``v`` must be a complete ranking of the center's candidate set.
    Sums to 1 over all k! rankings. phi = 0 puts all mass on the center
    (0**0 = 1 convention).
    """
    kappa = swap_distance(v, params.center)
    if params.phi == 0.0:
        return 1.0 if kappa == 0 else 0.0
    return params.phi**kappa / normalizing_constant(params.phi, params.k)


@functools.lru_cache(maxsize=None)
def _step_cumweights(phi: float, k: int) -> tuple[tuple[float, ...], ...]:
    # cums[i] is the cumulative sum of (1, phi, ..., phi**i), used when
    # inserting the (i+1)-th candidate into a partial ranking of size i.
    out = []
    for i in range(1, k):
        cum = []
        total = 0.0
        power = 1.0
        for _ in range(i + 1):
            total += power
            power *= phi
            cum.append(total)
        out.append(tuple(cum))
    return tuple(out)


def sample(params: MallowsParams, rng: np.random.Generator) -> Ballot:
    """Draw one ranking distributed exactly as :func:`pmf`.

    Repeated insertion: walk the center from most to least preferred and
    insert the i-th candidate (1-based) with offset j in {0, ..., i-1}
    chosen with probability proportional to phi**j, placing it j
    positions above the bottom of the partial ranking. Offset j adds
    exactly j inversions, so the total offset equals the swap distance
    to the center. Consumes one uniform draw per insertion step.
    """
    center = params.center
    k = len(center)
    if params.phi == 0.0 or k == 1:
        return center
    cums = _step_cumweights(params.phi, k)
    out = [center[0]]
    for i in range(1, k):
        cum = cums[i - 1]
        j = bisect_right(cum, rng.random() * cum[-1])
        out.insert(len(out) - j, center[i])
    return tuple(out)


def sample_many(
    params: MallowsParams, count: int, rng: np.random.Generator
) -> list[Ballot]:
    """Draw ``count`` independent rankings from :func:`pmf`, vectorized.

    Equivalent in distribution to calling :func:`sample` repeatedly but
    much faster for large counts; the two paths consume random draws in
    different orders, so sequences for a shared seed differ.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    center = params.center
    k = len(center)
    if count == 0:
        return []
    if params.phi == 0.0 or k == 1:
        return [center] * count
    offsets = _batch.draw_offsets(params.phi, k, count, rng)
    positions = _batch.offsets_to_positions(offsets)
    centers = np.tile(np.asarray(center, dtype=np.int16), (count, 1))
    orders = _batch.apply_centers(positions, centers)
    return [tuple(int(c) for c in row) for row in orders]
