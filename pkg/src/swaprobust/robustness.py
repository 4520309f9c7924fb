"""Winning-probability estimation under Mallows perturbation.

The central quantity is P_{E,c}(norm_phi): the probability that
candidate c wins election E after every ballot is independently replaced
by a Mallows sample centered at itself (over its own ranked subset) at
normalized dispersion norm_phi. Estimates are Monte Carlo over a grid of
noise levels; a brute-force enumeration oracle covers tiny instances.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _batch
from .mallows import MallowsParams, calibrate_norm_phi, pmf, sample
from .profiles import PreferenceProfile
from .rules import RuleSpec, RuleError, stv_winner, winners_of

# Samples are processed in fixed-size chunks so memory stays bounded and
# the random-draw order never depends on available memory or workers.
_CHUNK = 2000

_ENUM_BUDGET = 10**7


class EnumerationBudgetError(ValueError):
    """Exact enumeration would exceed the supported instance size."""


@dataclass(frozen=True)
class NoiseGrid:
    """Strictly increasing norm_phi levels plus a per-level sample count."""

    levels: tuple[float, ...]
    samples_per_level: int

    def __post_init__(self) -> None:
        levels = tuple(float(x) for x in self.levels)
        if not levels:
            raise ValueError("grid needs at least one level")
        if any(not 0.0 <= x <= 1.0 for x in levels):
            raise ValueError("levels must lie in [0, 1]")
        if any(a >= b for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if self.samples_per_level < 1:
            raise ValueError("samples_per_level must be positive")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def coarse(cls, samples_per_level: int = 500) -> "NoiseGrid":
        """Levels 0, 0.1, ..., 1 with 500 samples by default."""
        return cls(
            levels=tuple(i / 10 for i in range(11)),
            samples_per_level=samples_per_level,
        )

    @classmethod
    def fine(cls, samples_per_level: int = 10000) -> "NoiseGrid":
        """Levels 0.0025 * i for i = 0..200 with 10,000 samples by default."""
        return cls(
            levels=tuple(i / 400 for i in range(201)),
            samples_per_level=samples_per_level,
        )


@dataclass(frozen=True)
class RobustnessCurve:
    """Per-candidate winning-probability estimates over a noise grid.

    probabilities[i][c] estimates P(c wins) at levels[i]; samples[i] is
    the number of Monte Carlo samples behind that row (0 marks an exact,
    analytically evaluated row). For rules with shared ties a row may sum
    to more than 1; STV rows sum to 1.
    """

    levels: tuple[float, ...]
    probabilities: tuple[tuple[float, ...], ...]
    samples: tuple[int, ...]
    seed: int
    rule: RuleSpec
    initial_winner: int
    initial_winners: tuple[int, ...]

    def candidate_curve(self, candidate: int) -> tuple[float, ...]:
        return tuple(row[candidate] for row in self.probabilities)


@dataclass(frozen=True)
class WinnerThreshold:
    """Smallest grid level where a candidate's estimate drops below x%.

    ``value`` is None (sentinel "none") when the estimate never drops
    below the bar on the evaluated grid.
    """

    x: float
    value: float | None
    candidate: int


def perturb_profile(
    p: PreferenceProfile, norm_phi: float, rng: np.random.Generator
) -> PreferenceProfile:
    """Replace each ballot with a Mallows sample centered at itself.

    Each ballot is perturbed over its own ranked candidate subset with
    dispersion calibrated to the ballot's own length, so profile shape
    (m, n, and every ballot length) is preserved. Ballots consume random
    draws in profile order.
    """
    if not 0.0 <= norm_phi <= 1.0:
        raise ValueError(f"norm_phi must be in [0, 1], got {norm_phi}")
    new_ballots = tuple(
        sample(MallowsParams.from_norm_phi(b, norm_phi), rng)
        for b in p.ballots
    )
    return PreferenceProfile(
        m=p.m, candidate_names=p.candidate_names, ballots=new_ballots
    )


def expected_election_swaps(p: PreferenceProfile, norm_phi: float) -> float:
    """Expected total number of swapped pairs across the whole election.

    Convenience statistic: sum over ballots of norm_phi * j(j-1)/4 where
    j is the ballot length.
    """
    return sum(
        norm_phi * len(b) * (len(b) - 1) / 4.0 for b in p.ballots
    )


def _weights_for(rule: RuleSpec, p: PreferenceProfile) -> np.ndarray:
    vec = rule.scoring_vector
    assert vec is not None
    if len(vec) != p.m:
        raise RuleError(
            f"scoring vector length {len(vec)} does not match m={p.m}"
        )
    if rule.best_k is not None and rule.best_k > p.n:
        raise RuleError(f"best_k={rule.best_k} exceeds ballot count {p.n}")
    return np.asarray(vec, dtype=np.float64)


def _phi_by_len(prep: _batch.PreparedProfile, norm_phi: float) -> dict[int, float]:
    return {k: calibrate_norm_phi(norm_phi, k) for k, _, _ in prep.groups}


def _level_counts(
    prep: _batch.PreparedProfile,
    rules: tuple[RuleSpec, ...],
    weights: tuple[np.ndarray | None, ...],
    norm_phi: float,
    samples: int,
    perturb_ss: np.random.SeedSequence,
    tiebreak_ss: np.random.SeedSequence,
) -> np.ndarray:
    """Winner-set membership counts, shape (len(rules), m).

    All rules are evaluated on the same perturbed samples; STV tie-break
    orders come from a separate stream so adding or removing rules never
    changes the perturbation draws.
    """
    m, n = prep.m, prep.n
    rng = np.random.default_rng(perturb_ss)
    tb_rng = np.random.default_rng(tiebreak_ss)
    phis = _phi_by_len(prep, norm_phi)
    need_pos = any(r.kind == "copeland" for r in rules)
    counts = np.zeros((len(rules), m), dtype=np.int64)
    done = 0
    while done < samples:
        chunk = min(_CHUNK, samples - done)
        orders = _batch.sample_orders(prep, phis, chunk, rng)
        pos = _batch.positions_of_candidates(orders, m) if need_pos else None
        for r_idx, rule in enumerate(rules):
            if rule.kind == "positional":
                w = weights[r_idx]
                assert w is not None
                if rule.best_k is None:
                    scores = _batch.positional_scores(orders, w, m)
                else:
                    scores = _batch.best_k_scores(orders, w, m, rule.best_k)
                mask = _batch.argmax_mask(scores)
            elif rule.kind == "copeland":
                assert pos is not None
                mask = _batch.argmax_mask(_batch.copeland_scores(pos, n))
            elif rule.kind == "bucklin":
                mask = _batch.bucklin_winner_mask(orders, n, m)
            else:  # stv
                tb_ranks = _batch.uniform_tb_ranks(chunk, m, tb_rng)
                winners = _batch.stv_winners(orders, m, tb_ranks)
                counts[r_idx] += np.bincount(winners, minlength=m)
                continue
            counts[r_idx] += mask.sum(axis=0)
        done += chunk
    return counts


def _level_job(args):
    idx, prep, rules, weights, level, samples, perturb_ss, tiebreak_ss = args
    return idx, _level_counts(
        prep, rules, weights, level, samples, perturb_ss, tiebreak_ss
    )


def _spawn_level_seeds(
    seed: int | np.random.SeedSequence, n_levels: int
) -> list[tuple[np.random.SeedSequence, np.random.SeedSequence]]:
    # One child per level plus one spare (used for an implicit level-0
    # STV evaluation when the grid omits 0); each child splits into a
    # perturbation stream and a tie-break stream. Spawning everything up
    # front keeps results identical for any worker count.
    if isinstance(seed, np.random.SeedSequence):
        base = seed
    else:
        base = np.random.SeedSequence(seed)
    children = base.spawn(n_levels + 1)
    return [tuple(child.spawn(2)) for child in children]


def _deterministic_level0(
    p: PreferenceProfile, rule: RuleSpec
) -> tuple[float, ...]:
    # Exact level-0 row for rules without run-to-run randomness: the
    # perturbed profile equals p, so the row is the winner-set indicator.
    assert rule.kind != "stv"
    result = winners_of(p, rule)
    return tuple(
        1.0 if c in result.winners else 0.0 for c in range(p.m)
    )


def estimate_curve(
    p: PreferenceProfile,
    rule: RuleSpec,
    grid: NoiseGrid,
    seed: int,
    *,
    workers: int = 1,
) -> RobustnessCurve:
    """Monte Carlo winning-probability curve over the grid.

    For deterministic rules a candidate's estimate at a level is the
    fraction of perturbed samples in which it belongs to the winner set;
    the level-0 row is evaluated analytically (no sampling noise). For
    STV every run draws a fresh uniformly random tie-break order and the
    unique winner is credited, so rows sum to 1.

    The initial winner is the argmax of the level-0 estimates, ties
    broken by lowest candidate index; all co-winners are recorded.
    Results are bit-identical for any ``workers`` value.
    """
    prep = _batch.prepare(p)
    levels = grid.levels
    samples = grid.samples_per_level
    weights = (
        _weights_for(rule, p) if rule.kind == "positional" else None,
    )
    seeds = _spawn_level_seeds(seed, len(levels))
    deterministic = rule.kind != "stv"

    jobs = []
    analytic: dict[int, tuple[float, ...]] = {}
    for i, level in enumerate(levels):
        if deterministic and level == 0.0:
            analytic[i] = _deterministic_level0(p, rule)
        else:
            jobs.append(
                (i, prep, (rule,), weights, level, samples, *seeds[i])
            )

    results: dict[int, np.ndarray] = {}
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, counts in pool.map(_level_job, jobs):
                results[idx] = counts
    else:
        for job in jobs:
            idx, counts = _level_job(job)
            results[idx] = counts

    probabilities = []
    sample_counts = []
    for i in range(len(levels)):
        if i in analytic:
            probabilities.append(analytic[i])
            sample_counts.append(0)
        else:
            probabilities.append(
                tuple(float(c) / samples for c in results[i][0])
            )
            sample_counts.append(samples)

    if deterministic:
        level0 = _deterministic_level0(p, rule)
    elif 0.0 in levels:
        level0 = probabilities[levels.index(0.0)]
    else:
        counts0 = _level_counts(
            prep, (rule,), weights, 0.0, samples, *seeds[-1]
        )
        level0 = tuple(float(c) / samples for c in counts0[0])
    best = max(level0)
    initial_winners = tuple(
        c for c, v in enumerate(level0) if v == best
    )
    return RobustnessCurve(
        levels=levels,
        probabilities=tuple(probabilities),
        samples=tuple(sample_counts),
        seed=seed,
        rule=rule,
        initial_winner=initial_winners[0],
        initial_winners=initial_winners,
    )


def winner_threshold(
    curve: RobustnessCurve, x: float, candidate: int | None = None
) -> WinnerThreshold:
    """Smallest grid level where the candidate's estimate drops below x/100.

    Defaults to the curve's initial winner. STV special case: when no
    candidate's level-0 estimate exceeds x/100 the threshold is exactly
    0 (the initial winner is already contested at zero noise).
    """
    if not 0.0 < x < 100.0:
        raise ValueError(f"x must be in (0, 100), got {x}")
    cand = curve.initial_winner if candidate is None else candidate
    bar = x / 100.0
    if curve.rule.kind == "stv":
        idx0 = curve.levels.index(0.0) if 0.0 in curve.levels else 0
        if max(curve.probabilities[idx0]) <= bar:
            return WinnerThreshold(x=x, value=0.0, candidate=cand)
    for level, row in zip(curve.levels, curve.probabilities):
        if row[cand] < bar:
            return WinnerThreshold(x=x, value=level, candidate=cand)
    return WinnerThreshold(x=x, value=None, candidate=cand)


@dataclass(frozen=True)
class _RuleOutcome:
    """Per-rule result of a shared-noise threshold evaluation."""

    threshold: float | None
    initial_winner: int
    initial_winners: tuple[int, ...]
    tied: bool
    footnote_zero: bool
    level0: tuple[float, ...]


def _thresholds_multi(
    p: PreferenceProfile,
    rules: tuple[RuleSpec, ...],
    grid: NoiseGrid,
    seed: int | np.random.SeedSequence,
    x: float = 50.0,
) -> list[_RuleOutcome]:
    """x%-winner thresholds for several rules on shared perturbed samples.

    Equivalent to estimate_curve + winner_threshold per rule with the
    same seed (levels are evaluated with identical streams), but stops
    sampling once every rule has crossed the bar, which the full-curve
    contract does not allow.
    """
    if not 0.0 < x < 100.0:
        raise ValueError(f"x must be in (0, 100), got {x}")
    prep = _batch.prepare(p)
    levels = grid.levels
    samples = grid.samples_per_level
    bar = x / 100.0
    weights = tuple(
        _weights_for(r, p) if r.kind == "positional" else None for r in rules
    )
    seeds = _spawn_level_seeds(seed, len(levels))

    stv_idx = tuple(i for i, r in enumerate(rules) if r.kind == "stv")
    level0: list[tuple[float, ...] | None] = [None] * len(rules)
    for i, r in enumerate(rules):
        if r.kind != "stv":
            level0[i] = _deterministic_level0(p, r)
    if stv_idx:
        if 0.0 in levels:
            ss = seeds[levels.index(0.0)]
        else:
            ss = seeds[-1]
        stv_rules = tuple(rules[i] for i in stv_idx)
        stv_weights = tuple(weights[i] for i in stv_idx)
        counts0 = _level_counts(
            prep, stv_rules, stv_weights, 0.0, samples, *ss
        )
        for j, i in enumerate(stv_idx):
            level0[i] = tuple(float(c) / samples for c in counts0[j])

    thresholds: list[float | None] = [None] * len(rules)
    resolved = [False] * len(rules)
    winners: list[int] = []
    co_winners: list[tuple[int, ...]] = []
    footnote = [False] * len(rules)
    for i, r in enumerate(rules):
        row = level0[i]
        assert row is not None
        best = max(row)
        co = tuple(c for c, v in enumerate(row) if v == best)
        winners.append(co[0])
        co_winners.append(co)
        if r.kind == "stv" and best <= bar:
            thresholds[i] = 0.0
            footnote[i] = True
            resolved[i] = True

    for li, level in enumerate(levels):
        if all(resolved):
            break
        if level == 0.0:
            continue  # level-0 estimates handled above
        active = tuple(i for i in range(len(rules)) if not resolved[i])
        counts = _level_counts(
            prep,
            tuple(rules[i] for i in active),
            tuple(weights[i] for i in active),
            level,
            samples,
            *seeds[li],
        )
        for j, i in enumerate(active):
            est = counts[j, winners[i]] / samples
            if est < bar:
                thresholds[i] = level
                resolved[i] = True

    return [
        _RuleOutcome(
            threshold=thresholds[i],
            initial_winner=winners[i],
            initial_winners=co_winners[i],
            tied=(len(co_winners[i]) > 1) if rules[i].kind != "stv" else footnote[i],
            footnote_zero=footnote[i],
            level0=level0[i],  # type: ignore[arg-type]
        )
        for i in range(len(rules))
    ]


def exact_probability(
    p: PreferenceProfile, rule: RuleSpec, norm_phi: float
) -> tuple[float, ...]:
    """Exact per-candidate winning probabilities by full enumeration.

    Enumerates every combination of replacement ballots (each ballot
    ranging over the permutations of its own ranked subset) weighted by
    the product of Mallows probabilities. For STV the result additionally
    averages over all m! tie-break orders. Only feasible while the
    product of per-ballot factorials (times m! for STV) stays within
    10**7.
    """
    if not 0.0 <= norm_phi <= 1.0:
        raise ValueError(f"norm_phi must be in [0, 1], got {norm_phi}")
    budget = 1
    for b in p.ballots:
        budget *= math.factorial(len(b))
    is_stv = rule.kind == "stv"
    if is_stv:
        budget *= math.factorial(p.m)
    if budget > _ENUM_BUDGET:
        raise EnumerationBudgetError(
            f"enumeration size {budget} exceeds budget {_ENUM_BUDGET}"
        )
    if rule.kind == "positional":
        _weights_for(rule, p)  # validate against this profile

    options: list[list[tuple[tuple[int, ...], float]]] = []
    for ballot in p.ballots:
        params = MallowsParams.from_norm_phi(ballot, norm_phi)
        options.append(
            [(v, pmf(params, v)) for v in itertools.permutations(ballot)]
        )
    tiebreaks = (
        list(itertools.permutations(range(p.m))) if is_stv else None
    )
    mass = [0.0] * p.m
    for combo in itertools.product(*options):
        weight = math.prod(w for _, w in combo)
        if weight == 0.0:
            continue
        q = PreferenceProfile(
            m=p.m,
            candidate_names=p.candidate_names,
            ballots=tuple(b for b, _ in combo),
        )
        if is_stv:
            assert tiebreaks is not None
            share = weight / len(tiebreaks)
            for tb in tiebreaks:
                mass[stv_winner(q, tb)] += share
        else:
            for c in winners_of(q, rule).winners:
                mass[c] += weight
    return tuple(mass)
