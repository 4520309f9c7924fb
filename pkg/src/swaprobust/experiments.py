"""Synthetic election generation and the rule-comparison sweep.

Elections are drawn from a Mallows model around a central ballot at a
generation-level norm_phi, optionally reversing each sampled vote with a
fixed probability; the sweep averages 50%-winner thresholds of several
rules over many such elections per generation level.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .mallows import MallowsParams, sample
from .profiles import Ballot, PreferenceProfile, default_candidate_names
from .robustness import NoiseGrid, _thresholds_multi
from .rules import RuleSpec

# Domain separators so generation and estimation streams never overlap.
_GEN_KEY = 0x67656E
_EST_KEY = 0x657374


class UndefinedCorrelationError(ValueError):
    """Pearson correlation requested for a zero-variance sequence."""


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the synthetic Mallows election generator.

    ``central`` defaults to the lexicographic ballot (0, 1, ..., m-1).
    """

    m: int
    n: int
    gen_norm_phi: float
    reversal_prob: float = 0.0
    central: Ballot | None = None

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if not 0.0 <= self.gen_norm_phi <= 1.0:
            raise ValueError("gen_norm_phi must be in [0, 1]")
        if not 0.0 <= self.reversal_prob <= 1.0:
            raise ValueError("reversal_prob must be in [0, 1]")
        if self.central is not None:
            central = tuple(int(c) for c in self.central)
            if sorted(central) != list(range(self.m)):
                raise ValueError("central ballot must be complete")
            object.__setattr__(self, "central", central)

    def resolved_central(self) -> Ballot:
        return (
            self.central
            if self.central is not None
            else tuple(range(self.m))
        )


def generate_election(
    spec: SynthSpec, rng: np.random.Generator
) -> PreferenceProfile:
    """n independent Mallows draws around the central ballot.

    After sampling, each ballot is independently reversed with
    probability ``reversal_prob`` (the reversal coin is drawn after the
    ballot, and only when reversal_prob > 0).
    """
    params = MallowsParams.from_norm_phi(
        spec.resolved_central(), spec.gen_norm_phi
    )
    ballots = []
    for _ in range(spec.n):
        b = sample(params, rng)
        if spec.reversal_prob > 0.0 and rng.random() < spec.reversal_prob:
            b = b[::-1]
        ballots.append(b)
    return PreferenceProfile(
        m=spec.m,
        candidate_names=default_candidate_names(spec.m),
        ballots=tuple(ballots),
    )


@dataclass(frozen=True)
class SweepRow:
    """Mean x%-winner threshold of one rule at one generation level."""

    rule: str
    reversal_prob: float
    gen_level: float
    mean_threshold: float
    stderr: float
    n_elections: int
    n_sentinel: int
    n_tied: int


@dataclass(frozen=True)
class SweepResult:
    """All sweep rows plus the inputs needed to reproduce them."""

    rows: tuple[SweepRow, ...]
    rule_names: tuple[str, ...]
    gen_levels: tuple[float, ...]
    grid: NoiseGrid
    elections_per_level: int
    x: float
    seed: int


def _election_job(args):
    (
        g_idx,
        e_idx,
        seed,
        template,
        gen_level,
        rule_specs,
        grid,
        x,
    ) = args
    spec = SynthSpec(
        m=template.m,
        n=template.n,
        gen_norm_phi=gen_level,
        reversal_prob=template.reversal_prob,
        central=template.central,
    )
    gen_rng = np.random.default_rng(
        np.random.SeedSequence([seed, _GEN_KEY, g_idx, e_idx])
    )
    profile = generate_election(spec, gen_rng)
    est_seed = np.random.SeedSequence([seed, _EST_KEY, g_idx, e_idx])
    outcomes = _thresholds_multi(profile, rule_specs, grid, est_seed, x=x)
    return (
        g_idx,
        e_idx,
        [(o.threshold, o.tied) for o in outcomes],
    )


def rule_comparison_sweep(
    rules: Mapping[str, RuleSpec],
    gen_levels: Sequence[float],
    elections_per_level: int,
    grid: NoiseGrid,
    template: SynthSpec,
    seed: int,
    *,
    x: float = 50.0,
    workers: int = 1,
) -> SweepResult:
    """Average x%-winner thresholds per (rule, generation level).

    For every generation level, draws ``elections_per_level`` elections
    from the template (its gen_norm_phi is overridden by the level) and
    evaluates all rules on shared perturbation samples per election.
    Sentinel thresholds (winner never dropped below the bar on the grid)
    are averaged as 1.0 and counted in ``n_sentinel``; ``n_tied`` counts
    elections with tied initial winners (deterministic rules) or with no
    candidate above the bar at level 0 (STV).

    Fixed seed implies an identical SweepResult for any worker count.
    """
    rule_names = tuple(rules.keys())
    rule_specs = tuple(rules[name] for name in rule_names)
    levels = tuple(float(g) for g in gen_levels)
    jobs = [
        (g_idx, e_idx, seed, template, level, rule_specs, grid, x)
        for g_idx, level in enumerate(levels)
        for e_idx in range(elections_per_level)
    ]
    raw: dict[tuple[int, int], list[tuple[float | None, bool]]] = {}
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for g_idx, e_idx, outcomes in pool.map(
                _election_job, jobs, chunksize=1
            ):
                raw[(g_idx, e_idx)] = outcomes
    else:
        for job in jobs:
            g_idx, e_idx, outcomes = _election_job(job)
            raw[(g_idx, e_idx)] = outcomes

    rows = []
    for r_idx, name in enumerate(rule_names):
        for g_idx, level in enumerate(levels):
            values = []
            n_sentinel = 0
            n_tied = 0
            for e_idx in range(elections_per_level):
                threshold, tied = raw[(g_idx, e_idx)][r_idx]
                if threshold is None:
                    n_sentinel += 1
                    values.append(1.0)
                else:
                    values.append(threshold)
                if tied:
                    n_tied += 1
            mean = sum(values) / len(values)
            if len(values) > 1:
                var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
                stderr = math.sqrt(var / len(values))
            else:
                stderr = 0.0
            rows.append(
                SweepRow(
                    rule=name,
                    reversal_prob=template.reversal_prob,
                    gen_level=level,
                    mean_threshold=mean,
                    stderr=stderr,
                    n_elections=elections_per_level,
                    n_sentinel=n_sentinel,
                    n_tied=n_tied,
                )
            )
    return SweepResult(
        rows=tuple(rows),
        rule_names=rule_names,
        gen_levels=levels,
        grid=grid,
        elections_per_level=elections_per_level,
        x=x,
        seed=seed,
    )


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson correlation coefficient of two equal-length sequences.

    Raises:
        UndefinedCorrelationError: if either sequence has zero variance.
        ValueError: on length mismatch or fewer than two points.
    """
    if len(xs) != len(ys):
        raise ValueError("sequences must have equal length")
    if len(xs) < 2:
        raise ValueError("need at least two points")
    ax = np.asarray(xs, dtype=np.float64)
    ay = np.asarray(ys, dtype=np.float64)
    if np.ptp(ax) == 0.0 or np.ptp(ay) == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined for zero-variance input"
        )
    return float(np.corrcoef(ax, ay)[0, 1])
