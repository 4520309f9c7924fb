"""Monte Carlo robustness analysis of election winners under swap noise.

The package models elections as preference profiles (strict, possibly
top-truncated ballots), perturbs every ballot with Mallows noise at a
normalized dispersion level, and estimates how likely the original winner
is to survive as the noise level grows.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .profiles import (
    Ballot,
    DistanceUndefinedError,
    PreferenceProfile,
    ProfileError,
    election_distance,
    single_swap_neighbors,
    swap_distance,
)
from .mallows import (
    MallowsParams,
    calibrate_norm_phi,
    expected_swap_distance,
    normalizing_constant,
    pmf,
    sample,
    sample_many,
)
from .rules import (
    RuleSpec,
    WinnerSet,
    bucklin_winners,
    copeland_winners,
    positional_winners,
    stv_result,
    stv_winner,
    winners_of,
)
from .robustness import (
    EnumerationBudgetError,
    NoiseGrid,
    RobustnessCurve,
    WinnerThreshold,
    estimate_curve,
    exact_probability,
    expected_election_swaps,
    perturb_profile,
    winner_threshold,
)
from .experiments import (
    SweepResult,
    SweepRow,
    SynthSpec,
    UndefinedCorrelationError,
    generate_election,
    pearson,
    rule_comparison_sweep,
)
from .ingest import (
    IngestError,
    ProfileParseError,
    districts_to_profile,
    parse_profile,
    races_to_profile,
    read_districts_csv,
    read_races_csv,
    write_profile,
)

__all__ = [
    "Ballot",
    "DistanceUndefinedError",
    "EnumerationBudgetError",
    "IngestError",
    "MallowsParams",
    "NoiseGrid",
    "PreferenceProfile",
    "ProfileError",
    "ProfileParseError",
    "RobustnessCurve",
    "RuleSpec",
    "SweepResult",
    "SweepRow",
    "SynthSpec",
    "UndefinedCorrelationError",
    "WinnerSet",
    "WinnerThreshold",
    "bucklin_winners",
    "calibrate_norm_phi",
    "copeland_winners",
    "districts_to_profile",
    "election_distance",
    "estimate_curve",
    "exact_probability",
    "expected_election_swaps",
    "expected_swap_distance",
    "generate_election",
    "normalizing_constant",
    "parse_profile",
    "pearson",
    "perturb_profile",
    "pmf",
    "positional_winners",
    "races_to_profile",
    "read_districts_csv",
    "read_races_csv",
    "rule_comparison_sweep",
    "sample",
    "sample_many",
    "single_swap_neighbors",
    "stv_result",
    "stv_winner",
    "swap_distance",
    "winner_threshold",
    "winners_of",
    "write_profile",
]
