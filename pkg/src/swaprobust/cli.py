"""Command-line interface.

Subcommands: analyze (probability curve + thresholds for one profile),
threshold (thresholds only), sweep (synthetic rule comparison), generate
(synthetic profile), convert (CSV race results or district returns to a
profile file), neighbors (single-swap winner-change counts).

Every output document embeds the tool version, seed, grid, and rule
specification, so a run can be reproduced bit-identically; the only
non-reproducible field is ``created_utc`` in JSON documents. CSV outputs
carry no timestamp and are byte-stable under re-runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .experiments import SynthSpec, generate_election, rule_comparison_sweep
from .ingest import (
    IngestError,
    districts_to_profile,
    parse_profile,
    races_to_profile,
    read_districts_csv,
    read_races_csv,
    write_profile,
)
from .profiles import PreferenceProfile, single_swap_neighbors
from .robustness import (
    NoiseGrid,
    RobustnessCurve,
    estimate_curve,
    expected_election_swaps,
    winner_threshold,
)
from .rules import RuleError, RuleSpec, winners_of

RULE_PRESETS = (
    "plurality",
    "borda",
    "copeland",
    "bucklin",
    "stv",
    "f1-2018",
    "f1-2009",
    "f1-2002",
    "f1-1990",
)

# Season scoring systems; vectors are padded with zeros up to m. The
# 1981-1990 system only counts each driver's 11 best results.
_F1_VECTORS = {
    "f1-2018": (25.0, 18.0, 15.0, 12.0, 10.0, 8.0, 6.0, 4.0, 2.0, 1.0),
    "f1-2009": (10.0, 8.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0),
    "f1-2002": (10.0, 6.0, 4.0, 3.0, 2.0, 1.0),
    "f1-1990": (9.0, 6.0, 4.0, 3.0, 2.0, 1.0),
}


def resolve_rule(name: str, m: int) -> RuleSpec:
    """Build the RuleSpec for a preset name at a given candidate count."""
    key = name.lower()
    if key == "plurality":
        return RuleSpec.plurality(m)
    if key == "borda":
        return RuleSpec.borda(m)
    if key == "copeland":
        return RuleSpec.copeland()
    if key == "bucklin":
        return RuleSpec.bucklin()
    if key == "stv":
        return RuleSpec.stv()
    if key in _F1_VECTORS:
        prefix = _F1_VECTORS[key]
        if m < len(prefix):
            raise RuleError(
                f"rule {name!r} needs at least {len(prefix)} candidates, "
                f"profile has {m}"
            )
        vec = prefix + (0.0,) * (m - len(prefix))
        best_k = 11 if key == "f1-1990" else None
        return RuleSpec.positional(vec, best_k=best_k)
    raise RuleError(
        f"unknown rule {name!r}; choose from {', '.join(RULE_PRESETS)}"
    )


def resolve_grid(preset: str, samples: int | None) -> NoiseGrid:
    if preset == "coarse":
        grid = NoiseGrid.coarse()
    elif preset == "fine":
        grid = NoiseGrid.fine()
    else:
        raise ValueError(f"unknown grid preset {preset!r}")
    if samples is not None:
        grid = NoiseGrid(levels=grid.levels, samples_per_level=samples)
    return grid


def _rule_doc(name: str, rule: RuleSpec) -> dict:
    return {
        "name": name,
        "kind": rule.kind,
        "scoring_vector": list(rule.scoring_vector)
        if rule.scoring_vector is not None
        else None,
        "best_k": rule.best_k,
        "stv_tiebreak": list(rule.stv_tiebreak)
        if rule.stv_tiebreak is not None
        else None,
    }


def _grid_doc(grid: NoiseGrid) -> dict:
    return {
        "levels": list(grid.levels),
        "samples_per_level": grid.samples_per_level,
    }


def _base_doc(command: str, args: argparse.Namespace) -> dict:
    return {
        "tool": "swaprobust",
        "version": __version__,
        "command": command,
        "seed": args.seed,
    }


def _now_utc() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _rule_scores(
    p: PreferenceProfile, rule: RuleSpec, curve: RobustnessCurve
) -> list | None:
    """Per-candidate score record for the unperturbed profile.

    Deterministic rules report their native scores. STV has no score; its
    level-0 winning-probability estimates are reported instead (None when
    the grid omits level 0).
    """
    if rule.kind != "stv":
        scores = winners_of(p, rule).scores
        return [list(s) if isinstance(s, tuple) else s for s in scores]
    if 0.0 in curve.levels:
        return list(curve.probabilities[curve.levels.index(0.0)])
    return None


def _threshold_docs(
    curve: RobustnessCurve, xs: Sequence[float], names: Sequence[str]
) -> list[dict]:
    docs = []
    for x in xs:
        th = winner_threshold(curve, x)
        docs.append(
            {"x": x, "value": th.value, "candidate": names[th.candidate]}
        )
    return docs


def _write_json(doc: dict, path: Path) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _curve_csv(curve: RobustnessCurve, names: Sequence[str]) -> str:
    lines = ["level,candidate,probability"]
    for c, name in enumerate(names):
        for level, row in zip(curve.levels, curve.probabilities):
            lines.append(f"{float(level)},{name},{float(row[c])}")
    return "\n".join(lines) + "\n"


def _parse_xs(values: list[float] | None) -> list[float]:
    xs = sorted(set(values or []) | {50.0})
    for x in xs:
        if not 0.0 < x < 100.0:
            raise ValueError(f"x must be in (0, 100), got {x}")
    return xs


def _analyze_doc(
    args: argparse.Namespace,
    p: PreferenceProfile,
    rule: RuleSpec,
    grid: NoiseGrid,
    curve: RobustnessCurve,
    xs: Sequence[float],
) -> dict:
    names = p.candidate_names
    borda = winners_of(p, RuleSpec.borda(p.m)).scores
    doc = _base_doc("analyze", args)
    doc.update(
        {
            "input": str(args.profile),
            "workers": args.workers,
            "rule": _rule_doc(args.rule, rule),
            "grid": _grid_doc(grid),
            "m": p.m,
            "n": p.n,
            "candidates": list(names),
            "initial_winner": names[curve.initial_winner],
            "initial_winners": [names[c] for c in curve.initial_winners],
            "tied": len(curve.initial_winners) > 1,
            "rule_scores": _rule_scores(p, rule, curve),
            "borda_scores": list(borda),
            "thresholds": _threshold_docs(curve, xs, names),
            "curve": [
                {
                    "level": level,
                    "samples": curve.samples[i],
                    "expected_swaps": expected_election_swaps(p, level),
                    "probabilities": {
                        names[c]: curve.probabilities[i][c]
                        for c in range(p.m)
                    },
                }
                for i, level in enumerate(curve.levels)
            ],
            "created_utc": _now_utc(),
        }
    )
    return doc


def cmd_analyze(args: argparse.Namespace) -> int:
    p = parse_profile(args.profile)
    rule = resolve_rule(args.rule, p.m)
    grid = resolve_grid(args.grid, args.samples)
    xs = _parse_xs(args.x)
    curve = estimate_curve(p, rule, grid, args.seed, workers=args.workers)
    doc = _analyze_doc(args, p, rule, grid, curve, xs)
    json_path = Path(str(args.out) + ".json")
    csv_path = Path(str(args.out) + ".csv")
    _write_json(doc, json_path)
    csv_path.write_text(_curve_csv(curve, p.candidate_names), encoding="utf-8")
    print(f"wrote {json_path}")
    print(f"wrote {csv_path}")
    return 0


def cmd_threshold(args: argparse.Namespace) -> int:
    p = parse_profile(args.profile)
    rule = resolve_rule(args.rule, p.m)
    grid = resolve_grid(args.grid, args.samples)
    xs = _parse_xs(args.x)
    curve = estimate_curve(p, rule, grid, args.seed, workers=args.workers)
    names = p.candidate_names
    docs = _threshold_docs(curve, xs, names)
    for d in docs:
        value = "none" if d["value"] is None else d["value"]
        print(f"x={d['x']} candidate={d['candidate']} threshold={value}")
    if args.out is not None:
        doc = _base_doc("threshold", args)
        doc.update(
            {
                "input": str(args.profile),
                "workers": args.workers,
                "rule": _rule_doc(args.rule, rule),
                "grid": _grid_doc(grid),
                "m": p.m,
                "n": p.n,
                "candidates": list(names),
                "initial_winner": names[curve.initial_winner],
                "initial_winners": [names[c] for c in curve.initial_winners],
                "tied": len(curve.initial_winners) > 1,
                "thresholds": docs,
                "created_utc": _now_utc(),
            }
        )
        _write_json(doc, Path(args.out))
        print(f"wrote {args.out}")
    return 0


SWEEP_PRESETS = {
    # Small enough for a workstation run; grid and scale match the
    # acceptance checks.
    "desk": {
        "gen_levels": [0.0, 1 / 3, 2 / 3, 1.0],
        "elections": 50,
        "samples": 200,
        "reversal": [0.0],
        "candidates": 10,
        "voters": 100,
    },
    # Full-scale reproduction; expect hours of runtime.
    "paper": {
        "gen_levels": [i / 15 for i in range(16)],
        "elections": 500,
        "samples": 500,
        "reversal": [0.0, 0.3, 0.5],
        "candidates": 10,
        "voters": 100,
    },
}


def _float_list(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip() != ""]


def cmd_sweep(args: argparse.Namespace) -> int:
    preset = SWEEP_PRESETS[args.preset]
    gen_levels = (
        _float_list(args.gen_levels)
        if args.gen_levels is not None
        else preset["gen_levels"]
    )
    elections = (
        args.elections if args.elections is not None else preset["elections"]
    )
    samples = args.samples if args.samples is not None else preset["samples"]
    reversal = (
        _float_list(args.reversal)
        if args.reversal is not None
        else preset["reversal"]
    )
    m = args.candidates if args.candidates is not None else preset["candidates"]
    n = args.voters if args.voters is not None else preset["voters"]
    grid = resolve_grid(args.grid, samples)
    rule_names = [s.strip() for s in args.rules.split(",") if s.strip()]
    rules = {name: resolve_rule(name, m) for name in rule_names}
    if not 0.0 < args.x < 100.0:
        raise ValueError(f"x must be in (0, 100), got {args.x}")

    lines = [
        "# tool: swaprobust",
        f"# version: {__version__}",
        "# command: sweep",
        f"# seed: {args.seed}",
        f"# x: {float(args.x)}",
        f"# m: {m}",
        f"# n: {n}",
        f"# rules: {','.join(rule_names)}",
        f"# gen_levels: {','.join(str(float(g)) for g in gen_levels)}",
        f"# reversal_probs: {','.join(str(float(r)) for r in reversal)}",
        f"# grid_levels: {','.join(str(v) for v in grid.levels)}",
        f"# samples_per_level: {grid.samples_per_level}",
        "rule,reversal_prob,gen_level,mean_threshold,stderr,"
        "n_elections,n_sentinel,n_tied",
    ]
    # Each reversal probability is an independent sweep with its own
    # derived seed so their random streams never collide.
    for r_idx, rev in enumerate(reversal):
        template = SynthSpec(
            m=m, n=n, gen_norm_phi=0.0, reversal_prob=float(rev)
        )
        result = rule_comparison_sweep(
            rules,
            gen_levels,
            elections,
            grid,
            template,
            seed=args.seed + r_idx,
            x=float(args.x),
            workers=args.workers,
        )
        for row in result.rows:
            lines.append(
                f"{row.rule},{row.reversal_prob},{row.gen_level},"
                f"{row.mean_threshold},{row.stderr},{row.n_elections},"
                f"{row.n_sentinel},{row.n_tied}"
            )
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        m=args.candidates,
        n=args.voters,
        gen_norm_phi=args.gen_norm_phi,
        reversal_prob=args.reversal_prob,
    )
    rng = np.random.default_rng(args.seed)
    p = generate_election(spec, rng)
    header = {
        "generator": f"swaprobust {__version__}",
        "seed": str(args.seed),
        "gen_norm_phi": str(args.gen_norm_phi),
        "reversal_prob": str(args.reversal_prob),
    }
    write_profile(p, args.out, extra_header=header)
    print(f"wrote {args.out}")
    return 0


def cmd_convert(args: argparse.Namespace) -> int:
    import csv as _csv

    with open(args.input, encoding="utf-8", newline="") as handle:
        first = next(_csv.reader(handle), None)
    if first is None:
        raise IngestError(f"{args.input}: empty CSV")
    header = [h.strip().lower() for h in first]
    if header == ["race", "position", "driver"]:
        p = races_to_profile(read_races_csv(args.input))
        if args.min_avg_length is not None:
            avg = sum(len(b) for b in p.ballots) / p.n
            if avg < args.min_avg_length:
                raise IngestError(
                    f"average ballot length {avg:.2f} below "
                    f"{args.min_avg_length}"
                )
    else:
        rows, ranked = read_districts_csv(args.input)
        p = districts_to_profile(
            rows, ranked=ranked, min_avg_length=args.min_avg_length
        )
    write_profile(
        p, args.out, extra_header={"converted_from": Path(args.input).name}
    )
    print(f"wrote {args.out}")
    return 0


def cmd_neighbors(args: argparse.Namespace) -> int:
    p = parse_profile(args.profile)
    rule = resolve_rule(args.rule, p.m)
    if rule.kind == "stv":
        # Neighbor counting needs a deterministic outcome per profile.
        rule = RuleSpec.stv(tiebreak=tuple(range(p.m)))
    base = winners_of(p, rule)
    w = min(base.winners)
    displaced = 0
    not_unique = 0
    total = 0
    for q in single_swap_neighbors(p):
        res = winners_of(q, rule)
        total += 1
        if w not in res.winners:
            displaced += 1
        if res.winners != (w,):
            not_unique += 1
    names = p.candidate_names
    doc = _base_doc("neighbors", args)
    doc.update(
        {
            "input": str(args.profile),
            "rule": _rule_doc(args.rule, rule),
            "m": p.m,
            "n": p.n,
            "candidates": list(names),
            "initial_winner": names[w],
            "initial_winners": [names[c] for c in base.winners],
            "neighbors": total,
            "winner_displaced": displaced,
            "winner_not_unique": not_unique,
            "created_utc": _now_utc(),
        }
    )
    print(
        f"neighbors={total} winner_displaced={displaced} "
        f"winner_not_unique={not_unique}"
    )
    if args.out is not None:
        _write_json(doc, Path(args.out))
        print(f"wrote {args.out}")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="RNG seed")
    sub.add_argument(
        "--workers", type=int, default=1, help="process pool size"
    )


def _add_estimation(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--rule",
        default="plurality",
        help=f"rule preset: {', '.join(RULE_PRESETS)}",
    )
    sub.add_argument(
        "--grid",
        choices=("coarse", "fine"),
        default="coarse",
        help="noise-level grid preset",
    )
    sub.add_argument(
        "--samples",
        type=int,
        default=None,
        help="override samples per level",
    )
    sub.add_argument(
        "--x",
        type=float,
        action="append",
        help="threshold percentage (repeatable; 50 always included)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swaprobust",
        description="Robustness of election winners under swap noise.",
    )
    parser.add_argument(
        "--version", action="version", version=f"swaprobust {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser(
        "analyze", help="winning-probability curve and thresholds"
    )
    sub.add_argument("profile", help="profile file")
    sub.add_argument(
        "-o", "--out", required=True,
        help="output prefix (writes <out>.json and <out>.csv)",
    )
    _add_estimation(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_analyze)

    sub = subs.add_parser("threshold", help="x%%-winner thresholds only")
    sub.add_argument("profile", help="profile file")
    sub.add_argument("-o", "--out", default=None, help="optional JSON output")
    _add_estimation(sub)
    _add_common(sub)
    sub.set_defaults(func=cmd_threshold)

    sub = subs.add_parser(
        "sweep", help="rule-comparison sweep over synthetic elections"
    )
    sub.add_argument("-o", "--out", required=True, help="output CSV")
    sub.add_argument(
        "--preset",
        choices=tuple(SWEEP_PRESETS),
        default="desk",
        help="parameter preset (individual flags override)",
    )
    sub.add_argument(
        "--rules",
        default="plurality,borda,copeland,bucklin,stv",
        help="comma-separated rule presets",
    )
    sub.add_argument("--gen-levels", default=None, help="comma-separated")
    sub.add_argument("--elections", type=int, default=None)
    sub.add_argument(
        "--grid", choices=("coarse", "fine"), default="coarse"
    )
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument(
        "--reversal", default=None, help="comma-separated probabilities"
    )
    sub.add_argument("--candidates", type=int, default=None)
    sub.add_argument("--voters", type=int, default=None)
    sub.add_argument("--x", type=float, default=50.0)
    _add_common(sub)
    sub.set_defaults(func=cmd_sweep)

    sub = subs.add_parser("generate", help="draw a synthetic profile")
    sub.add_argument("-o", "--out", required=True, help="output profile file")
    sub.add_argument("--candidates", type=int, required=True)
    sub.add_argument("--voters", type=int, required=True)
    sub.add_argument("--gen-norm-phi", type=float, required=True)
    sub.add_argument("--reversal-prob", type=float, default=0.0)
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=cmd_generate)

    sub = subs.add_parser(
        "convert", help="convert a race or district CSV to a profile"
    )
    sub.add_argument("input", help="CSV input")
    sub.add_argument("-o", "--out", required=True, help="output profile file")
    sub.add_argument(
        "--min-avg-length",
        type=float,
        default=None,
        help="reject profiles with average ballot length below this",
    )
    sub.set_defaults(func=cmd_convert)

    sub = subs.add_parser(
        "neighbors", help="winner changes over single-swap neighbors"
    )
    sub.add_argument("profile", help="profile file")
    sub.add_argument("-o", "--out", default=None, help="optional JSON output")
    sub.add_argument("--rule", default="plurality")
    sub.add_argument("--seed", type=int, default=0)
    sub.set_defaults(func=cmd_neighbors)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
