"""File formats: the native profile text format and CSV conversions.

Native profile files look like::

    # candidates: a,b,c
    # m: 3
    2: 0,1,2
    1: 2,0

Header lines are ``# key: value``; ``candidates`` and ``m`` are required
and unknown keys are ignored (tools may add provenance comments). Body
lines give a multiplicity and a comma-separated ballot, most preferred
first, possibly truncated.

CSV conversions cover race results (``race,position,driver``) and
district-level first-past-the-post returns (``district,party,votes`` or
``district,rank,party``), UTF-8 with a header row.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .profiles import PreferenceProfile


class IngestError(ValueError):
    """Malformed input data."""


class ProfileParseError(IngestError):
    """Malformed profile file; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _read_text(source: str | Path | IO[str]) -> str:
    if hasattr(source, "read"):
        return source.read()  # type: ignore[union-attr]
    return Path(source).read_text(encoding="utf-8")


def parse_profile(source: str | Path | IO[str]) -> PreferenceProfile:
    """Parse a native profile file (path or open text handle).

    Multiplicities are expanded into individual ballots in file order.
    """
    text = _read_text(source)
    names: tuple[str, ...] | None = None
    m: int | None = None
    ballots: list[tuple[int, ...]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" not in body:
                raise ProfileParseError("comment is not 'key: value'", line_no)
            key, _, value = body.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if key == "candidates":
                parts = [s.strip() for s in value.split(",")]
                if any(not s for s in parts):
                    raise ProfileParseError("empty candidate name", line_no)
                names = tuple(parts)
            elif key == "m":
                try:
                    m = int(value)
                except ValueError:
                    raise ProfileParseError(f"bad m value {value!r}", line_no)
            continue
        if names is None or m is None:
            raise ProfileParseError(
                "ballot line before '# candidates:' and '# m:' headers", line_no
            )
        if len(names) != m:
            raise ProfileParseError(
                f"{len(names)} candidate names but m={m}", line_no
            )
        mult_part, sep, idx_part = line.partition(":")
        if not sep:
            raise ProfileParseError("expected '<multiplicity>: <ids>'", line_no)
        try:
            mult = int(mult_part.strip())
        except ValueError:
            raise ProfileParseError(
                f"bad multiplicity {mult_part.strip()!r}", line_no
            )
        if mult < 1:
            raise ProfileParseError("multiplicity must be >= 1", line_no)
        try:
            ballot = tuple(int(s.strip()) for s in idx_part.split(","))
        except ValueError:
            raise ProfileParseError("bad candidate index", line_no)
        if any(c < 0 or c >= m for c in ballot):
            raise ProfileParseError(
                f"candidate index out of range [0, {m})", line_no
            )
        if len(set(ballot)) != len(ballot):
            raise ProfileParseError("duplicate candidate in ballot", line_no)
        if not ballot:
            raise ProfileParseError("empty ballot", line_no)
        ballots.extend([ballot] * mult)
    if names is None or m is None:
        raise ProfileParseError("missing '# candidates:' or '# m:' header", 1)
    if len(names) != m:
        raise ProfileParseError(f"{len(names)} candidate names but m={m}", 1)
    if not ballots:
        raise ProfileParseError("no ballot lines", 1)
    return PreferenceProfile(m=m, candidate_names=names, ballots=tuple(ballots))


def write_profile(
    p: PreferenceProfile,
    dest: str | Path | IO[str],
    extra_header: Mapping[str, str] | None = None,
) -> None:
    """Write a profile in the native format.

    Identical ballots are grouped into one line with a multiplicity, in
    first-occurrence order, so parse(write(p)) equals p up to that
    grouping. ``extra_header`` entries are emitted as additional
    ``# key: value`` comments (ignored by the parser).
    """
    for name in p.candidate_names:
        if "," in name or "\n" in name or name != name.strip() or not name:
            raise IngestError(f"candidate name {name!r} not writable")
    counts: dict[tuple[int, ...], int] = {}
    for ballot in p.ballots:
        counts[ballot] = counts.get(ballot, 0) + 1
    lines = [f"# candidates: {','.join(p.candidate_names)}", f"# m: {p.m}"]
    for key, value in (extra_header or {}).items():
        lines.append(f"# {key}: {value}")
    for ballot, mult in counts.items():
        lines.append(f"{mult}: {','.join(str(c) for c in ballot)}")
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)  # type: ignore[union-attr]
    else:
        Path(dest).write_text(text, encoding="utf-8")


def races_to_profile(
    rows: Iterable[tuple[str, int, str]],
) -> PreferenceProfile:
    """One ballot per race, competitors ordered by finishing position.

    Candidates are the distinct competitors across all races in first
    appearance order; competitors absent from a race are unranked in
    that ballot. Positions within a race must be distinct and contiguous
    from 1.
    """
    order: dict[str, list[tuple[int, str]]] = {}
    competitors: dict[str, int] = {}
    for race, position, driver in rows:
        race, driver = str(race), str(driver)
        position = int(position)
        if position < 1:
            raise IngestError(f"race {race!r}: position {position} < 1")
        entries = order.setdefault(race, [])
        if any(pos == position for pos, _ in entries):
            raise IngestError(f"race {race!r}: duplicate position {position}")
        if any(d == driver for _, d in entries):
            raise IngestError(f"race {race!r}: duplicate driver {driver!r}")
        entries.append((position, driver))
        if driver not in competitors:
            competitors[driver] = len(competitors)
    if not order:
        raise IngestError("no race rows")
    ballots = []
    for race, entries in order.items():
        entries.sort()
        positions = [pos for pos, _ in entries]
        if positions != list(range(1, len(entries) + 1)):
            raise IngestError(
                f"race {race!r}: positions not contiguous from 1"
            )
        ballots.append(tuple(competitors[d] for _, d in entries))
    return PreferenceProfile(
        m=len(competitors),
        candidate_names=tuple(competitors.keys()),
        ballots=tuple(ballots),
    )


def districts_to_profile(
    rows: Iterable[tuple[str, str, int]] | Iterable[tuple[str, int, str]],
    ranked: bool = False,
    min_avg_length: float | None = None,
) -> PreferenceProfile:
    """One ballot per district over parties.

    With ``ranked=False`` rows are (district, party, votes) and parties
    are ordered by descending vote count; tied counts within a district
    are a hard error (the order would be arbitrary), the supported escape
    hatch being pre-ranked rows (district, rank, party) with
    ``ranked=True``. A party's Plurality score in the result equals the
    number of districts it won. ``min_avg_length`` rejects profiles whose
    average ballot length falls below the given value.
    """
    parties: dict[str, int] = {}
    per_district: dict[str, list[tuple[int, str]]] = {}
    for row in rows:
        if ranked:
            district, rank, party = str(row[0]), int(row[1]), str(row[2])
            key = rank
        else:
            district, party, votes = str(row[0]), str(row[1]), int(row[2])
            if votes < 0:
                raise IngestError(
                    f"district {district!r}: negative vote count"
                )
            key = votes
        entries = per_district.setdefault(district, [])
        if any(p == party for _, p in entries):
            raise IngestError(
                f"district {district!r}: party {party!r} appears twice"
            )
        entries.append((key, party))
        if party not in parties:
            parties[party] = len(parties)
    if not per_district:
        raise IngestError("no district rows")
    ballots = []
    for district, entries in per_district.items():
        if ranked:
            entries.sort()
            ranks = [r for r, _ in entries]
            if ranks != list(range(1, len(entries) + 1)):
                raise IngestError(
                    f"district {district!r}: ranks not contiguous from 1"
                )
            ordered = [p for _, p in entries]
        else:
            seen = [v for v, _ in entries]
            if len(set(seen)) != len(seen):
                raise IngestError(
                    f"district {district!r}: tied vote counts; "
                    "supply explicit ranks instead"
                )
            ordered = [p for _, p in sorted(entries, reverse=True)]
        ballots.append(tuple(parties[p] for p in ordered))
    profile = PreferenceProfile(
        m=len(parties),
        candidate_names=tuple(parties.keys()),
        ballots=tuple(ballots),
    )
    if min_avg_length is not None:
        avg = sum(len(b) for b in profile.ballots) / profile.n
        if avg < min_avg_length:
            raise IngestError(
                f"average ballot length {avg:.2f} below {min_avg_length}"
            )
    return profile


def _read_csv(path: str | Path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle) if row]
    if not rows:
        raise IngestError(f"{path}: empty CSV")
    return rows


def read_races_csv(path: str | Path) -> list[tuple[str, int, str]]:
    """Read a ``race,position,driver`` CSV (header required, UTF-8)."""
    rows = _read_csv(path)
    header = [h.strip().lower() for h in rows[0]]
    if header != ["race", "position", "driver"]:
        raise IngestError(
            f"{path}: expected header race,position,driver, got {rows[0]}"
        )
    out = []
    for row in rows[1:]:
        if len(row) != 3:
            raise IngestError(f"{path}: bad row {row!r}")
        try:
            out.append((row[0].strip(), int(row[1]), row[2].strip()))
        except ValueError:
            raise IngestError(f"{path}: bad position in row {row!r}")
    return out


def read_districts_csv(
    path: str | Path,
) -> tuple[list[tuple], bool]:
    """Read a district CSV; returns (rows, ranked) for either dialect."""
    rows = _read_csv(path)
    header = [h.strip().lower() for h in rows[0]]
    if header == ["district", "party", "votes"]:
        ranked = False
    elif header == ["district", "rank", "party"]:
        ranked = True
    else:
        raise IngestError(
            f"{path}: expected district,party,votes or district,rank,party "
            f"header, got {rows[0]}"
        )
    out: list[tuple] = []
    for row in rows[1:]:
        if len(row) != 3:
            raise IngestError(f"{path}: bad row {row!r}")
        try:
            if ranked:
                out.append((row[0].strip(), int(row[1]), row[2].strip()))
            else:
                out.append((row[0].strip(), row[1].strip(), int(row[2])))
        except ValueError:
            raise IngestError(f"{path}: bad integer in row {row!r}")
    return out, ranked
