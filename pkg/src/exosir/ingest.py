"""Parsers for the three observed-data sources and the per-state daily series.

Three inputs feed the fit pipeline: patient-level raw case rows (date, state,
transmission type), a per-state daily pivot (date, status, one column per
state code), and per-day event-linked counts. Parsing never drops rows
silently: every input row lands either in the result or in the rejects
report.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass, field

from .errors import (ConfigError, DuplicateDateError, NegativeCountError,
                     ParameterError, SchemaError)

DEFAULT_DATE_FALLBACKS = ("%d/%m/%Y",)
STATE_NAMES = {"kl": "Kerala", "rj": "Rajasthan", "tn": "Tamil Nadu"}
STATUSES = ("confirmed", "recovered", "deceased")

OBSERVED_HEADER = ("date", "daily_confirmed", "daily_recovered", "daily_deceased",
                   "daily_imported", "daily_event_linked")


@dataclass
class IngestReport:
    """Reject and warning channels for one parsing pass."""

    rejects: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def reject(self, row_number: int, reason: str) -> None:
        self.rejects.append((row_number, reason))

    def warn(self, message: str) -> None:
        self.warnings.append(message)


@dataclass(frozen=True)
class RawCaseRecord:
    date_announced: dt.date
    detected_state: str
    type_of_transmission: str  # Local, Imported, or Unknown


@dataclass(frozen=True)
class ObservedSeries:
    """Aligned per-day counts for one state; dates are gap-free and ascending."""

    state: str
    dates: tuple[dt.date, ...]
    daily_confirmed: tuple[int, ...]
    daily_recovered: tuple[int, ...]
    daily_deceased: tuple[int, ...]
    daily_imported: tuple[int, ...]
    daily_event_linked: tuple[int, ...]
    population_n: int

    def __post_init__(self):
        n = len(self.dates)
        for name in ("daily_confirmed", "daily_recovered", "daily_deceased",
                     "daily_imported", "daily_event_linked"):
            series = getattr(self, name)
            if len(series) != n:
                raise ParameterError(f"{name} has {len(series)} entries for {n} dates")
            if any(c < 0 for c in series):
                raise NegativeCountError(f"{name} contains a negative count")
        for a, b in zip(self.dates, self.dates[1:]):
            if (b - a).days != 1:
                raise ParameterError(f"dates must be gap-free and ascending: {a} -> {b}")
        if self.population_n <= 0:
            raise ConfigError(f"population_n must be positive, got {self.population_n!r}")

    def __len__(self) -> int:
        return len(self.dates)

    @property
    def daily_exogenous(self) -> tuple[int, ...]:
        return tuple(i + e for i, e in zip(self.daily_imported, self.daily_event_linked))


def parse_date(text: str, fallbacks=DEFAULT_DATE_FALLBACKS) -> dt.date:
    """ISO-8601 first, then the configured fallback formats."""
    text = text.strip()
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        pass
    for fmt in fallbacks:
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unparseable date {text!r}")


def _header_map(fieldnames, required, where: str) -> dict[str, str]:
    """Case-insensitive lookup of required column names; extras are ignored."""
    if not fieldnames:
        raise SchemaError(f"{where}: empty input, no header row")
    lowered = {name.strip().lower(): name for name in fieldnames if name is not None}
    mapping = {}
    for want in required:
        if want.lower() not in lowered:
            raise SchemaError(f"{where}: missing required column {want!r}")
        mapping[want] = lowered[want.lower()]
    return mapping


def parse_raw_cases(stream, date_fallbacks=DEFAULT_DATE_FALLBACKS
                    ) -> tuple[list[RawCaseRecord], IngestReport]:
    """Patient-level rows with DateAnnounced, DetectedState, TypeOfTransmission.

    Transmission values other than Local/Imported map to Unknown. Rows with
    unparseable dates go to the rejects report.
    """
    reader = csv.DictReader(stream)
    cols = _header_map(reader.fieldnames, ("DateAnnounced", "DetectedState", "TypeOfTransmission"),
                       "raw cases")
    report = IngestReport()
    records = []
    for row_number, row in enumerate(reader, start=2):
        raw_date = (row.get(cols["DateAnnounced"]) or "").strip()
        state = (row.get(cols["DetectedState"]) or "").strip()
        transmission = (row.get(cols["TypeOfTransmission"]) or "").strip().capitalize()
        if transmission not in ("Local", "Imported"):
            transmission = "Unknown"
        try:
            date = parse_date(raw_date, date_fallbacks)
        except ValueError as exc:
            report.reject(row_number, str(exc))
            continue
        if not state:
            report.reject(row_number, "empty DetectedState")
            continue
        records.append(RawCaseRecord(date, state, transmission))
    return records, report


def parse_states_daily(stream, state_codes, date_fallbacks=DEFAULT_DATE_FALLBACKS
                       ) -> tuple[dict[str, dict[dt.date, dict[str, int]]], IngestReport]:
    """Pivot (date, status) rows into per-state daily series.

    Returns {state_code: {date: {confirmed, recovered, deceased}}}. Statuses
    missing on a present date zero-fill with a warning; unknown statuses and
    malformed rows go to the rejects report; a repeated (date, status) pair
    raises DuplicateDateError.
    """
    state_codes = tuple(code.lower() for code in state_codes)
    reader = csv.DictReader(stream)
    cols = _header_map(reader.fieldnames, ("date", "status") + state_codes, "states daily")
    report = IngestReport()
    seen: set[tuple[dt.date, str]] = set()
    table: dict[str, dict[dt.date, dict[str, int]]] = {code: {} for code in state_codes}
    for row_number, row in enumerate(reader, start=2):
        status = (row.get(cols["status"]) or "").strip().lower()
        try:
            date = parse_date((row.get(cols["date"]) or ""), date_fallbacks)
        except ValueError as exc:
            report.reject(row_number, str(exc))
            continue
        if status not in STATUSES:
            report.reject(row_number, f"unknown status {status!r}")
            continue
        if (date, status) in seen:
            raise DuplicateDateError(f"duplicate rows for date {date}, status {status!r}")
        seen.add((date, status))
        try:
            counts = {code: int((row.get(cols[code]) or "0").strip() or "0")
                      for code in state_codes}
        except ValueError as exc:
            report.reject(row_number, f"bad count: {exc}")
            continue
        if any(v < 0 for v in counts.values()):
            report.reject(row_number, "negative count")
            continue
        for code in state_codes:
            table[code].setdefault(date, {})[status] = counts[code]
    for code in state_codes:
        for date, statuses in sorted(table[code].items()):
            for status in STATUSES:
                if status not in statuses:
                    report.warn(f"{code}: {date} missing status {status!r}, filled with 0")
                    statuses[status] = 0
    return table, report


def parse_event_counts(stream, date_fallbacks=DEFAULT_DATE_FALLBACKS
                       ) -> tuple[dict[dt.date, int], IngestReport]:
    """Per-day event-linked counts from a date,count file; empty input is valid."""
    reader = csv.DictReader(stream)
    report = IngestReport()
    if not reader.fieldnames:
        return {}, report
    cols = _header_map(reader.fieldnames, ("date", "count"), "event counts")
    events: dict[dt.date, int] = {}
    for row_number, row in enumerate(reader, start=2):
        try:
            date = parse_date((row.get(cols["date"]) or ""), date_fallbacks)
            count = int((row.get(cols["count"]) or "").strip())
        except ValueError as exc:
            report.reject(row_number, str(exc))
            continue
        if count < 0:
            raise NegativeCountError(f"negative event count {count} on {date}")
        events[date] = events.get(date, 0) + count
    return events, report


def _date_span(first: dt.date, last: dt.date) -> list[dt.date]:
    return [first + dt.timedelta(days=d) for d in range((last - first).days + 1)]


def merge_event_counts(series: ObservedSeries, events: dict[dt.date, int]
                       ) -> tuple[ObservedSeries, IngestReport]:
    """Fill daily_event_linked; event dates outside the range extend it with zeros."""
    report = IngestReport()
    for date, count in events.items():
        if count < 0:
            raise NegativeCountError(f"negative event count {count} on {date}")
    if not events:
        return series, report
    first = min(series.dates[0], min(events))
    last = max(series.dates[-1], max(events))
    dates = _date_span(first, last)
    index = {d: i for i, d in enumerate(dates)}
    n = len(dates)

    def extended(values) -> list[int]:
        out = [0] * n
        for d, v in zip(series.dates, values):
            out[index[d]] = v
        return out

    confirmed = extended(series.daily_confirmed)
    event_linked = [0] * n
    for date, count in events.items():
        event_linked[index[date]] = count
        if count > confirmed[index[date]]:
            report.warn(f"{series.state}: event count {count} on {date} exceeds "
                        f"daily_confirmed {confirmed[index[date]]}")
    merged = ObservedSeries(
        state=series.state,
        dates=tuple(dates),
        daily_confirmed=tuple(confirmed),
        daily_recovered=tuple(extended(series.daily_recovered)),
        daily_deceased=tuple(extended(series.daily_deceased)),
        daily_imported=tuple(extended(series.daily_imported)),
        daily_event_linked=tuple(event_linked),
        population_n=series.population_n,
    )
    return merged, report


def build_observed(raw_records: list[RawCaseRecord],
                   states_daily: dict[str, dict[dt.date, dict[str, int]]],
                   events: dict[dt.date, int], state: str, population_n: int
                   ) -> tuple[ObservedSeries, IngestReport]:
    """Assemble the aligned ObservedSeries for one state code.

    daily_imported counts the raw-case records of that state with type
    Imported per day; the date axis is the union range of all three sources,
    gap-filled with zeros (warned).
    """
    state = state.lower()
    if population_n <= 0:
        raise ConfigError(f"population_n must be positive, got {population_n!r}")
    if state not in states_daily:
        raise SchemaError(f"state {state!r} not present in the daily series input")
    report = IngestReport()
    state_name = STATE_NAMES.get(state, state).lower()
    imported: dict[dt.date, int] = {}
    for record in raw_records:
        rec_state = record.detected_state.lower()
        if rec_state not in (state, state_name):
            continue
        if record.type_of_transmission != "Imported":
            continue
        imported[record.date_announced] = imported.get(record.date_announced, 0) + 1
    daily = states_daily[state]
    all_dates = set(daily) | set(imported) | set(events)
    if not all_dates:
        raise SchemaError(f"no data rows for state {state!r}")
    dates = _date_span(min(all_dates), max(all_dates))
    for date in dates:
        if date not in daily:
            report.warn(f"{state}: no daily row for {date}, filled with 0")
    series = ObservedSeries(
        state=state,
        dates=tuple(dates),
        daily_confirmed=tuple(daily.get(d, {}).get("confirmed", 0) for d in dates),
        daily_recovered=tuple(daily.get(d, {}).get("recovered", 0) for d in dates),
        daily_deceased=tuple(daily.get(d, {}).get("deceased", 0) for d in dates),
        daily_imported=tuple(imported.get(d, 0) for d in dates),
        daily_event_linked=tuple(0 for _ in dates),
        population_n=population_n,
    )
    merged, merge_report = merge_event_counts(series, events)
    report.warnings.extend(merge_report.warnings)
    return merged, report


def write_observed_csv(series: ObservedSeries) -> str:
    """Canonical ObservedSeries CSV text, sorted by date."""
    lines = [",".join(OBSERVED_HEADER)]
    for k, date in enumerate(series.dates):
        lines.append(",".join([
            date.isoformat(),
            str(series.daily_confirmed[k]),
            str(series.daily_recovered[k]),
            str(series.daily_deceased[k]),
            str(series.daily_imported[k]),
            str(series.daily_event_linked[k]),
        ]))
    return "\n".join(lines) + "\n"


def read_observed_csv(stream, state: str, population_n: int) -> ObservedSeries:
    """Parse a canonical ObservedSeries CSV back into a structure."""
    reader = csv.DictReader(stream)
    cols = _header_map(reader.fieldnames, OBSERVED_HEADER, "observed series")
    rows = []
    for row in reader:
        rows.append((
            parse_date(row[cols["date"]]),
            *(int(row[cols[name]]) for name in OBSERVED_HEADER[1:]),
        ))
    rows.sort(key=lambda r: r[0])
    if not rows:
        raise SchemaError("observed series has no rows")
    return ObservedSeries(
        state=state,
        dates=tuple(r[0] for r in rows),
        daily_confirmed=tuple(r[1] for r in rows),
        daily_recovered=tuple(r[2] for r in rows),
        daily_deceased=tuple(r[3] for r in rows),
        daily_imported=tuple(r[4] for r in rows),
        daily_event_linked=tuple(r[5] for r in rows),
        population_n=population_n,
    )


def load_populations(path) -> dict[str, int]:
    """State code -> population N mapping from a JSON config file."""
    try:
        with open(path, encoding="utf-8-sig") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read population config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"population config must be a JSON object, got {type(data).__name__}")
    out = {}
    for code, value in data.items():
        if not isinstance(value, int) or value <= 0:
            raise ConfigError(f"population for {code!r} must be a positive integer, got {value!r}")
        out[code.lower()] = value
    return out
