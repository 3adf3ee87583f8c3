"""Two-year GRDP panels: parsing, validation and a seeded synthetic generator."""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass

import numpy as np

from mvhac.errors import MvhacError

# Plain decimal with optional exponent. No thousands separators, no inf/nan.
_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


class PanelError(MvhacError):
    """A panel or panel pair violates the input contract.

    ``kind`` is a stable machine-readable code; ``row`` (1-based line number
    in the CSV, header is line 1) and ``column`` locate the offending cell
    when there is one.
    """

    def __init__(self, kind: str, message: str, *, row: int | None = None, column: str | None = None):
        self.kind = kind
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{kind}: {prefix}{message}")


@dataclass(frozen=True)
class SectorId:
    name: str
    ordinal: int


@dataclass(frozen=True)
class RegionRecord:
    region: str
    values: tuple[float, ...]

    @property
    def total(self) -> float:
        return math.fsum(self.values)


@dataclass(frozen=True)
class Panel:
    """One year of GRDP sector values for every district plus the reference row."""

    year: str
    sectors: tuple[SectorId, ...]
    records: tuple[RegionRecord, ...]
    reference: str

    def __post_init__(self):
        names = [s.name for s in self.sectors]
        if not names:
            raise PanelError("missing-column", "panel has no sector columns")
        if len(set(names)) != len(names):
            raise PanelError("duplicate-column", f"sector names not unique: {names}")
        for i, s in enumerate(self.sectors):
            if s.ordinal != i:
                raise PanelError("bad-ordinal", f"sector {s.name!r} has ordinal {s.ordinal}, expected {i}")
        seen = set()
        for rec in self.records:
            if rec.region in seen:
                raise PanelError("duplicate-region", f"region {rec.region!r} appears twice")
            seen.add(rec.region)
            if len(rec.values) != len(self.sectors):
                raise PanelError(
                    "row-width", f"region {rec.region!r} has {len(rec.values)} values for {len(self.sectors)} sectors"
                )
            for s, v in zip(self.sectors, rec.values):
                if not math.isfinite(v):
                    raise PanelError("non-numeric", f"region {rec.region!r} value {v!r} is not finite", column=s.name)
                if v < 0:
                    raise PanelError("negative-value", f"region {rec.region!r} value {v!r} is negative", column=s.name)
            if not rec.total > 0:
                raise PanelError("zero-total", f"region {rec.region!r} has a zero total")
        if self.reference not in seen:
            raise PanelError("missing-reference", f"reference region {self.reference!r} not found")
        if len(self.records) < 2:
            raise PanelError("empty-body", "panel needs at least one district besides the reference")

    @property
    def sector_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.sectors)

    @property
    def districts(self) -> tuple[RegionRecord, ...]:
        return tuple(r for r in self.records if r.region != self.reference)

    @property
    def district_ids(self) -> tuple[str, ...]:
        return tuple(r.region for r in self.districts)

    @property
    def reference_record(self) -> RegionRecord:
        return self.record(self.reference)

    def record(self, region: str) -> RegionRecord:
        for rec in self.records:
            if rec.region == region:
                return rec
        raise KeyError(region)

    def to_csv(self) -> str:
        """Canonical CSV text (LF line endings, shortest round-trip floats)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["region", *self.sector_names])
        for rec in self.records:
            writer.writerow([rec.region, *(repr(float(v)) for v in rec.values)])
        return buf.getvalue()


@dataclass(frozen=True)
class AnalysisInput:
    current: Panel
    previous: Panel

    @property
    def reference(self) -> str:
        return self.current.reference

    @property
    def district_ids(self) -> tuple[str, ...]:
        return self.current.district_ids


def parse_decimal(text: str, row: int, column: str, allow_negative: bool = False) -> float:
    """Parse one CSV cell, raising a located :class:`PanelError` on failure."""
    cell = text.strip()
    if not _DECIMAL_RE.match(cell):
        raise PanelError("non-numeric", f"cannot parse {text!r} as a decimal", row=row, column=column)
    value = float(cell)
    if not math.isfinite(value):
        raise PanelError("non-numeric", f"{text!r} overflows", row=row, column=column)
    if value < 0 and not allow_negative:
        raise PanelError("negative-value", f"{text!r} is negative", row=row, column=column)
    return value


def parse_panel(csv_text: str, reference: str, year: str = "") -> Panel:
    """Parse a ``region,<sector>,...`` CSV into a :class:`Panel`.

    Every violation raises :class:`PanelError` with a distinct ``kind`` and
    the offending row/column; nothing is repaired silently.
    """
    if csv_text.startswith("\ufeff"):
        csv_text = csv_text[1:]
    rows = list(csv.reader(io.StringIO(csv_text, newline="")))
    # Fully blank lines carry no data; anything else is a row.
    numbered = [(i + 1, r) for i, r in enumerate(rows) if any(c.strip() for c in r)]
    if not numbered:
        raise PanelError("empty-body", "no header row")
    header_line, header = numbered[0]
    header = [h.strip() for h in header]
    if not header or header[0] != "region":
        raise PanelError("missing-column", "first header column must be 'region'", row=header_line)
    sector_names = header[1:]
    if not sector_names:
        raise PanelError("missing-column", "no sector columns in header", row=header_line)
    seen_cols = set()
    for name in header:
        if not name:
            raise PanelError("missing-column", "empty column name in header", row=header_line)
        if name in seen_cols:
            raise PanelError("duplicate-column", f"column {name!r} repeated", row=header_line, column=name)
        seen_cols.add(name)

    body = numbered[1:]
    if not body:
        raise PanelError("empty-body", "panel has no data rows")

    records = []
    regions: set[str] = set()
    for line, row in body:
        if len(row) != len(header):
            raise PanelError("row-width", f"expected {len(header)} cells, found {len(row)}", row=line)
        region = row[0].strip()
        if not region:
            raise PanelError("missing-region", "empty region identifier", row=line, column="region")
        if region in regions:
            raise PanelError("duplicate-region", f"region {region!r} repeated", row=line, column="region")
        regions.add(region)
        values = tuple(parse_decimal(cell, line, name) for cell, name in zip(row[1:], sector_names))
        if not math.fsum(values) > 0:
            raise PanelError("zero-total", f"region {region!r} has a zero total", row=line)
        records.append(RegionRecord(region, values))

    if reference not in regions:
        raise PanelError("missing-reference", f"reference region {reference!r} not found")
    if len(records) < 2:
        raise PanelError("empty-body", "panel needs at least one district besides the reference")
    sectors = tuple(SectorId(name, i) for i, name in enumerate(sector_names))
    return Panel(year=year, sectors=sectors, records=tuple(records), reference=reference)


def validate_input(current: Panel, previous: Panel) -> AnalysisInput:
    """Pair two panels, reordering ``previous`` to the region order of ``current``."""
    if current.sector_names != previous.sector_names:
        raise PanelError(
            "sector-mismatch",
            f"sector lists differ: {list(current.sector_names)} vs {list(previous.sector_names)}",
        )
    if current.reference != previous.reference:
        raise PanelError(
            "reference-mismatch", f"reference regions differ: {current.reference!r} vs {previous.reference!r}"
        )
    cur_ids = [r.region for r in current.records]
    prev_ids = {r.region for r in previous.records}
    missing = [r for r in cur_ids if r not in prev_ids]
    extra = sorted(prev_ids - set(cur_ids))
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"absent from previous: {missing}")
        if extra:
            parts.append(f"absent from current: {extra}")
        raise PanelError("region-mismatch", "; ".join(parts))
    reordered = Panel(
        year=previous.year,
        sectors=previous.sectors,
        records=tuple(previous.record(r) for r in cur_ids),
        reference=previous.reference,
    )
    return AnalysisInput(current=current, previous=reordered)


def synthetic_fixture(seed: int, districts: int, sectors: int) -> AnalysisInput:
    """Reproducible two-year panel pair.

    Values are rounded to cents so the CSV form is short and exact. The
    reference row is the column sum of the districts plus a positive margin.
    """
    if districts < 1 or sectors < 1:
        raise ValueError("districts and sectors must be >= 1")
    rng = np.random.default_rng(seed)
    prev = np.round(rng.uniform(10.0, 1000.0, size=(districts, sectors)), 2)
    growth = rng.uniform(-0.05, 0.15, size=(districts, sectors))
    cur = np.round(prev * (1.0 + growth), 2)
    prev_margin = np.round(rng.uniform(1.0, 100.0, size=sectors), 2)
    cur_margin = np.round(prev_margin * (1.0 + rng.uniform(-0.05, 0.15, size=sectors)), 2)

    sector_ids = tuple(SectorId(f"S{i + 1}", i) for i in range(sectors))
    names = [f"D{i + 1:02d}" for i in range(districts)]
    reference = "Province"

    def build(year, block, margin):
        ref = np.round(block.sum(axis=0) + margin, 2)
        records = [RegionRecord(n, tuple(float(v) for v in row)) for n, row in zip(names, block)]
        records.append(RegionRecord(reference, tuple(float(v) for v in ref)))
        return Panel(year=year, sectors=sector_ids, records=tuple(records), reference=reference)

    return AnalysisInput(current=build("2012", cur, cur_margin), previous=build("2011", prev, prev_margin))
