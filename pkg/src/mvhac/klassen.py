"""Klassen typology: growth rate, contribution and quadrant assignment."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from mvhac.dataset import AnalysisInput
from mvhac.errors import MvhacError


class KlassenError(MvhacError):
    pass


class Quadrant(enum.Enum):
    Q1 = "advanced and rapidly growing"
    Q2 = "advanced but depressed"
    Q3 = "potential or possible-to-develop"
    Q4 = "relatively underdeveloped"

    @property
    def code(self) -> str:
        return self.name

    @property
    def label(self) -> str:
        return self.value

    @property
    def table_code(self) -> str:
        """Cluster code used in published Klassen tables (K1..K4)."""
        return "K" + self.name[1]


def growth_rate(p_t: float, p_prev: float) -> float:
    """Percent growth from the previous year to the current one."""
    if not p_prev > 0:
        raise KlassenError(f"undefined growth: previous-year value {p_prev!r} is not positive")
    return (p_t - p_prev) / p_prev * 100.0


def contribution(p_t: float, p_prev: float, t_t: float, t_prev: float) -> float:
    """Two-year share of a part in a total, in percent."""
    denom = t_t + t_prev
    if not denom > 0:
        raise KlassenError(f"undefined contribution: total {t_t!r} + {t_prev!r} is not positive")
    return (p_t + p_prev) / denom * 100.0


def classify_quadrant(r_subject: float, r_benchmark: float, y_subject: float, y_benchmark: float) -> Quadrant:
    if not all(math.isfinite(v) for v in (r_subject, r_benchmark, y_subject, y_benchmark)):
        raise KlassenError("non-finite input to quadrant classification")
    fast = r_subject >= r_benchmark
    big = y_subject >= y_benchmark
    if fast and big:
        return Quadrant.Q1
    if big:
        return Quadrant.Q2
    if fast:
        return Quadrant.Q3
    return Quadrant.Q4


@dataclass(frozen=True)
class KlassenEntry:
    district: str
    growth: float
    contribution: float
    quadrant: Quadrant


@dataclass(frozen=True)
class KlassenResult:
    entries: tuple[KlassenEntry, ...]
    reference_growth: float
    contribution_benchmark: float
    sector_quadrants: tuple[tuple[Quadrant, ...], ...] | None = None

    @property
    def districts(self) -> tuple[str, ...]:
        return tuple(e.district for e in self.entries)

    def members(self, quadrant: Quadrant) -> tuple[str, ...]:
        return tuple(e.district for e in self.entries if e.quadrant is quadrant)

    def partition(self) -> dict[Quadrant, tuple[str, ...]]:
        """All four quadrants in Q1..Q4 order, empty ones included."""
        return {q: self.members(q) for q in Quadrant}


def _sector_figures(values_t, values_prev, region: str, sectors):
    total_t = math.fsum(values_t)
    total_prev = math.fsum(values_prev)
    out = []
    for name, p_t, p_prev in zip(sectors, values_t, values_prev):
        try:
            r = growth_rate(p_t, p_prev)
            y = contribution(p_t, p_prev, total_t, total_prev)
        except KlassenError as exc:
            raise KlassenError(f"region {region!r}, sector {name!r}: {exc}") from None
        out.append((r, y))
    return out


def klassen_sectors(data: AnalysisInput) -> dict[str, tuple[Quadrant, ...]]:
    """Quadrant of every (district, sector) cell, benchmarked on the reference region.

    The subject figures for a cell are the sector's growth in the district and
    its share of the district's own two-year total; the benchmark is the same
    pair computed for the reference region.
    """
    sectors = data.current.sector_names
    ref = data.reference
    bench = _sector_figures(
        data.current.reference_record.values, data.previous.reference_record.values, ref, sectors
    )
    result = {}
    for district in data.district_ids:
        figs = _sector_figures(
            data.current.record(district).values, data.previous.record(district).values, district, sectors
        )
        result[district] = tuple(classify_quadrant(r, rb, y, yb) for (r, y), (rb, yb) in zip(figs, bench))
    return result


def klassen_districts(data: AnalysisInput, include_sectors: bool = False) -> KlassenResult:
    """District-level Klassen assignment.

    Growth compares the district total's growth with the reference total's.
    Contribution is the district's two-year share of the reference total,
    benchmarked on the mean share over all districts.
    """
    ref_t = data.current.reference_record.total
    ref_prev = data.previous.reference_record.total
    try:
        r_p = growth_rate(ref_t, ref_prev)
    except KlassenError as exc:
        raise KlassenError(f"reference {data.reference!r}: {exc}") from None

    figures = []
    for district in data.district_ids:
        p_t = data.current.record(district).total
        p_prev = data.previous.record(district).total
        try:
            figures.append((district, growth_rate(p_t, p_prev), contribution(p_t, p_prev, ref_t, ref_prev)))
        except KlassenError as exc:
            raise KlassenError(f"district {district!r}: {exc}") from None
    if not figures:
        raise KlassenError("no districts to classify")
    y_bench = math.fsum(y for _, _, y in figures) / len(figures)

    entries = tuple(KlassenEntry(d, r, y, classify_quadrant(r, r_p, y, y_bench)) for d, r, y in figures)
    sector_q = None
    if include_sectors:
        cells = klassen_sectors(data)
        sector_q = tuple(cells[d] for d in data.district_ids)
    return KlassenResult(entries, r_p, y_bench, sector_q)
