"""Location quotients and basis / non-basis labels."""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass

from mvhac.dataset import Panel, RegionRecord
from mvhac.errors import MvhacError

DEFAULT_EPSILON = 1e-9


class LqError(MvhacError):
    pass


class LqLabel(enum.Enum):
    BASIS = "Basis"
    NON_BASIS_UNIT = "NonBasisUnit"
    NON_BASIS_BELOW = "NonBasisBelow"

    @property
    def indicator(self) -> int:
        """+1 for a basis sector, -1 for either non-basis class."""
        return 1 if self is LqLabel.BASIS else -1


def compute_lq(district: RegionRecord, reference: RegionRecord) -> list[float]:
    """Per-sector LQ: the sector's share in the district over its share in the reference.

    A sector absent from both regions gets 0.0 (see :func:`degenerate_sectors`).
    """
    if len(district.values) != len(reference.values):
        raise LqError(f"district {district.region!r} and reference have different sector counts")
    d_total = district.total
    r_total = reference.total
    if not d_total > 0:
        raise LqError(f"district {district.region!r} has a zero total")
    if not r_total > 0:
        raise LqError(f"reference {reference.region!r} has a zero total")
    out = []
    for i, (s_i, s) in enumerate(zip(district.values, reference.values)):
        if s == 0:
            if s_i == 0:
                out.append(0.0)
                continue
            exc = LqError(f"district {district.region!r}, sector #{i}: value {s_i!r} against a zero reference value")
            exc.sector_index = i
            raise exc
        out.append((s_i / d_total) / (s / r_total))
    return out


def degenerate_sectors(district: RegionRecord, reference: RegionRecord) -> list[bool]:
    """True where both the district and the reference value are zero."""
    return [s_i == 0 and s == 0 for s_i, s in zip(district.values, reference.values)]


def label_lq(lq: float, epsilon: float = DEFAULT_EPSILON) -> LqLabel:
    if not math.isfinite(lq) or lq < 0:
        raise LqError(f"LQ must be finite and non-negative, got {lq!r}")
    if not epsilon >= 0:
        raise LqError(f"epsilon must be non-negative, got {epsilon!r}")
    if lq > 1.0 + epsilon:
        return LqLabel.BASIS
    if abs(lq - 1.0) <= epsilon:
        return LqLabel.NON_BASIS_UNIT
    return LqLabel.NON_BASIS_BELOW


@dataclass(frozen=True)
class LqProfile:
    districts: tuple[str, ...]
    sectors: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    labels: tuple[tuple[LqLabel, ...], ...]
    degenerate: tuple[tuple[bool, ...], ...]
    epsilon: float

    def row(self, district: str) -> tuple[float, ...]:
        try:
            return self.values[self.districts.index(district)]
        except ValueError:
            raise KeyError(district) from None

    def indicators(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(lbl.indicator for lbl in row) for row in self.labels)

    def label_counts(self) -> dict[LqLabel, int]:
        counts = Counter(lbl for row in self.labels for lbl in row)
        return {lbl: counts.get(lbl, 0) for lbl in LqLabel}


def lq_profile(panel: Panel, epsilon: float = DEFAULT_EPSILON) -> LqProfile:
    """LQ values and labels for every district of one (current-year) panel."""
    ref = panel.reference_record
    values, labels, degenerate = [], [], []
    for rec in panel.districts:
        try:
            lqs = compute_lq(rec, ref)
        except LqError as exc:
            i = getattr(exc, "sector_index", None)
            if i is None:
                raise
            raise LqError(
                f"district {rec.region!r}, sector {panel.sector_names[i]!r}: "
                f"value {rec.values[i]!r} against a zero reference value"
            ) from None
        values.append(tuple(lqs))
        labels.append(tuple(label_lq(v, epsilon) for v in lqs))
        degenerate.append(tuple(degenerate_sectors(rec, ref)))
    return LqProfile(
        districts=panel.district_ids,
        sectors=panel.sector_names,
        values=tuple(values),
        labels=tuple(labels),
        degenerate=tuple(degenerate),
        epsilon=epsilon,
    )
