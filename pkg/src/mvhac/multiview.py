"""The full pipeline: Klassen quadrants, LQ features, then HAC inside each quadrant."""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from mvhac._version import __version__
from mvhac.dataset import AnalysisInput
from mvhac.errors import MvhacError
from mvhac.hac import Dendrogram, Linkage, agglomerate
from mvhac.klassen import KlassenResult, Quadrant, contribution, growth_rate, klassen_districts
from mvhac.lq import DEFAULT_EPSILON, LqProfile, lq_profile


class MultiviewError(MvhacError):
    """An error raised inside one pipeline stage, tagged with that stage."""

    def __init__(self, stage: str, cause: Exception | str):
        self.stage = stage
        super().__init__(f"[{stage}] {cause}")


class FeatureKind(str, enum.Enum):
    LQ = "lq"
    RAW_CURRENT = "raw_current"
    GROWTH_CONTRIBUTION = "growth_contribution"


@dataclass(frozen=True)
class MvhacConfig:
    linkage: Linkage = Linkage.AVERAGE
    epsilon: float = DEFAULT_EPSILON
    features: FeatureKind = FeatureKind.LQ
    standardize: bool = False

    def __post_init__(self):
        object.__setattr__(self, "linkage", Linkage(self.linkage))
        object.__setattr__(self, "features", FeatureKind(self.features))
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise MvhacError(f"epsilon must be finite and non-negative, got {self.epsilon!r}")


@dataclass(frozen=True)
class QuadrantView:
    quadrant: Quadrant
    members: tuple[str, ...]
    features: tuple[tuple[float, ...], ...]
    dendrogram: Dendrogram | None


@dataclass(frozen=True)
class MultiviewResult:
    klassen: KlassenResult
    lq: LqProfile
    views: tuple[QuadrantView, ...]
    config: MvhacConfig
    provenance: dict = field(default_factory=dict)

    def view(self, quadrant: Quadrant) -> QuadrantView:
        return self.views[list(Quadrant).index(quadrant)]


def _standardize(rows: list[list[float]]) -> list[list[float]]:
    arr = np.asarray(rows, dtype=np.float64)
    out = arr.copy()
    for j in range(arr.shape[1]):
        col = arr[:, j]
        if np.all(col == col[0]):
            continue
        out[:, j] = (col - col.mean()) / col.std()
    return out.tolist()


def feature_vectors(
    data: AnalysisInput, profile: LqProfile, config: MvhacConfig, members
) -> tuple[tuple[float, ...], ...]:
    """Feature matrix for ``members``, one row per district in the given order."""
    members = tuple(members)
    if not members:
        raise MvhacError("feature_vectors needs at least one member")
    known = set(data.district_ids)
    rows = []
    for d in members:
        if d not in known:
            raise MvhacError(f"unknown district {d!r}")
        if config.features is FeatureKind.LQ:
            rows.append(list(profile.row(d)))
        elif config.features is FeatureKind.RAW_CURRENT:
            rows.append(list(data.current.record(d).values))
        else:
            cur = data.current.record(d).values
            prev = data.previous.record(d).values
            t_cur, t_prev = math.fsum(cur), math.fsum(prev)
            row = []
            for name, p_t, p_prev in zip(data.current.sector_names, cur, prev):
                try:
                    row += [growth_rate(p_t, p_prev), contribution(p_t, p_prev, t_cur, t_prev)]
                except MvhacError as exc:
                    raise MvhacError(f"district {d!r}, sector {name!r}: {exc}") from None
            rows.append(row)
    if config.standardize:
        rows = _standardize(rows)
    return tuple(tuple(float(v) for v in r) for r in rows)


def input_digests(data: AnalysisInput) -> dict:
    return {
        "tool": "mvhac",
        "version": __version__,
        "reference": data.reference,
        "current_year": data.current.year,
        "previous_year": data.previous.year,
        "current_sha256": hashlib.sha256(data.current.to_csv().encode()).hexdigest(),
        "previous_sha256": hashlib.sha256(data.previous.to_csv().encode()).hexdigest(),
    }


def run_mvhac(data: AnalysisInput, config: MvhacConfig | None = None) -> MultiviewResult:
    """Run every stage and assemble one view per quadrant, Q1 to Q4."""
    config = config or MvhacConfig()
    try:
        klassen = klassen_districts(data)
    except MvhacError as exc:
        raise MultiviewError("klassen", exc) from exc
    try:
        profile = lq_profile(data.current, config.epsilon)
    except MvhacError as exc:
        raise MultiviewError("lq", exc) from exc

    views = []
    for q in Quadrant:
        members = klassen.members(q)
        if not members:
            views.append(QuadrantView(q, (), (), None))
            continue
        try:
            feats = feature_vectors(data, profile, config, members)
            tree = agglomerate(feats, config.linkage, labels=members)
        except MvhacError as exc:
            raise MultiviewError(f"hac:{q.code}", exc) from exc
        views.append(QuadrantView(q, members, feats, tree))

    return MultiviewResult(
        klassen=klassen, lq=profile, views=tuple(views), config=config, provenance=input_digests(data)
    )
