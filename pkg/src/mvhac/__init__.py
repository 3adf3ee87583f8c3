"""Multiview hierarchical agglomerative clustering of regional GRDP panels.

Districts are first split into Klassen quadrants by growth and contribution,
then the members of each quadrant are clustered on their location quotients.
"""

from mvhac._version import __version__

from mvhac.errors import MvhacError
from mvhac.dataset import (
    AnalysisInput,
    Panel,
    PanelError,
    RegionRecord,
    SectorId,
    parse_panel,
    synthetic_fixture,
    validate_input,
)
from mvhac.klassen import (
    KlassenResult,
    Quadrant,
    classify_quadrant,
    contribution,
    growth_rate,
    klassen_districts,
    klassen_sectors,
)
from mvhac.lq import LqLabel, LqProfile, compute_lq, label_lq, lq_profile
from mvhac.hac import (
    Dendrogram,
    DistanceMatrix,
    Linkage,
    Merge,
    agglomerate,
    agglomerate_oracle,
    cut,
    distance_matrix,
    euclidean_distance,
)
from mvhac.multiview import (
    FeatureKind,
    MultiviewResult,
    MvhacConfig,
    QuadrantView,
    feature_vectors,
    run_mvhac,
)

__all__ = [
    "__version__",
    "AnalysisInput",
    "Dendrogram",
    "DistanceMatrix",
    "FeatureKind",
    "KlassenResult",
    "Linkage",
    "LqLabel",
    "LqProfile",
    "Merge",
    "MultiviewResult",
    "MvhacConfig",
    "MvhacError",
    "Panel",
    "PanelError",
    "Quadrant",
    "QuadrantView",
    "RegionRecord",
    "SectorId",
    "agglomerate",
    "agglomerate_oracle",
    "classify_quadrant",
    "compute_lq",
    "contribution",
    "cut",
    "distance_matrix",
    "euclidean_distance",
    "feature_vectors",
    "growth_rate",
    "klassen_districts",
    "klassen_sectors",
    "label_lq",
    "lq_profile",
    "parse_panel",
    "run_mvhac",
    "synthetic_fixture",
    "validate_input",
]
