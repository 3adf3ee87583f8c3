"""Agglomerative clustering over Euclidean distances.

:func:`agglomerate` keeps a cluster-to-cluster distance table and updates it
with the Lance-Williams recurrences. :func:`agglomerate_oracle` is a slow
reference that recomputes every linkage distance from member points at every
step; the two must agree merge for merge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from mvhac.errors import MvhacError

ORACLE_MAX_N = 64


class HacError(MvhacError):
    pass


class Linkage(str, enum.Enum):
    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"
    CENTROID = "centroid"


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    id: int
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree over ``n`` labeled leaves.

    Leaves have ids ``0..n-1``; the merge at step ``t`` creates id ``n + t``.
    """

    n: int
    labels: tuple[str, ...]
    merges: tuple[Merge, ...]
    linkage: Linkage

    def __post_init__(self):
        if len(self.labels) != self.n:
            raise HacError(f"{len(self.labels)} labels for {self.n} leaves")
        if len(self.merges) != max(self.n - 1, 0):
            raise HacError(f"{len(self.merges)} merges for {self.n} leaves")

    @property
    def root(self) -> int:
        return self.n + len(self.merges) - 1 if self.merges else 0

    def height(self, cluster: int) -> float:
        """Merge height of a cluster id; 0.0 for leaves."""
        return 0.0 if cluster < self.n else self.merges[cluster - self.n].height

    def merge(self, cluster: int) -> Merge:
        return self.merges[cluster - self.n]

    def members(self, cluster: int) -> tuple[int, ...]:
        """Sorted leaf indices under a cluster id."""
        if cluster < self.n:
            return (cluster,)
        m = self.merge(cluster)
        return tuple(sorted(self.members(m.left) + self.members(m.right)))

    def children(self, cluster: int) -> tuple[int, int]:
        """Both children of a merge, the one holding the smaller leaf index first."""
        m = self.merge(cluster)
        a, b = m.left, m.right
        if min(self.members(b)) < min(self.members(a)):
            a, b = b, a
        return a, b

    @property
    def inverted(self) -> bool:
        """True when some merge sits lower than one of its children (centroid only)."""
        return any(m.height < self.height(m.left) or m.height < self.height(m.right) for m in self.merges)

    @property
    def heights(self) -> tuple[float, ...]:
        return tuple(m.height for m in self.merges)


@dataclass(frozen=True)
class DistanceMatrix:
    entries: tuple[tuple[float, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        return self.entries[i][j]


def _as_vectors(vectors) -> tuple[tuple[float, ...], ...]:
    pts = tuple(tuple(float(v) for v in vec) for vec in vectors)
    if not pts:
        raise HacError("cannot cluster an empty set of vectors")
    dim = len(pts[0])
    if dim < 1:
        raise HacError("vectors must have at least one dimension")
    for i, p in enumerate(pts):
        if len(p) != dim:
            raise HacError(f"vector {i} has dimension {len(p)}, expected {dim}")
        if not all(math.isfinite(v) for v in p):
            raise HacError(f"vector {i} has a non-finite entry")
    return pts


def euclidean_distance(x: Sequence[float], y: Sequence[float]) -> float:
    if len(x) != len(y):
        raise HacError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if len(x) < 1:
        raise HacError("vectors must have at least one dimension")
    total = 0.0
    for a, b in zip(x, y):
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise HacError("non-finite vector entry")
        total += (a - b) * (a - b)
    return math.sqrt(total)


def distance_matrix(vectors) -> DistanceMatrix:
    pts = _as_vectors(vectors)
    n = len(pts)
    rows = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = euclidean_distance(pts[i], pts[j])
            rows[i][j] = rows[j][i] = d
    return DistanceMatrix(tuple(tuple(r) for r in rows))


def _default_labels(n: int, labels) -> tuple[str, ...]:
    if labels is None:
        return tuple(f"L{i}" for i in range(n))
    labels = tuple(str(x) for x in labels)
    if len(labels) != n:
        raise HacError(f"{len(labels)} labels for {n} vectors")
    return labels


def _closest_pair(active: list[int], dist_of) -> tuple[float, int, int]:
    # Lexicographic scan with strict < keeps the smallest (id, id) pair on ties.
    best = None
    for ai, a in enumerate(active):
        for b in active[ai + 1 :]:
            d = dist_of(a, b)
            if best is None or d < best[0]:
                best = (d, a, b)
    return best


def agglomerate(vectors, linkage: Linkage | str, labels=None) -> Dendrogram:
    """Cluster vectors bottom-up until a single cluster remains."""
    pts = _as_vectors(vectors)
    linkage = Linkage(linkage)
    n = len(pts)
    labels = _default_labels(n, labels)
    dm = distance_matrix(pts).entries
    centroid = linkage is Linkage.CENTROID

    # Centroid distances are carried squared so the recurrence is exact.
    dist: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            d = dm[i][j] * dm[i][j] if centroid else dm[i][j]
            dist[i][j] = dist[j][i] = d
    size = {i: 1 for i in range(n)}
    active = list(range(n))
    merges = []

    for step in range(n - 1):
        d_ab, a, b = _closest_pair(active, lambda i, j: dist[i][j])
        new = n + step
        na, nb = size[a], size[b]
        nn = na + nb
        row = {}
        for k in active:
            if k == a or k == b:
                continue
            dak, dbk = dist[k].pop(a), dist[k].pop(b)
            if linkage is Linkage.SINGLE:
                v = min(dak, dbk)
            elif linkage is Linkage.COMPLETE:
                v = max(dak, dbk)
            elif linkage is Linkage.AVERAGE:
                v = (na * dak + nb * dbk) / nn
            else:
                v = (na * dak + nb * dbk) / nn - (na * nb) * d_ab / (nn * nn)
            row[k] = v
            dist[k][new] = v
        del dist[a], dist[b]
        dist[new] = row
        size[new] = nn
        active.remove(a)
        active.remove(b)
        active.append(new)  # new id exceeds every live id, so the list stays sorted
        height = math.sqrt(max(d_ab, 0.0)) if centroid else d_ab
        merges.append(Merge(left=a, right=b, height=height, id=new, size=nn))

    return Dendrogram(n=n, labels=labels, merges=tuple(merges), linkage=linkage)


def _mean(points) -> tuple[float, ...]:
    k = len(points)
    return tuple(sum(col) / k for col in zip(*points))


def agglomerate_oracle(vectors, linkage: Linkage | str, labels=None, max_n: int = ORACLE_MAX_N) -> Dendrogram:
    """Brute-force counterpart of :func:`agglomerate` for small inputs."""
    pts = _as_vectors(vectors)
    linkage = Linkage(linkage)
    n = len(pts)
    if n > max_n:
        raise HacError(f"oracle limited to {max_n} vectors, got {n}")
    labels = _default_labels(n, labels)
    clusters = {i: [i] for i in range(n)}

    def linkage_distance(a: int, b: int) -> float:
        A, B = clusters[a], clusters[b]
        if linkage is Linkage.CENTROID:
            return euclidean_distance(_mean([pts[i] for i in A]), _mean([pts[j] for j in B]))
        cross = [euclidean_distance(pts[i], pts[j]) for i in A for j in B]
        if linkage is Linkage.SINGLE:
            return min(cross)
        if linkage is Linkage.COMPLETE:
            return max(cross)
        return sum(cross) / (len(A) * len(B))

    merges = []
    for step in range(n - 1):
        d, a, b = _closest_pair(sorted(clusters), linkage_distance)
        new = n + step
        clusters[new] = sorted(clusters.pop(a) + clusters.pop(b))
        merges.append(Merge(left=a, right=b, height=d, id=new, size=len(clusters[new])))
    return Dendrogram(n=n, labels=labels, merges=tuple(merges), linkage=linkage)


def cut(dendrogram: Dendrogram, k: int) -> list[tuple[str, ...]]:
    """Undo the last ``k - 1`` merges and return the ``k`` leaf-label groups."""
    n = dendrogram.n
    if not 1 <= k <= n:
        raise HacError(f"k must lie in [1, {n}], got {k}")
    groups = {i: [i] for i in range(n)}
    for m in dendrogram.merges[: n - k]:
        groups[m.id] = groups.pop(m.left) + groups.pop(m.right)
    parts = sorted(sorted(g) for g in groups.values())
    return [tuple(dendrogram.labels[i] for i in g) for g in parts]
