"""AP selection: 1-D K-means over RSS values and candidate AP subsets.

Clustering the scan's RSS values groups APs with near-equal signal, which
under path loss means near-equal distance.  Picking one AP per cluster
yields subsets whose ordering is robust to noise; the Cartesian product of
per-cluster picks enumerates fallback subsets for localization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .model import SubsetKey

MAX_ITERATIONS = 100


class DegenerateClusteringError(ValueError):
    """Raised when fewer distinct RSS values exist than requested clusters.

    max_k carries the largest feasible cluster count for the same values.
    """

    def __init__(self, requested: int, max_k: int):
        super().__init__(
            f"degenerate clustering: {requested} clusters requested but only "
            f"{max_k} distinct RSS values"
        )
        self.max_k = max_k


@dataclass(frozen=True)
class Cluster:
    """One RSS cluster: members ordered strongest-first, centroid = mean."""

    members: tuple[tuple[int, float], ...]  # (ap_id, rss_dbm), rss descending
    centroid: float

    @property
    def ap_ids(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.members)


@dataclass(frozen=True)
class Clustering:
    """K-means result.  Clusters are ordered strongest-first.

    objective_history holds the within-cluster sum of squared deviations
    sum((x - centroid)**2) after each assignment pass, evaluated at the
    cluster means of that pass.  This is the quantity mean updates descend,
    so the history is non-increasing; the absolute-difference rule used for
    assignment picks the same nearest centroid either way.
    """

    clusters: tuple[Cluster, ...]
    iterations: int
    objective_history: tuple[float, ...]

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def objective(self) -> float:
        return self.objective_history[-1]


def kmeans_1d(
    values: Mapping[int, float], k: int, seed_ranks: Sequence[int] | None = None
) -> Clustering:
    """Lloyd's algorithm on scalar RSS values with |x - centroid| distance.

    Args:
        values: ap_id -> detected rss_dbm (no sentinels).
        k: number of clusters, >= 1.
        seed_ranks: optional 1-based ranks into the distinct RSS values
            sorted descending, selecting the initial centroids.  Default
            (1, ..., k) seeds with the k strongest distinct values.

    Returns:
        Clustering with clusters ordered strongest-first.  Assignment ties
        go to the centroid with the higher RSS value.

    Raises:
        DegenerateClusteringError: fewer than k distinct values.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not values:
        raise ValueError("no RSS values to cluster")
    ids = sorted(values, key=lambda i: (-values[i], i))
    xs = [values[i] for i in ids]
    distinct = sorted(set(xs), reverse=True)
    if len(distinct) < k:
        raise DegenerateClusteringError(k, len(distinct))
    if seed_ranks is None:
        seed_ranks = range(1, k + 1)
    seed_ranks = [int(r) for r in seed_ranks]
    if len(seed_ranks) != k or len(set(seed_ranks)) != k:
        raise ValueError(f"seed_ranks must be {k} distinct ranks")
    if any(not 1 <= r <= len(distinct) for r in seed_ranks):
        raise ValueError(f"seed_ranks out of range [1, {len(distinct)}]")
    centroids = sorted((distinct[r - 1] for r in seed_ranks), reverse=True)

    def assign(cents: list[float]) -> list[int]:
        # Nearest centroid; ties go to the stronger (higher-RSS) centroid,
        # which is the earlier index since cents stay sorted descending.
        out = []
        for x in xs:
            best, best_d = 0, abs(x - cents[0])
            for c in range(1, len(cents)):
                d = abs(x - cents[c])
                if d < best_d:
                    best, best_d = c, d
            out.append(best)
        return out

    assignment = assign(centroids)
    history: list[float] = []
    iterations = 1
    while True:
        centroids = []
        for c in range(k):
            member_xs = [x for x, a in zip(xs, assignment) if a == c]
            assert member_xs, "empty cluster cannot arise under strongest-value seeding"
            centroids.append(sum(member_xs) / len(member_xs))
        history.append(
            sum((x - centroids[a]) ** 2 for x, a in zip(xs, assignment))
        )
        if iterations >= MAX_ITERATIONS:
            break
        new_assignment = assign(centroids)
        if new_assignment == assignment:
            break
        assignment = new_assignment
        iterations += 1

    clusters = []
    for c in range(k):
        members = tuple(
            (i, values[i]) for i, a in zip(ids, assignment) if a == c
        )
        clusters.append(Cluster(members=members, centroid=centroids[c]))
    return Clustering(
        clusters=tuple(clusters),
        iterations=iterations,
        objective_history=tuple(history),
    )


class CandidateSet(NamedTuple):
    """An AP subset candidate plus the strongest-first pick order behind it."""

    subset: SubsetKey
    picks: tuple[int, ...]  # one ap_id per cluster, strongest cluster first


def generate_candidate_sets(clustering: Clustering) -> list[CandidateSet]:
    """Cartesian product of one AP per cluster.

    Within each cluster APs are tried strongest-first; products are emitted
    in lexicographic order of those per-cluster ranks, so the first
    candidate picks the strongest AP of every cluster.
    """
    member_lists = [cl.ap_ids for cl in clustering.clusters]
    out = []
    for picks in itertools.product(*member_lists):
        out.append(CandidateSet(subset=tuple(sorted(picks)), picks=picks))
    return out
