"""RSS clustering and candidate-subset generation."""

import itertools

import numpy as np
import pytest

from apseq.selection import (
    DegenerateClusteringError,
    generate_candidate_sets,
    kmeans_1d,
)


class TestKmeansWorkedExamples:
    def test_two_tight_pairs_split_cleanly(self):
        values = {1: -30.0, 2: -32.0, 3: -60.0, 4: -62.0}
        result = kmeans_1d(values, 2)
        members = {frozenset(c.ap_ids) for c in result.clusters}
        assert members == {frozenset({1, 2}), frozenset({3, 4})}
        strong = max(result.clusters, key=lambda c: c.centroid)
        assert strong.centroid == pytest.approx(-31.0)

    def test_single_cluster_centroid_is_the_mean(self):
        values = {1: -40.0, 2: -50.0, 3: -66.0}
        result = kmeans_1d(values, 1)
        assert len(result.clusters) == 1
        assert result.clusters[0].centroid == pytest.approx(-52.0)
        assert set(result.clusters[0].ap_ids) == {1, 2, 3}

    def test_equidistant_value_joins_stronger_centroid(self):
        # -44 and -48 sit exactly between the seed centroids -40 and -52;
        # the tie rule sends each to the stronger (larger-dBm) centroid first,
        # then Lloyd iteration settles on {1,2} vs {3,4}.
        values = {1: -40.0, 2: -44.0, 3: -48.0, 4: -52.0}
        result = kmeans_1d(values, 2)
        members = {frozenset(c.ap_ids) for c in result.clusters}
        assert members == {frozenset({1, 2}), frozenset({3, 4})}

    def test_clusters_ordered_strongest_first(self):
        values = {5: -80.0, 6: -35.0, 7: -58.0}
        result = kmeans_1d(values, 3)
        cents = [c.centroid for c in result.clusters]
        assert cents == sorted(cents, reverse=True)

    def test_members_sorted_by_descending_rss(self):
        values = {1: -50.0, 2: -46.0, 3: -48.0}
        result = kmeans_1d(values, 1)
        assert result.clusters[0].ap_ids == (2, 3, 1)

    def test_k_equal_to_distinct_values(self):
        values = {1: -30.0, 2: -40.0, 3: -50.0}
        result = kmeans_1d(values, 3)
        assert all(len(c.ap_ids) == 1 for c in result.clusters)
        assert result.objective == pytest.approx(0.0)

    def test_duplicate_values_share_a_cluster(self):
        values = {1: -42.0, 2: -42.0, 3: -70.0}
        result = kmeans_1d(values, 2)
        members = {frozenset(c.ap_ids) for c in result.clusters}
        assert members == {frozenset({1, 2}), frozenset({3})}


class TestKmeansErrors:
    def test_too_few_distinct_values_is_degenerate(self):
        with pytest.raises(DegenerateClusteringError) as exc:
            kmeans_1d({1: -40.0, 2: -40.0, 3: -40.0}, 2)
        assert exc.value.max_k == 1

    def test_max_k_reports_the_feasible_ceiling(self):
        with pytest.raises(DegenerateClusteringError) as exc:
            kmeans_1d({1: -40.0, 2: -45.0, 3: -45.0, 4: -51.0}, 4)
        assert exc.value.max_k == 3

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError, match="k"):
            kmeans_1d({1: -40.0, 2: -50.0}, 0)

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError, match="no RSS values"):
            kmeans_1d({}, 1)


class TestKmeansProperties:
    @pytest.mark.parametrize("seed", [3, 17, 251])
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_clusters_are_contiguous_in_value(self, seed, k):
        # 1-D optimal and Lloyd-stable clusterings never interleave: sort the
        # values and each cluster must occupy a consecutive span.
        rng = np.random.default_rng(seed)
        for _ in range(50):
            n = int(rng.integers(k + 1, 10))
            vals = np.round(rng.uniform(-90, -30, size=n), 1)
            values = {i + 1: float(v) for i, v in enumerate(vals)}
            if len(set(values.values())) < k:
                continue
            result = kmeans_1d(values, k)
            order = sorted(values, key=lambda i: (-values[i], i))
            spans = []
            for c in result.clusters:
                pos = sorted(order.index(i) for i in c.ap_ids)
                spans.append((pos[0], pos[-1], len(pos)))
                assert pos[-1] - pos[0] == len(pos) - 1
            spans.sort()
            assert spans[0][0] == 0 and spans[-1][1] == len(order) - 1

    @pytest.mark.parametrize("seed", [9, 40])
    def test_objective_history_is_monotone_nonincreasing(self, seed):
        rng = np.random.default_rng(seed)
        for _ in range(80):
            n = int(rng.integers(5, 12))
            values = {
                i + 1: float(v)
                for i, v in enumerate(rng.uniform(-95, -30, size=n))
            }
            k = int(rng.integers(2, min(5, n)))
            result = kmeans_1d(values, k)
            hist = result.objective_history
            assert len(hist) >= 1
            assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))
            assert result.iterations <= 100

    def test_translation_equivariance(self):
        rng = np.random.default_rng(8)
        values = {i + 1: float(v) for i, v in enumerate(rng.uniform(-90, -35, 8))}
        shifted = {i: v + 7.25 for i, v in values.items()}
        a = kmeans_1d(values, 3)
        b = kmeans_1d(shifted, 3)
        assert [c.ap_ids for c in a.clusters] == [c.ap_ids for c in b.clusters]
        for ca, cb in zip(a.clusters, b.clusters):
            assert cb.centroid == pytest.approx(ca.centroid + 7.25)

    def test_relabeling_ap_ids_preserves_partition(self):
        values = {1: -31.0, 2: -44.0, 3: -59.0, 4: -62.0, 5: -77.0}
        mapping = {1: 9, 2: 3, 3: 14, 4: 6, 5: 21}
        renamed = {mapping[i]: v for i, v in values.items()}
        a = kmeans_1d(values, 2)
        b = kmeans_1d(renamed, 2)
        got = [tuple(mapping[i] for i in c.ap_ids) for c in a.clusters]
        assert got == [c.ap_ids for c in b.clusters]

    def test_seed_ranks_override_changes_initialization(self):
        # Seeding from ranks (1st, 4th) instead of (1st, 2nd) starts the weak
        # centroid at the outlier, which regroups the middle values.
        values = {1: -30.0, 2: -33.0, 3: -36.0, 4: -80.0}
        spread = kmeans_1d(values, 2, seed_ranks=(1, 4))
        assert {frozenset(c.ap_ids) for c in spread.clusters} == {
            frozenset({1, 2, 3}),
            frozenset({4}),
        }

    def test_default_seeding_uses_top_ranks(self):
        values = {1: -30.0, 2: -33.0, 3: -36.0, 4: -80.0}
        default = kmeans_1d(values, 2)
        explicit = kmeans_1d(values, 2, seed_ranks=(1, 2))
        assert [c.members for c in default.clusters] == [
            c.members for c in explicit.clusters
        ]

    def test_seed_ranks_must_be_valid(self):
        values = {1: -30.0, 2: -40.0, 3: -50.0}
        with pytest.raises(ValueError, match="seed_ranks"):
            kmeans_1d(values, 2, seed_ranks=(1,))
        with pytest.raises(ValueError, match="seed_ranks"):
            kmeans_1d(values, 2, seed_ranks=(1, 5))
        with pytest.raises(ValueError, match="seed_ranks"):
            kmeans_1d(values, 2, seed_ranks=(2, 2))


class TestCandidateSets:
    def test_worked_example_with_two_way_weak_cluster(self):
        # Singleton clusters fix APs 3, 6, 2; the two-member cluster {1, 7}
        # yields two candidates, the stronger member (AP 1) tried first.
        values = {1: -50.0, 2: -58.0, 3: -30.0, 6: -40.0, 7: -52.0}
        candidates = generate_candidate_sets(
            _clustering_of(values, [[3], [6], [1, 7], [2]])
        )
        assert [c.subset for c in candidates] == [(1, 2, 3, 6), (2, 3, 6, 7)]

    def test_singleton_clusters_give_one_candidate(self):
        values = {4: -31.0, 9: -47.0, 2: -63.0}
        candidates = generate_candidate_sets(_clustering_of(values, [[4], [9], [2]]))
        assert len(candidates) == 1
        assert candidates[0].subset == (2, 4, 9)
        assert candidates[0].picks == (4, 9, 2)

    def test_candidate_count_is_product_of_cluster_sizes(self):
        values = {i: float(-30 - i) for i in range(1, 9)}
        candidates = generate_candidate_sets(
            _clustering_of(values, [[1, 2], [3, 4, 5], [6], [7, 8]])
        )
        assert len(candidates) == 2 * 3 * 1 * 2

    def test_enumeration_order_prefers_stronger_members(self):
        values = {1: -30.0, 2: -35.0, 3: -60.0, 4: -65.0}
        candidates = generate_candidate_sets(_clustering_of(values, [[1, 2], [3, 4]]))
        assert [c.subset for c in candidates] == [(1, 3), (1, 4), (2, 3), (2, 4)]
        assert [c.picks for c in candidates] == [(1, 3), (1, 4), (2, 3), (2, 4)]

    def test_candidates_cover_every_combination_exactly_once(self):
        values = {i: float(-28 - 3 * i) for i in range(1, 7)}
        candidates = generate_candidate_sets(
            _clustering_of(values, [[1, 2, 3], [4, 5], [6]])
        )
        seen = [c.subset for c in candidates]
        expect = {
            tuple(sorted(combo))
            for combo in itertools.product([1, 2, 3], [4, 5], [6])
        }
        assert len(seen) == len(set(seen)) == len(expect)
        assert set(seen) == expect

    def test_end_to_end_from_kmeans(self):
        values = {1: -30.0, 2: -32.0, 3: -60.0, 4: -62.0}
        candidates = generate_candidate_sets(kmeans_1d(values, 2))
        assert [c.subset for c in candidates] == [(1, 3), (1, 4), (2, 3), (2, 4)]


def _clustering_of(values, groups):
    """Build a Clustering whose clusters contain the given id groups."""
    from apseq.selection import Cluster, Clustering

    clusters = []
    for group in groups:
        ordered = tuple(sorted(group, key=lambda i: (-values[i], i)))
        centroid = float(np.mean([values[i] for i in group]))
        clusters.append(
            Cluster(
                members=tuple((i, values[i]) for i in ordered),
                centroid=centroid,
            )
        )
    clusters.sort(key=lambda c: -c.centroid)
    return Clustering(
        clusters=tuple(clusters),
        iterations=1,
        objective_history=(0.0,),
    )
