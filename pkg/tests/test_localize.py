"""Window aggregation, signature matching, and the localization pipeline."""

import pytest

from apseq.localize import (
    Estimate,
    MissedDetection,
    ScanWindow,
    aggregate_scan,
    load_scan,
    localize,
    match_signature,
    save_scan,
    scan_from_text,
    scan_to_text,
)
from apseq.mapgen import GridSpec, build_map_store
from apseq.model import UNDETECTED_DBM, ApDeployment, RssScan


def window_of(samples, duration_s=10.0, cadence_s=1.0):
    """Shorthand: samples is ap_id -> list of rss values, timestamps implied."""
    aps = {
        ap_id: tuple((float(i), float(r)) for i, r in enumerate(series))
        for ap_id, series in samples.items()
    }
    return ScanWindow(aps=aps, duration_s=duration_s, cadence_s=cadence_s)


class TestScanWindow:
    def test_instant_count(self):
        w = window_of({1: [-40.0]}, duration_s=60.0, cadence_s=0.3)
        assert w.n_instants == 200

    def test_single_instant_floor(self):
        w = window_of({1: [-40.0]}, duration_s=0.5, cadence_s=0.5)
        assert w.n_instants == 1

    def test_timestamps_must_not_decrease(self):
        with pytest.raises(ValueError, match="non-decreasing"):
            ScanWindow(
                aps={1: ((1.0, -40.0), (0.5, -41.0))},
                duration_s=2.0,
                cadence_s=1.0,
            )

    @pytest.mark.parametrize(
        "duration, cadence",
        [(0.0, 1.0), (-3.0, 1.0), (10.0, 0.0), (10.0, -1.0), (10.0, 11.0)],
    )
    def test_schedule_validation(self, duration, cadence):
        with pytest.raises(ValueError):
            ScanWindow(aps={}, duration_s=duration, cadence_s=cadence)


class TestAggregation:
    def test_mean_of_samples(self):
        w = window_of({1: [-40.0, -42.0, -44.0], 2: [-60.0, -62.0]})
        scan = aggregate_scan(w)
        assert scan.values[1] == pytest.approx(-42.0)
        assert scan.values[2] == pytest.approx(-61.0)

    def test_sparse_ap_becomes_undetected(self):
        # 20 instants; 1 sample is below the 10% detection threshold.
        w = window_of(
            {1: [-40.0] * 20, 2: [-70.0]}, duration_s=20.0, cadence_s=1.0
        )
        scan = aggregate_scan(w)
        assert scan.values[2] == UNDETECTED_DBM
        assert set(scan.detected()) == {1}

    def test_threshold_is_strict(self):
        # exactly 10% of 20 instants (2 samples) still counts as detected
        w = window_of(
            {1: [-40.0] * 20, 2: [-70.0, -71.0]}, duration_s=20.0, cadence_s=1.0
        )
        assert set(aggregate_scan(w).detected()) == {1, 2}

    def test_all_sparse_raises_no_signal(self):
        w = window_of({1: [-40.0], 2: [-50.0]}, duration_s=20.0, cadence_s=1.0)
        with pytest.raises(ValueError, match="no signal"):
            aggregate_scan(w)


@pytest.fixture(scope="module")
def half_plane_store():
    dep = ApDeployment(width=10.0, height=10.0, aps=((1, 0.0, 0.0), (2, 10.0, 0.0)))
    return build_map_store(dep, 2, GridSpec(cell_size=1.0, width=10.0, height=10.0))


@pytest.fixture(scope="module")
def collinear_store():
    dep = ApDeployment(
        width=10.0, height=10.0, aps=((1, 0.0, 0.0), (2, 5.0, 0.0), (3, 10.0, 0.0))
    )
    return build_map_store(dep, 3, GridSpec(cell_size=1.0, width=10.0, height=10.0))


@pytest.fixture(scope="module")
def fallback_store():
    # Three collinear APs plus one just off the line: orderings that put the
    # middle AP (2) last within subset (1, 2, 3) are geometrically impossible,
    # so candidates over that subset can miss while (1, 2, 4) still matches.
    dep = ApDeployment(
        width=10.0,
        height=10.0,
        aps=((1, 0.0, 0.0), (2, 5.0, 0.0), (3, 10.0, 0.0), (4, 5.0, 3.0)),
    )
    return build_map_store(dep, 3, GridSpec(cell_size=0.5, width=10.0, height=10.0))


class TestMatchSignature:
    def test_present_and_absent(self, half_plane_store):
        fmap = half_plane_store.maps[(1, 2)]
        assert match_signature((1, 2), fmap).centroid == (2.5, 5.0)
        assert match_signature((2, 1), fmap).centroid == (7.5, 5.0)

    def test_infeasible_signature_returns_none(self, collinear_store):
        fmap = collinear_store.maps[(1, 2, 3)]
        assert match_signature((1, 3, 2), fmap) is None

    def test_wrong_subset_rejected(self, half_plane_store):
        with pytest.raises(ValueError, match="subset"):
            match_signature((1, 3), half_plane_store.maps[(1, 2)])


class TestLocalize:
    def test_half_plane_estimate(self, half_plane_store):
        scan = RssScan(values={1: -40.0, 2: -55.0})
        result = localize(scan, half_plane_store, 2)
        assert isinstance(result, Estimate)
        assert result.position == (2.5, 5.0)
        assert result.matched_signature == (1, 2)
        assert result.subset == (1, 2)
        assert result.candidates_tried == 1

    def test_reversed_order_lands_in_the_other_half(self, half_plane_store):
        scan = RssScan(values={1: -55.0, 2: -40.0})
        result = localize(scan, half_plane_store, 2)
        assert result.position == (7.5, 5.0)
        assert result.matched_signature == (2, 1)

    def test_impossible_order_is_a_missed_detection(self, collinear_store):
        # RSS order 1 > 3 > 2 puts the middle AP last: no region anywhere.
        scan = RssScan(values={1: -30.0, 2: -50.0, 3: -40.0})
        result = localize(scan, collinear_store, 3)
        assert isinstance(result, MissedDetection)
        assert result.candidates_tried == 1

    def test_fallback_candidate_rescues_the_estimate(self, fallback_store):
        # Values cluster as {1}, {3, 4}, {2}; first candidate (1,2,3) yields
        # the impossible order 1-3-2, the second (1,2,4) matches 1-4-2.
        scan = RssScan(values={1: -30.0, 2: -70.0, 3: -50.0, 4: -52.0})
        result = localize(scan, fallback_store, 3)
        assert isinstance(result, Estimate)
        assert result.candidates_tried == 2
        assert result.subset == (1, 2, 4)
        assert result.matched_signature == (1, 4, 2)

    def test_estimate_carries_region_stats(self, half_plane_store):
        scan = RssScan(values={1: -40.0, 2: -55.0})
        result = localize(scan, half_plane_store, 2)
        region = half_plane_store.maps[(1, 2)].regions[(1, 2)]
        assert result.region_accuracy == region.accuracy
        assert result.region_radius == region.radius


@pytest.fixture(scope="module")
def store_family():
    dep = ApDeployment(
        width=10.0,
        height=10.0,
        aps=((1, 0.0, 0.0), (2, 5.0, 0.0), (3, 10.0, 0.0), (4, 5.0, 3.0)),
    )
    grid = GridSpec(cell_size=1.0, width=10.0, height=10.0)
    return {k: build_map_store(dep, k, grid) for k in (2, 3, 4)}


class TestKDegradation:
    def test_fewer_detected_aps_shrink_k(self, store_family):
        scan = RssScan(values={1: -35.0, 2: -45.0, 4: UNDETECTED_DBM})
        result = localize(scan, store_family, 4)
        assert isinstance(result, Estimate)
        assert len(result.subset) == 2

    def test_duplicate_values_shrink_k(self, store_family):
        scan = RssScan(values={1: -35.0, 2: -45.0, 3: -45.0, 4: -60.0})
        result = localize(scan, store_family, 4)
        assert len(result.subset) == 3

    def test_single_store_with_wrong_k_is_an_error(self, store_family):
        scan = RssScan(values={1: -35.0, 2: -45.0})
        with pytest.raises(ValueError, match="store/k mismatch"):
            localize(scan, store_family[3], 3)

    def test_missing_degraded_store_is_an_error(self, store_family):
        scan = RssScan(values={1: -35.0, 2: -45.0})
        with pytest.raises(ValueError, match="store/k mismatch"):
            localize(scan, {3: store_family[3]}, 3)

    def test_one_detected_ap_is_insufficient(self, store_family):
        scan = RssScan(values={1: -35.0, 2: UNDETECTED_DBM})
        with pytest.raises(ValueError, match="insufficient APs"):
            localize(scan, store_family, 4)

    def test_all_equal_values_are_insufficient(self, store_family):
        scan = RssScan(values={1: -40.0, 2: -40.0, 3: -40.0})
        with pytest.raises(ValueError, match="insufficient APs"):
            localize(scan, store_family, 3)


class TestScanFiles:
    def test_round_trip_preserves_series(self, tmp_path):
        w = window_of(
            {3: [-41.5, -42.25], 1: [-60.125, -61.0]},
            duration_s=2.0,
            cadence_s=1.0,
        )
        path = tmp_path / "scan.txt"
        save_scan(w, path)
        loaded = load_scan(path)
        assert set(loaded.aps) == {1, 3}
        for ap_id in (1, 3):
            got = loaded.aps[ap_id]
            want = w.aps[ap_id]
            assert len(got) == len(want)
            for (gt, gr), (wt, wr) in zip(got, want):
                assert gt == pytest.approx(wt, abs=1e-3)
                assert gr == pytest.approx(wr, abs=1e-6)

    def test_schedule_recovered_from_timestamps(self, tmp_path):
        w = window_of({1: [-40.0] * 5, 2: [-50.0] * 5}, duration_s=5.0, cadence_s=1.0)
        path = tmp_path / "scan.txt"
        save_scan(w, path)
        loaded = load_scan(path)
        assert loaded.cadence_s == pytest.approx(1.0)
        assert loaded.n_instants == 5

    def test_aggregation_unchanged_by_round_trip(self, tmp_path):
        w = window_of(
            {1: [-40.0, -42.0, -44.0, -40.5, -41.5], 2: [-61.0, -63.0, -59.0, -60.0, -62.0]},
            duration_s=5.0,
            cadence_s=1.0,
        )
        path = tmp_path / "scan.txt"
        save_scan(w, path)
        before = aggregate_scan(w)
        after = aggregate_scan(load_scan(path))
        for ap_id in before.values:
            assert after.values[ap_id] == pytest.approx(before.values[ap_id], abs=1e-6)

    def test_samples_written_in_time_order(self):
        w = window_of({2: [-50.0, -51.0], 1: [-40.0, -41.0]}, duration_s=2.0, cadence_s=1.0)
        lines = scan_to_text(w).splitlines()
        assert lines[0] == "APSEQ-SCAN v1"
        assert lines[1:] == [
            "sample 0.000 1 -40.000000",
            "sample 0.000 2 -50.000000",
            "sample 1.000 1 -41.000000",
            "sample 1.000 2 -51.000000",
        ]

    def test_unsupported_version(self):
        with pytest.raises(ValueError, match="unsupported version"):
            scan_from_text("APSEQ-SCAN v9\nsample 0.0 1 -40.0\n")

    @pytest.mark.parametrize(
        "line", ["sample 0.0 1", "sample 0.0 x -40.0", "reading 0.0 1 -40.0"]
    )
    def test_malformed_sample_lines(self, line):
        with pytest.raises(ValueError, match="malformed sample"):
            scan_from_text(f"APSEQ-SCAN v1\n{line}\n")

    def test_empty_scan_rejected(self):
        with pytest.raises(ValueError, match="no samples"):
            scan_from_text("APSEQ-SCAN v1\n")
