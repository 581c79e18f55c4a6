import math

import pytest

from conftest import features, make_dataset, random_dataset
from tracklike.data import (
    FEATURE_NAMES,
    Dataset,
    ScalerParams,
    TrackRecord,
    apply_scaler,
    class_conditional_summary,
    correlation_matrix,
    fit_scaler,
    inverse_scale,
    load_dataset,
    save_dataset,
    split,
)
from tracklike.errors import (
    AlreadyScaled,
    BadFraction,
    BadLabel,
    EmptyDataset,
    MissingColumn,
    NonNumericCell,
    TooFewRecords,
    UnknownFeature,
)


def write_csv(path, header, rows):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


def full_header(extra=(), label="History"):
    return list(FEATURE_NAMES) + [label] + list(extra)


def feature_row(label, extra=(), **overrides):
    return [str(v) for v in features(**overrides)] + [str(label)] + list(extra)


class TestLoadDataset:
    def test_two_row_csv(self, tmp_path):
        path = tmp_path / "d.csv"
        write_csv(path, full_header(), [feature_row(1, danceability=0.9), feature_row(0)])
        ds = load_dataset(path)
        assert len(ds) == 2
        assert not ds.scaled
        assert ds.records[0].features[FEATURE_NAMES.index("danceability")] == 0.9
        assert ds.records[0].history == 1
        assert ds.records[1].history == 0
        # no track_id column: ids synthesized from the row index
        assert [r.track_id for r in ds.records] == ["0", "1"]

    def test_track_id_and_extra_columns(self, tmp_path):
        path = tmp_path / "d.csv"
        header = ["track_id"] + full_header(extra=["genre"])
        rows = [["song-a"] + feature_row(1, extra=["pop"])]
        write_csv(path, header, rows)
        ds = load_dataset(path)
        assert ds.records[0].track_id == "song-a"

    def test_missing_tempo(self, tmp_path):
        path = tmp_path / "d.csv"
        header = [h for h in full_header() if h != "tempo"]
        write_csv(path, header, [])
        with pytest.raises(MissingColumn) as exc:
            load_dataset(path)
        assert exc.value.column == "tempo"

    def test_bad_label(self, tmp_path):
        path = tmp_path / "d.csv"
        write_csv(path, full_header(), [feature_row(1), feature_row(2)])
        with pytest.raises(BadLabel) as exc:
            load_dataset(path)
        assert exc.value.row == 2

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "d.csv"
        row = feature_row(1)
        row[FEATURE_NAMES.index("energy")] = "loud"
        write_csv(path, full_header(), [row])
        with pytest.raises(NonNumericCell) as exc:
            load_dataset(path)
        assert exc.value.column == "energy"
        assert exc.value.row == 1

    def test_nan_cell_rejected(self, tmp_path):
        path = tmp_path / "d.csv"
        row = feature_row(0)
        row[FEATURE_NAMES.index("valence")] = "nan"
        write_csv(path, full_header(), [row])
        with pytest.raises(NonNumericCell):
            load_dataset(path)

    def test_empty_dataset(self, tmp_path):
        path = tmp_path / "d.csv"
        write_csv(path, full_header(), [])
        with pytest.raises(EmptyDataset):
            load_dataset(path)

    def test_case_insensitive_label(self, tmp_path):
        path = tmp_path / "d.csv"
        write_csv(path, full_header(label="history"), [feature_row(1)])
        ds = load_dataset(path)
        assert ds.records[0].history == 1
        assert ds.label_name == "history"

    def test_round_trip(self, tmp_path):
        src = tmp_path / "src.csv"
        write_csv(
            src,
            ["track_id"] + full_header(),
            [["a"] + feature_row(1, loudness=-13.25), ["b"] + feature_row(0, tempo=93.5)],
        )
        ds = load_dataset(src)
        back = tmp_path / "back.csv"
        save_dataset(ds, back)
        assert load_dataset(back) == ds


class TestScaler:
    def test_fit_min_max(self):
        ds = make_dataset([({"tempo": 3.0}, 0), ({"tempo": 7.0}, 1), ({"tempo": 5.0}, 0)])
        p = fit_scaler(ds)
        i = FEATURE_NAMES.index("tempo")
        assert (p.mins[i], p.maxs[i]) == (3.0, 7.0)

    def test_fit_constant_column(self):
        ds = make_dataset([({"key": 4.0}, 0), ({"key": 4.0}, 1)])
        p = fit_scaler(ds)
        i = FEATURE_NAMES.index("key")
        assert (p.mins[i], p.maxs[i]) == (4.0, 4.0)

    def test_fit_single_record(self):
        ds = make_dataset([({}, 1)])
        p = fit_scaler(ds)
        assert p.mins == ds.records[0].features
        assert p.maxs == ds.records[0].features

    def test_fit_rejects_scaled(self):
        ds = make_dataset([({}, 1)], scaled=True)
        with pytest.raises(AlreadyScaled):
            fit_scaler(ds)

    def test_fit_rejects_empty(self):
        with pytest.raises(EmptyDataset):
            fit_scaler(Dataset((), FEATURE_NAMES, False))

    def test_endpoints(self):
        ds = make_dataset([({"loudness": -60.0}, 0), ({"loudness": 0.0}, 1)])
        p = fit_scaler(ds)
        out = apply_scaler(p, ds)
        i = FEATURE_NAMES.index("loudness")
        assert out.records[0].features[i] == 0.0
        assert out.records[1].features[i] == 1.0
        assert out.scaled

    def test_midpoint(self):
        ds = make_dataset(
            [({"loudness": -60.0}, 0), ({"loudness": -30.0}, 1), ({"loudness": 0.0}, 1)]
        )
        out = apply_scaler(fit_scaler(ds), ds)
        assert out.records[1].features[FEATURE_NAMES.index("loudness")] == 0.5

    def test_constant_column_maps_to_zero(self):
        ds = make_dataset([({"mode": 1.0}, 0), ({"mode": 1.0}, 1)])
        out = apply_scaler(fit_scaler(ds), ds)
        i = FEATURE_NAMES.index("mode")
        assert all(r.features[i] == 0.0 for r in out.records)

    def test_new_data_clamped(self):
        ds = make_dataset([({"tempo": 100.0}, 0), ({"tempo": 120.0}, 1)])
        p = fit_scaler(ds)
        fresh = make_dataset([({"tempo": 300.0}, 0), ({"tempo": 10.0}, 1)])
        out = apply_scaler(p, fresh)
        i = FEATURE_NAMES.index("tempo")
        assert out.records[0].features[i] == 1.0
        assert out.records[1].features[i] == 0.0

    def test_apply_rejects_scaled(self):
        ds = make_dataset([({}, 1), ({}, 0)])
        p = fit_scaler(ds)
        with pytest.raises(AlreadyScaled):
            apply_scaler(p, apply_scaler(p, ds))

    def test_all_values_in_unit_interval(self, rng):
        ds = random_dataset(rng, 40, scale=50.0)
        out = apply_scaler(fit_scaler(ds), ds)
        for r in out.records:
            for v in r.features:
                assert 0.0 <= v <= 1.0

    def test_inverse_endpoints(self):
        ds = make_dataset([({"tempo": 80.0}, 0), ({"tempo": 160.0}, 1)])
        p = fit_scaler(ds)
        assert inverse_scale(p, 0.0, "tempo") == 80.0
        assert inverse_scale(p, 1.0, "tempo") == 160.0

    def test_inverse_degenerate(self):
        ds = make_dataset([({"key": 4.0}, 0), ({"key": 4.0}, 1)])
        p = fit_scaler(ds)
        assert inverse_scale(p, 0.0, "key") == 4.0

    def test_inverse_unknown_feature(self):
        ds = make_dataset([({}, 1), ({}, 0)])
        with pytest.raises(UnknownFeature):
            inverse_scale(fit_scaler(ds), 0.5, "bpm")

    def test_round_trip_within_tolerance(self, rng):
        # original-domain reconstruction; feature magnitudes up to ~100 keep
        # the binary64 error well under 1e-12 absolute
        ds = random_dataset(rng, 30, scale=100.0)
        p = fit_scaler(ds)
        scaled = apply_scaler(p, ds)
        for orig, rec in zip(ds.records, scaled.records):
            for i, name in enumerate(FEATURE_NAMES):
                if p.mins[i] == p.maxs[i]:
                    continue
                back = inverse_scale(p, rec.features[i], name)
                assert abs(back - orig.features[i]) < 1e-12

    def test_scaler_params_validate(self):
        with pytest.raises(ValueError):
            ScalerParams(("a",), (2.0,), (1.0,))


def oracle_pearson(xs, ys):
    """Brute-force two-pass Pearson, fsum-based, independent of the library."""
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys)) / n
    sx = math.sqrt(math.fsum((x - mx) ** 2 for x in xs) / n)
    sy = math.sqrt(math.fsum((y - my) ** 2 for y in ys) / n)
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return cov / (sx * sy)


class TestCorrelationMatrix:
    def test_self_correlation(self):
        ds = make_dataset([({"tempo": t}, i % 2) for i, t in enumerate([90.0, 120.0, 150.0])])
        cm = correlation_matrix(ds)
        i = FEATURE_NAMES.index("tempo")
        assert abs(cm.values[i][i] - 1.0) < 1e-12

    def test_duplicate_and_negated_columns(self):
        rows = []
        for i, t in enumerate([1.0, 2.0, 5.0, 9.0]):
            rows.append(({"tempo": t, "energy": t, "valence": -t}, i % 2))
        cm = correlation_matrix(make_dataset(rows))
        ti = FEATURE_NAMES.index("tempo")
        ei = FEATURE_NAMES.index("energy")
        vi = FEATURE_NAMES.index("valence")
        assert abs(cm.values[ti][ei] - 1.0) < 1e-12
        assert abs(cm.values[ti][vi] + 1.0) < 1e-12

    def test_constant_column_rule(self):
        ds = make_dataset([({"tempo": t}, i % 2) for i, t in enumerate([90.0, 100.0, 130.0])])
        cm = correlation_matrix(ds)
        ki = FEATURE_NAMES.index("key")  # constant in make_dataset defaults
        assert cm.values[ki][ki] == 1.0
        for j in range(len(cm.labels)):
            if j != ki:
                assert cm.values[ki][j] == 0.0

    def test_symmetry_exact_and_range(self, rng):
        ds = random_dataset(rng, 17)
        cm = correlation_matrix(ds)
        n = len(cm.labels)
        assert n == 14
        for i in range(n):
            for j in range(n):
                assert cm.values[i][j] == cm.values[j][i]
                assert -1.0 - 1e-12 <= cm.values[i][j] <= 1.0 + 1e-12

    def test_matches_oracle(self, rng):
        ds = random_dataset(rng, 5)
        cm = correlation_matrix(ds)
        columns = [ds.feature_column(i) for i in range(13)]
        columns.append([float(h) for h in ds.labels()])
        for i in range(14):
            for j in range(14):
                if i == j:
                    continue
                assert abs(cm.values[i][j] - oracle_pearson(columns[i], columns[j])) < 1e-12

    def test_labels_include_history(self):
        ds = make_dataset([({}, 0), ({"tempo": 99.0}, 1)])
        cm = correlation_matrix(ds)
        assert cm.labels == FEATURE_NAMES + ("History",)

    def test_too_few_records(self):
        with pytest.raises(TooFewRecords):
            correlation_matrix(make_dataset([({}, 1)]))


class TestClassSummary:
    def test_perfectly_split_feature(self):
        ds = make_dataset(
            [({"danceability": 1.0}, 1), ({"danceability": 1.0}, 1), ({"danceability": 0.0}, 0)]
        )
        summary = class_conditional_summary(ds)
        s = summary["danceability"]
        assert s.mean_liked == 1.0
        assert s.mean_disliked == 0.0
        assert (s.count_liked, s.count_disliked) == (2, 1)

    def test_absent_class(self):
        ds = make_dataset([({}, 1), ({}, 1)])
        s = class_conditional_summary(ds)["tempo"]
        assert s.count_disliked == 0
        assert s.mean_disliked is None

    def test_mixed_means(self):
        ds = make_dataset(
            [
                ({"energy": 0.2}, 1),
                ({"energy": 0.4}, 1),
                ({"energy": 0.9}, 0),
                ({"energy": 0.7}, 0),
            ]
        )
        s = class_conditional_summary(ds)["energy"]
        assert abs(s.mean_liked - (0.2 + 0.4) / 2) < 1e-15
        assert abs(s.mean_disliked - (0.9 + 0.7) / 2) < 1e-15


class TestSplit:
    def _balanced(self, n):
        return make_dataset([({"tempo": float(60 + i)}, i % 2) for i in range(n)])

    def test_counts_ten_records(self):
        train, val = split(self._balanced(10), 0.8, seed=5)
        assert (len(train), len(val)) == (8, 2)

    def test_deterministic(self):
        ds = self._balanced(30)
        a = split(ds, 0.8, seed=9)
        b = split(ds, 0.8, seed=9)
        assert a[0] == b[0] and a[1] == b[1]
        c = split(ds, 0.8, seed=10)
        assert c[0] != a[0]

    def test_partition(self):
        ds = self._balanced(23)
        train, val = split(ds, 0.7, seed=1)
        ids = sorted(r.track_id for r in train.records + val.records)
        assert ids == sorted(r.track_id for r in ds.records)
        assert not set(r.track_id for r in train.records) & set(
            r.track_id for r in val.records
        )

    def test_stratified_ratio(self):
        rows = [({"tempo": float(i)}, 1 if i < 70 else 0) for i in range(100)]
        train, val = split(make_dataset(rows), 0.8, seed=3)
        liked = sum(train.labels())
        assert abs(liked - 56) <= 1  # 70% of the 80 train rows
        assert abs((len(train) - liked) - 24) <= 1

    def test_bad_fraction(self):
        ds = self._balanced(10)
        for f in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(BadFraction):
                split(ds, f, seed=0)

    def test_singleton_class_goes_to_train(self):
        rows = [({"tempo": float(i)}, 0) for i in range(5)] + [({}, 1)]
        train, val = split(make_dataset(rows), 0.5, seed=2)
        assert sum(train.labels()) == 1
        assert sum(val.labels()) == 0


class TestTrackRecord:
    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            TrackRecord("x", (1.0, 2.0), 1)

    def test_non_finite(self):
        vals = list(features())
        vals[0] = math.inf
        with pytest.raises(ValueError):
            TrackRecord("x", tuple(vals), 0)

    def test_bad_history(self):
        with pytest.raises(ValueError):
            TrackRecord("x", features(), 2)
