import numpy as np
import pytest
from hypothesis import given, strategies as st

from credalchain.data import (CATEGORICAL, MISSING, ConfigError, DataError, RawDataset,
                              apply_bins, discretize, inject_missing, load_arff,
                              load_csv, load_dataset, make_folds)
from credalchain.toy import emotions_sample, two_label_dataset
from oracles import equal_frequency_bins

ARFF = """% comment
@relation 'tiny: -C -2'
@attribute a numeric
@attribute colour {red, 'dark blue'}
@attribute l1 {0,1}
@attribute l2 {0,1}
@data
1.5, red, 0, 1
-2, 'dark blue', 1, 1

3e1,red,0,0
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_arff_meka_labels(tmp_path):
    ds = load_arff(_write(tmp_path, "t.arff", ARFF))
    assert ds.name == "tiny"
    assert (ds.n, ds.p, ds.m) == (3, 2, 2)
    np.testing.assert_array_equal(ds.features, [[1.5, 0], [-2, 1], [30, 0]])
    np.testing.assert_array_equal(ds.labels, [[0, 1], [1, 1], [0, 0]])
    assert ds.feature_kinds[1] == CATEGORICAL
    assert ds.categories[1] == ("red", "dark blue")


@pytest.mark.parametrize("labels", [2, ["l1", "l2"]])
def test_arff_label_selection(tmp_path, labels):
    ds = load_arff(_write(tmp_path, "t.arff", ARFF), labels)
    assert ds.label_names == ("l1", "l2")


def test_arff_xml_labels(tmp_path):
    xml = _write(tmp_path, "t.xml", '<labels xmlns="http://mulan.sourceforge.net/labels">'
                 '<label name="l2"></label></labels>')
    ds = load_arff(_write(tmp_path, "t.arff", ARFF), xml)
    assert ds.label_names == ("l2",)
    assert ds.feature_names == ("a", "colour", "l1")


@pytest.mark.parametrize("row, message", [
    ("1, red, 0", "expected 4 values"),
    ("?, red, 0, 1", "missing feature"),
    ("1, green, 0, 1", "undeclared nominal"),
    ("{0 1, 2 1}", "sparse"),
])
def test_arff_errors_carry_line(tmp_path, row, message):
    text = ARFF.replace("3e1,red,0,0", row)
    with pytest.raises(DataError, match=message) as err:
        load_arff(_write(tmp_path, "t.arff", text))
    if "sparse" not in message:
        assert ":11:" in str(err.value)


def test_arff_non_binary_label(tmp_path):
    text = ARFF.replace("@attribute l2 {0,1}", "@attribute l2 numeric").replace(
        "3e1,red,0,0", "3e1,red,0,2")
    with pytest.raises(DataError, match="non-binary"):
        load_arff(_write(tmp_path, "t.arff", text))


def test_arff_requires_label_spec(tmp_path):
    text = ARFF.replace("'tiny: -C -2'", "tiny")
    with pytest.raises(DataError, match="-C"):
        load_arff(_write(tmp_path, "t.arff", text))


def test_emotions_sample():
    ds = emotions_sample()
    assert (ds.n, ds.p, ds.m) == (10, 72, 6)
    assert set(np.unique(ds.labels)) <= {0, 1}


def test_csv_with_header(tmp_path):
    ds = load_csv(_write(tmp_path, "d.csv", "f,ya,yb\n0.5,1,0\n2,0,0\n"), 2)
    assert ds.feature_names == ("f",) and ds.label_names == ("ya", "yb")
    np.testing.assert_array_equal(ds.labels, [[1, 0], [0, 0]])


def test_csv_without_header(tmp_path):
    ds = load_csv(_write(tmp_path, "d.csv", "0.5,1,0\n2,0,0\n"), 1)
    assert ds.n == 2 and ds.p == 2 and ds.m == 1


@pytest.mark.parametrize("text, message", [
    ("a,b\n", "no rows"),
    ("1,0\n1,1,0\n", "expected 2 values"),
    ("1,0.5\n", "non-binary"),
    ("1,0\n2,1\nx,1\n", "non-numeric"),
])
def test_csv_errors(tmp_path, text, message):
    with pytest.raises(DataError, match=message):
        load_csv(_write(tmp_path, "d.csv", text), 1)


def test_load_dataset_dispatch(tmp_path):
    assert load_dataset(_write(tmp_path, "d.csv", "1,0\n"), 1).n == 1
    with pytest.raises(DataError, match="format"):
        load_dataset(_write(tmp_path, "d.txt", "1,0\n"), 1)


def test_raw_dataset_rejects_non_binary_labels():
    with pytest.raises(DataError):
        RawDataset("x", np.zeros((2, 1)), np.array([[0], [3]]), ("numeric",), ("a",),
                   ("y",), (None,))


def test_two_label_joint():
    ds = two_label_dataset()
    assert ds.n == 50
    counts = {(a, b): int(((ds.labels[:, 0] == a) & (ds.labels[:, 1] == b)).sum())
              for a in (0, 1) for b in (0, 1)}
    # joint .36 / .24 / .04 / .36
    assert counts == {(1, 1): 18, (1, 0): 12, (0, 1): 2, (0, 0): 18}


def _numeric(values):
    values = np.asarray(values, dtype=float)
    return RawDataset("v", values[:, None], np.zeros((len(values), 1), np.int8),
                      ("numeric",), ("a",), ("y",), (None,))


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=60), st.integers(2, 8))
def test_equal_frequency_matches_oracle(values, z):
    disc, _ = discretize(_numeric(values), z)
    assert disc.features[:, 0].tolist() == equal_frequency_bins(values, z)
    assert disc.cardinalities[0] <= z


def test_twelve_values_six_bins():
    disc, edges = discretize(_numeric(range(1, 13)), 6)
    np.testing.assert_allclose(edges[0], [2.5, 4.5, 6.5, 8.5, 10.5])
    assert np.bincount(disc.features[:, 0]).tolist() == [2] * 6


def test_binary_feature_has_no_empty_bin():
    disc, edges = discretize(_numeric([0, 1] * 10), 6)
    np.testing.assert_allclose(edges[0], [0.5])
    assert disc.cardinalities == (2,)


def test_apply_bins_clamps_and_is_right_closed():
    _, edges = discretize(_numeric(range(1, 13)), 6)
    test = apply_bins(_numeric([-100, 2.5, 2.6, 100]), edges)
    assert test.features[:, 0].tolist() == [0, 0, 1, 5]


def test_equal_width():
    _, edges = discretize(_numeric([0, 10]), 5, method="width")
    np.testing.assert_allclose(edges[0], [2, 4, 6, 8])


def test_categorical_passes_through(tmp_path):
    ds = load_arff(_write(tmp_path, "t.arff", ARFF))
    disc, edges = discretize(ds, 6)
    assert edges[1] is None
    assert disc.features[:, 1].tolist() == [0, 1, 0]
    assert disc.cardinalities[1] == 2


@pytest.mark.parametrize("kwargs", [{"z": 1}, {"method": "kmeans"}])
def test_discretize_config_errors(kwargs):
    with pytest.raises(ConfigError):
        discretize(_numeric([1, 2]), **kwargs)


@pytest.mark.parametrize("pct, expected", [(0, 0), (20, 8), (40, 16), (33, 13), (100, 40)])
def test_inject_missing_count(toy_disc, pct, expected):
    sub = toy_disc.with_labels(toy_disc.labels[:20])
    out = inject_missing(sub, pct, 7)
    assert int((out.labels == MISSING).sum()) == expected
    kept = out.labels != MISSING
    np.testing.assert_array_equal(out.labels[kept], sub.labels[kept])


def test_inject_missing_deterministic(toy_disc):
    a = inject_missing(toy_disc, 40, 3).labels
    b = inject_missing(toy_disc, 40, 3).labels
    c = inject_missing(toy_disc, 40, 4).labels
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert (toy_disc.labels != MISSING).all()


def test_folds_partition():
    plan = make_folds(23, 3, 10, seed=5)
    for r in range(3):
        sizes = [len(plan.test_indices(r, f)) for f in range(10)]
        assert sum(sizes) == 23 and max(sizes) - min(sizes) <= 1
        for f in range(10):
            tr, te = plan.train_indices(r, f), plan.test_indices(r, f)
            assert not set(tr) & set(te) and len(tr) + len(te) == 23
    again = make_folds(23, 3, 10, seed=5)
    assert all(np.array_equal(a, b) for a, b in zip(plan.assignments, again.assignments))
    assert not np.array_equal(plan.assignments[0], plan.assignments[1])


@pytest.mark.parametrize("args", [(5, 1, 10, 0), (20, 1, 1, 0), (20, 0, 2, 0)])
def test_folds_config_errors(args):
    with pytest.raises(ConfigError):
        make_folds(*args)
