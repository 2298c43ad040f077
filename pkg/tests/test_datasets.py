import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from afcm.datasets import (
    Dataset, DatasetError, gen_three_rings, gen_two_spirals, load_csv, load_iris,
    minmax_normalize, save_csv,
)


def test_load_csv_last_column_labels(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("1,2,A\n3,4,A\n5,6,B\n")
    data = load_csv(path, label_column=-1)
    assert (data.n_features, data.n_samples) == (2, 3)
    np.testing.assert_array_equal(data.features, [[1, 3, 5], [2, 4, 6]])
    np.testing.assert_array_equal(data.labels, [0, 0, 1])
    assert data.label_names == ("A", "B")


def test_load_csv_header_and_named_label(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("species,a,b\ncat,1.5,2\ndog,3,4\n")
    data = load_csv(path, label_column="species")
    np.testing.assert_array_equal(data.features, [[1.5, 3], [2, 4]])
    np.testing.assert_array_equal(data.labels, [0, 1])


def test_load_csv_without_labels(tmp_path):
    path = tmp_path / "plain.csv"
    path.write_text("1,2\n3,4\n")
    data = load_csv(path)
    assert data.labels is None
    assert data.features.shape == (2, 2)


def test_load_csv_bad_cell_names_row_and_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2,A\n3,oops,A\n")
    with pytest.raises(DatasetError, match=r"row 1, column 1"):
        load_csv(path, label_column=2)


def test_load_csv_ragged_and_empty(tmp_path):
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    with pytest.raises(DatasetError, match="ragged"):
        load_csv(ragged)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(DatasetError, match="empty"):
        load_csv(empty)


def test_iris_csv_round_trip(tmp_path):
    iris = load_iris()
    path = save_csv(iris, tmp_path / "iris.csv")
    data = load_csv(path, label_column="label")
    assert (data.n_samples, data.n_features, data.n_classes) == (150, 4, 3)
    np.testing.assert_array_equal(data.features, iris.features)


def test_dataset_invariants():
    with pytest.raises(DatasetError):
        Dataset(np.array([[1.0, np.nan]]))
    with pytest.raises(DatasetError):
        Dataset(np.ones((2, 3)), labels=[0, 1])
    with pytest.raises(DatasetError):
        Dataset(np.ones((2, 2)), labels=[0, -1])
    data = Dataset(np.ones((2, 3)))
    with pytest.raises(ValueError):
        data.features[0, 0] = 5.0


@pytest.mark.parametrize("row, expected", [
    ([0.0, 5.0, 10.0], [0.0, 0.5, 1.0]),
    ([7.0, 7.0, 7.0], [0.0, 0.0, 0.0]),
    ([-1.0, 0.0, 3.0], [0.0, 0.25, 1.0]),
])
def test_minmax_examples(row, expected):
    out = minmax_normalize(Dataset(np.array([row])))
    np.testing.assert_allclose(out.features[0], expected, rtol=0, atol=1e-15)


def test_minmax_keeps_labels():
    data = Dataset(np.array([[1.0, 2.0]]), labels=[1, 0])
    np.testing.assert_array_equal(minmax_normalize(data).labels, [1, 0])


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 12)), elements=finite))
def test_minmax_idempotent_and_unit_range(feats):
    once = minmax_normalize(Dataset(feats))
    twice = minmax_normalize(once)
    np.testing.assert_allclose(twice.features, once.features, rtol=0, atol=1e-12)
    for row, raw in zip(once.features, feats):
        if raw.max() > raw.min():
            assert row.min() == 0.0
            assert row.max() == pytest.approx(1.0, abs=1e-12)
        else:
            assert np.all(row == 0.0)


def test_two_spirals_shape_and_counts():
    data = gen_two_spirals(500, 0.0, seed=3)
    assert (data.n_features, data.n_samples) == (2, 1000)
    np.testing.assert_array_equal(np.bincount(data.labels), [500, 500])
    # second arm is the first rotated by pi
    np.testing.assert_allclose(data.features[:, 500:], -data.features[:, :500])


def test_two_spirals_minimal_and_deterministic():
    tiny = gen_two_spirals(1, 0.0, seed=1)
    assert tiny.n_samples == 2 and set(tiny.labels) == {0, 1}
    a = gen_two_spirals(50, 0.2, seed=9)
    b = gen_two_spirals(50, 0.2, seed=9)
    assert a.features.tobytes() == b.features.tobytes()
    assert not np.array_equal(a.features, gen_two_spirals(50, 0.2, seed=10).features)


def test_three_rings_counts_and_radii():
    data = gen_three_rings(300, (1, 2, 3), 0.05, seed=0)
    assert data.n_samples == 900
    np.testing.assert_array_equal(np.bincount(data.labels), [300, 300, 300])
    exact = gen_three_rings(40, (1, 2, 3), 0.0, seed=4)
    radius = np.linalg.norm(exact.features, axis=0)
    np.testing.assert_allclose(radius, np.repeat([1.0, 2.0, 3.0], 40), rtol=0, atol=1e-12)
    again = gen_three_rings(40, (1, 2, 3), 0.0, seed=4)
    assert exact.features.tobytes() == again.features.tobytes()


@pytest.mark.parametrize("radii", [(1, 1, 2), (3, 2, 1), (0, 1, 2)])
def test_three_rings_rejects_bad_radii(radii):
    with pytest.raises(DatasetError):
        gen_three_rings(10, radii)
