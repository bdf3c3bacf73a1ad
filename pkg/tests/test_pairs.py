import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exposure_hawkes.errors import DataError
from exposure_hawkes.pairs import PairCounts


def test_from_records_and_back():
    recs = [(6, 4, 2), (3, 1, 1), (6, 5, 1)]
    pc = PairCounts.from_records(recs, 10, 3)
    assert pc.counts[5, 1] == 2
    assert pc.total() == 4
    assert pc.records() == [(3, 1, 1.0), (6, 4, 2.0), (6, 5, 1.0)]
    assert pc.per_offspring_day()[5] == 3


@pytest.mark.parametrize("rec", [(3, 3, 1), (2, 4, 1), (11, 9, 1), (0, -1, 1)])
def test_order_violations(rec):
    with pytest.raises(DataError):
        PairCounts.from_records([rec], 10, 3)


def test_lag_beyond_support():
    with pytest.raises(DataError, match="lag"):
        PairCounts.from_records([(8, 2, 1)], 10, 3)


def test_negative_count():
    with pytest.raises(DataError):
        PairCounts.from_records([(3, 2, -1)], 10, 3)


def test_dense_parent_before_day_one():
    arr = np.zeros((5, 3))
    arr[1, 2] = 1.0  # day 2, lag 3 -> parent day -1
    with pytest.raises(DataError):
        PairCounts(arr)


def test_soft_counts_allowed():
    arr = np.zeros((5, 2))
    arr[3, 1] = 0.25
    assert PairCounts(arr).total() == 0.25


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.tuples(st.integers(2, 30), st.integers(1, 5), st.integers(1, 100)),
        max_size=40,
    )
)
def test_csv_roundtrip(tmp_path_factory, raw):
    recs = [(u, u - l, n) for u, l, n in raw if u - l >= 1]
    pc = PairCounts.from_records(recs, 30, 5)
    p = tmp_path_factory.mktemp("pc") / "pairs.csv"
    p.write_text(pc.to_csv_text())
    back = PairCounts.read_csv(p, 30, 5)
    assert np.array_equal(back.counts, pc.counts)


def test_csv_missing_column(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("offspring_day,parent_day\n3,2\n")
    with pytest.raises(DataError):
        PairCounts.read_csv(p, 10, 3)
