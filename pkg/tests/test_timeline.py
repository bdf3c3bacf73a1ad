from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exposure_hawkes.errors import ConfigError, DataError
from exposure_hawkes.timeline import CountSeries, Dataset, align, as_counts, format_counts, load_counts


def write(tmp_path, text, name="counts.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_basic(tmp_path):
    p = write(tmp_path, "date,new_positives,new_hospitalized\n2020-05-15,3,0\n2020-05-16,4,1\n2020-05-17,0,2\n")
    ds = load_counts(p)
    assert ds.T == 3
    assert ds.start_date == date(2020, 5, 15)
    assert list(ds.infections.counts) == [3, 4, 0]
    assert list(ds.hospitalizations.counts) == [0, 1, 2]


def test_hospitalized_column_optional(tmp_path):
    p = write(tmp_path, "date,new_positives\n2020-05-15,3\n2020-05-16,4\n")
    ds = load_counts(p)
    assert ds.hospitalizations is None


def test_unsorted_rows_are_sorted(tmp_path):
    p = write(tmp_path, "date,new_positives\n2020-05-16,4\n2020-05-15,3\n")
    assert list(load_counts(p).infections.counts) == [3, 4]


def test_column_map_and_delimiter(tmp_path):
    p = write(tmp_path, "jour;P;incid_hosp\n2020-09-01;100;5\n2020-09-02;120;6\n")
    ds = load_counts(p, {"date": "jour", "positives": "P", "hospitalized": "incid_hosp"}, delimiter=";")
    assert list(ds.infections.counts) == [100, 120]
    assert list(ds.hospitalizations.counts) == [5, 6]


def test_gap_is_rejected_with_range(tmp_path):
    p = write(tmp_path, "date,new_positives\n2020-05-15,3\n2020-05-18,4\n")
    with pytest.raises(DataError, match="2020-05-16"):
        load_counts(p)


def test_duplicate_date_rejected(tmp_path):
    p = write(tmp_path, "date,new_positives\n2020-05-15,3\n2020-05-15,4\n")
    with pytest.raises(DataError, match="duplicate"):
        load_counts(p)


@pytest.mark.parametrize("bad", ["-1", "2.5", "abc", ""])
def test_bad_count_rejected_with_line(tmp_path, bad):
    p = write(tmp_path, f"date,new_positives\n2020-05-15,3\n2020-05-16,{bad}\n")
    with pytest.raises(DataError, match="line 3"):
        load_counts(p)


def test_bad_date_rejected(tmp_path):
    p = write(tmp_path, "date,new_positives\n15/05/2020,3\n")
    with pytest.raises(DataError, match="line 2"):
        load_counts(p)


def test_missing_column_is_config_error(tmp_path):
    p = write(tmp_path, "day,new_positives\n2020-05-15,3\n")
    with pytest.raises(ConfigError, match="date"):
        load_counts(p)


def test_empty_file(tmp_path):
    p = write(tmp_path, "")
    with pytest.raises(DataError):
        load_counts(p)


def test_counts_are_read_only():
    s = CountSeries(date(2020, 1, 1), [1, 2, 3])
    with pytest.raises(ValueError):
        s.counts[0] = 5


def test_negative_counts_rejected():
    with pytest.raises(DataError):
        CountSeries(date(2020, 1, 1), [1, -2])


def test_day_date_roundtrip():
    s = CountSeries(date(2020, 1, 30), [1, 2, 3, 4])
    assert s.date_of(3) == date(2020, 2, 1)
    assert s.day_of(date(2020, 2, 1)) == 3
    assert s.day_of(date(2020, 1, 29)) == 0


def test_align_intersection():
    a = CountSeries(date(2020, 1, 1), [1, 2, 3, 4, 5])
    b = CountSeries(date(2020, 1, 3), [7, 8, 9, 10])
    ds = align(a, b)
    assert ds.start_date == date(2020, 1, 3)
    assert list(ds.infections.counts) == [3, 4, 5]
    assert list(ds.hospitalizations.counts) == [7, 8, 9]


def test_align_disjoint():
    a = CountSeries(date(2020, 1, 1), [1, 2])
    b = CountSeries(date(2020, 2, 1), [1, 2])
    with pytest.raises(DataError, match="overlap"):
        align(a, b)


def test_dataset_mismatched_ranges():
    a = CountSeries(date(2020, 1, 1), [1, 2])
    b = CountSeries(date(2020, 1, 2), [1, 2])
    with pytest.raises(DataError):
        Dataset(a, b)


def test_as_counts():
    s = CountSeries(date(2020, 1, 1), [1, 2])
    assert as_counts(s).dtype == float
    assert list(as_counts([3, 4])) == [3.0, 4.0]


@settings(max_examples=40, deadline=None)
@given(
    counts=st.lists(st.integers(0, 10**6), min_size=1, max_size=40),
    hosp=st.booleans(),
    offset=st.integers(0, 2000),
)
def test_format_load_roundtrip(tmp_path_factory, counts, hosp, offset):
    start = date(2019, 1, 1) + timedelta(days=offset)
    inf = CountSeries(start, counts)
    h = CountSeries(start, [c // 3 for c in counts]) if hosp else None
    ds = Dataset(inf, h)
    p = tmp_path_factory.mktemp("rt") / "c.csv"
    p.write_text(format_counts(ds))
    back = load_counts(p)
    assert back.start_date == start
    assert np.array_equal(back.infections.counts, inf.counts)
    if hosp:
        assert np.array_equal(back.hospitalizations.counts, h.counts)
    else:
        assert back.hospitalizations is None
