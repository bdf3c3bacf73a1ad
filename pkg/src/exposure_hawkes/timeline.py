"""Daily count series, dataset ingestion and validation.

Days are 1-based integer indices on a contiguous calendar grid: day ``t``
of a series starting at ``start_date`` is ``start_date + (t - 1)`` days.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DataError

DEFAULT_COLUMNS = {
    "date": "date",
    "positives": "new_positives",
    "hospitalized": "new_hospitalized",
}


def _frozen_counts(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise DataError("counts must be one-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
            raise DataError("counts must be integers")
    arr = arr.astype(np.int64, copy=True)
    if np.any(arr < 0):
        bad = int(np.flatnonzero(arr < 0)[0])
        raise DataError(f"negative count at position {bad}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CountSeries:
    """Daily new-event counts on a contiguous day grid."""

    start_date: date
    counts: np.ndarray
    label: str = "counts"

    def __post_init__(self):
        object.__setattr__(self, "counts", _frozen_counts(self.counts))

    def __len__(self) -> int:
        return int(self.counts.size)

    @property
    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self) - 1)

    @property
    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self))]

    def date_of(self, day: int) -> date:
        return self.start_date + timedelta(days=day - 1)

    def day_of(self, when: date) -> int:
        """1-based day index of ``when``; may fall outside ``1..len(self)``."""
        return (when - self.start_date).days + 1

    def between(self, first: date, last: date) -> "CountSeries":
        i0 = self.day_of(first) - 1
        i1 = self.day_of(last)
        if i0 < 0 or i1 > len(self) or i1 <= i0:
            raise DataError(f"range {first}..{last} not inside {self.start_date}..{self.end_date}")
        return CountSeries(first, self.counts[i0:i1], self.label)

    def head(self, n_days: int) -> "CountSeries":
        return CountSeries(self.start_date, self.counts[:n_days], self.label)

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class Dataset:
    """Infections, optional hospitalizations, and the population scale ``n``.

    ``n_scale`` only matters when absolute intensities are reported; the
    estimated transition rates are ratios and do not depend on it.
    """

    infections: CountSeries
    hospitalizations: Optional[CountSeries] = None
    n_scale: float = 1.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.n_scale > 0:
            raise DataError(f"n_scale must be positive, got {self.n_scale}")
        h = self.hospitalizations
        if h is not None and (
            h.start_date != self.infections.start_date or len(h) != len(self.infections)
        ):
            raise DataError("infections and hospitalizations cover different date ranges")

    @property
    def T(self) -> int:
        return len(self.infections)

    @property
    def start_date(self) -> date:
        return self.infections.start_date

    def head(self, n_days: int) -> "Dataset":
        h = None if self.hospitalizations is None else self.hospitalizations.head(n_days)
        return Dataset(self.infections.head(n_days), h, self.n_scale)


def _parse_int(text: str, column: str, line: int) -> int:
    s = text.strip()
    try:
        value = int(s)
    except ValueError:
        try:
            f = float(s)
        except ValueError:
            raise DataError(f"line {line}: non-numeric value {text!r} in column {column!r}") from None
        if not np.isfinite(f) or f != int(f):
            raise DataError(f"line {line}: non-integer value {text!r} in column {column!r}") from None
        value = int(f)
    if value < 0:
        raise DataError(f"line {line}: negative count {value} in column {column!r}")
    return value


def _check_contiguous(dates: Sequence[date]) -> None:
    for prev, cur in zip(dates, dates[1:]):
        if cur == prev:
            raise DataError(f"duplicate date {cur.isoformat()}")
        if (cur - prev).days > 1:
            first = prev + timedelta(days=1)
            last = cur - timedelta(days=1)
            span = first.isoformat() if first == last else f"{first.isoformat()}..{last.isoformat()}"
            raise DataError(f"gap in dates: missing {span}")


def load_counts(
    path,
    column_map: Optional[dict] = None,
    n_scale: float = 1.0,
    delimiter: str = ",",
) -> Dataset:
    """Read a daily counts CSV into a :class:`Dataset`.

    Parameters
    ----------
    path : path-like
        Text file with a header row.
    column_map : dict, optional
        Overrides for the keys ``date``, ``positives`` and ``hospitalized``
        (see ``DEFAULT_COLUMNS``). The hospitalized column is optional; it is
        read only when present in the header.
    n_scale : float
        Population scale factor stored on the dataset.
    delimiter : str
        Field separator.

    Raises
    ------
    ConfigError
        A required column is missing.
    DataError
        Bad dates or counts, duplicate dates, or gaps in the date sequence.
    """
    cols = dict(DEFAULT_COLUMNS)
    if column_map:
        cols.update({k: v for k, v in column_map.items() if v})
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        for key in ("date", "positives"):
            if cols[key] not in header:
                raise ConfigError(f"{path}: missing column {cols[key]!r} (found {header})")
        i_date = header.index(cols["date"])
        i_pos = header.index(cols["positives"])
        i_hosp = header.index(cols["hospitalized"]) if cols["hospitalized"] in header else None

        rows = []
        for line, rec in enumerate(reader, start=2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) < len(header):
                raise DataError(f"line {line}: expected {len(header)} fields, got {len(rec)}")
            try:
                d = date.fromisoformat(rec[i_date].strip())
            except ValueError:
                raise DataError(f"line {line}: bad ISO date {rec[i_date]!r}") from None
            pos = _parse_int(rec[i_pos], cols["positives"], line)
            hosp = None if i_hosp is None else _parse_int(rec[i_hosp], cols["hospitalized"], line)
            rows.append((d, pos, hosp))

    if not rows:
        raise DataError(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    _check_contiguous([r[0] for r in rows])
    start = rows[0][0]
    inf = CountSeries(start, [r[1] for r in rows], cols["positives"])
    hosp = None
    if i_hosp is not None:
        hosp = CountSeries(start, [r[2] for r in rows], cols["hospitalized"])
    return Dataset(inf, hosp, n_scale)


def format_counts(ds: Dataset, column_map: Optional[dict] = None) -> str:
    """CSV text for ``ds``; inverse of :func:`load_counts`."""
    cols = dict(DEFAULT_COLUMNS)
    if column_map:
        cols.update({k: v for k, v in column_map.items() if v})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = [cols["date"], cols["positives"]]
    if ds.hospitalizations is not None:
        header.append(cols["hospitalized"])
    w.writerow(header)
    hosp = ds.hospitalizations
    for i, d in enumerate(ds.infections.dates):
        row = [d.isoformat(), int(ds.infections.counts[i])]
        if hosp is not None:
            row.append(int(hosp.counts[i]))
        w.writerow(row)
    return buf.getvalue()


def align(infections: CountSeries, hospitalizations: CountSeries, n_scale: float = 1.0) -> Dataset:
    """Truncate both series to the intersection of their date ranges."""
    if len(infections) == 0 or len(hospitalizations) == 0:
        raise DataError("cannot align an empty series")
    first = max(infections.start_date, hospitalizations.start_date)
    last = min(infections.end_date, hospitalizations.end_date)
    if last < first:
        raise DataError(
            f"date ranges do not overlap: {infections.start_date}..{infections.end_date} "
            f"vs {hospitalizations.start_date}..{hospitalizations.end_date}"
        )
    return Dataset(infections.between(first, last), hospitalizations.between(first, last), n_scale)


def as_counts(x) -> np.ndarray:
    """Float view of a CountSeries or array-like of counts."""
    if isinstance(x, CountSeries):
        return x.counts.astype(float)
    return np.asarray(x, dtype=float)
