"""Parent/offspring pair counts on the (offspring day, lag) grid."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

PAIR_COLUMNS = ("offspring_day", "parent_day", "count")


@dataclass(frozen=True)
class PairCounts:
    """Counts of (offspring day ``u``, parent day ``v``) pairs.

    Stored densely as ``counts[u - 1, l - 1]`` with lag ``l = u - v`` in
    ``1..D``. Entries are integers for simulated links and non-negative reals
    for reconstructed responsibilities. ``skipped_days`` lists offspring days
    whose mass could not be attributed (no candidate parent carried weight).
    """

    counts: np.ndarray
    skipped_days: tuple = field(default=(), compare=False)

    def __post_init__(self):
        arr = np.array(self.counts, dtype=float)
        if arr.ndim != 2:
            raise DataError("pair counts must be a (days, lags) matrix")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise DataError("pair counts must be finite and non-negative")
        T, D = arr.shape
        for l in range(1, D + 1):
            if np.any(arr[: min(l, T), l - 1] != 0):
                raise DataError(f"pair with lag {l} has a parent day before day 1")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @property
    def T(self) -> int:
        return self.counts.shape[0]

    @property
    def D(self) -> int:
        return self.counts.shape[1]

    @classmethod
    def zeros(cls, T: int, D: int) -> "PairCounts":
        return cls(np.zeros((T, D)))

    @classmethod
    def from_records(cls, records, T: int, D: int) -> "PairCounts":
        arr = np.zeros((T, D))
        for u, v, n in records:
            u, v = int(u), int(v)
            if not 1 <= v < u <= T:
                raise DataError(f"pair (u={u}, v={v}) violates 1 <= v < u <= {T}")
            if u - v > D:
                raise DataError(f"pair (u={u}, v={v}) has lag {u - v} > D={D}")
            if n < 0:
                raise DataError(f"negative pair count at (u={u}, v={v})")
            arr[u - 1, u - v - 1] += n
        return cls(arr)

    def records(self):
        """Non-zero entries as ``(u, v, count)`` sorted by ``u`` then ``v``."""
        out = []
        for iu, il in zip(*np.nonzero(self.counts)):
            u = int(iu) + 1
            out.append((u, u - (int(il) + 1), float(self.counts[iu, il])))
        out.sort(key=lambda r: (r[0], r[1]))
        return out

    def total(self) -> float:
        return float(self.counts.sum())

    def per_offspring_day(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def head(self, n_days: int) -> "PairCounts":
        return PairCounts(self.counts[:n_days])

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(PAIR_COLUMNS)
        for u, v, n in self.records():
            w.writerow([u, v, int(n) if float(n).is_integer() else repr(n)])
        return buf.getvalue()

    @classmethod
    def read_csv(cls, path, T: int, D: int) -> "PairCounts":
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            missing = [c for c in PAIR_COLUMNS if c not in (reader.fieldnames or [])]
            if missing:
                raise DataError(f"{path}: missing columns {missing}")
            recs = []
            for line, row in enumerate(reader, start=2):
                try:
                    recs.append((int(row["offspring_day"]), int(row["parent_day"]), float(row["count"])))
                except ValueError:
                    raise DataError(f"{path} line {line}: non-numeric pair record") from None
        return cls.from_records(recs, T, D)
