import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exposure_hawkes import PairCounts, simulate  # noqa: E402
from exposure_hawkes.hawkes_sim import stationary_critical  # noqa: E402

TOY_T = 10
TOY_D = 3
TOY_EXPOSURE = np.array([5.0, 3.0, 8.0, 2.0, 6.0, 4.0, 7.0, 1.0, 9.0, 3.0])
# (offspring day, parent day, count)
TOY_RECORDS = [
    (2, 1, 1),
    (3, 1, 2),
    (4, 3, 3),
    (5, 3, 1),
    (5, 4, 1),
    (6, 4, 2),
    (6, 5, 1),
    (7, 5, 2),
    (8, 7, 4),
    (9, 6, 1),
    (9, 7, 2),
    (10, 9, 3),
]


@pytest.fixture
def toy():
    pairs = PairCounts.from_records(TOY_RECORDS, TOY_T, TOY_D)
    as_dict = {(u, v): float(n) for u, v, n in TOY_RECORDS}
    return TOY_EXPOSURE.copy(), pairs, as_dict


@pytest.fixture(scope="session")
def critical_truth():
    return stationary_critical()


@pytest.fixture(scope="session")
def critical_sim(critical_truth):
    return simulate(critical_truth, seed=1)
