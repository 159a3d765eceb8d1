import sys

import numpy as np
import pytest

from quatdet.qmatrix import QMatrix, matmul, random_qmatrix
from quatdet.quaternion import Quaternion

I_ = Quaternion(0, 1)
J_ = Quaternion(0, 0, 1)
K_ = Quaternion(0, 0, 0, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y), 1e-300)


def random_complex_matrix(rng, n):
    return QMatrix.from_complex(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(rng, n):
    g = random_qmatrix(rng, n)
    return QMatrix((g.data + g.H.data) / 2)


def rank_deficient(rng, n, rank=None):
    """Product of n x r and r x n factors; rank r < n."""
    r = n - 1 if rank is None else rank
    return matmul(random_qmatrix(rng, n, r), random_qmatrix(rng, r, n))


def upper_triangular(rng, n):
    d = rng.standard_normal((n, n, 4))
    d[np.tril_indices(n, -1)] = 0.0
    return QMatrix(d)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.VERDICTS):
        terminalreporter.write_line(module.VERDICTS[n])
