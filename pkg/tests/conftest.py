import sys
from fractions import Fraction

import numpy as np
import pytest


def make_rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def rand_frac(rng, span=9, den=7):
    return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, den + 1)))


def rand_exact(rng, rows, cols=None, span=9, den=7):
    cols = rows if cols is None else cols
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = rand_frac(rng, span, den)
    return out


@pytest.fixture
def rng():
    return make_rng(20240611)


def spectrum_gap(A, B):
    """Largest distance from an eigenvalue of either matrix to the other spectrum."""
    a = np.linalg.eigvals(np.asarray(A, dtype=complex))
    b = np.linalg.eigvals(np.asarray(B, dtype=complex))
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        for line in results[k]:
            terminalreporter.write_line(line)
