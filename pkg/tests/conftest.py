from functools import reduce
from pathlib import Path

import numpy as np
import pytest

from qcontext.geometry import build_polar_space, doily, doily_grids, quadric

DATA = Path(__file__).parent / "data"

# Dense-matrix oracles: independent of the normal-form algebra under test.
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense(label: str) -> np.ndarray:
    """Matrix of a label such as '-XYZ' built letter by letter with kron."""
    sign = -1 if label.startswith("-") else 1
    letters = label.lstrip("+-")
    return sign * reduce(np.kron, (PAULI_MATRICES[ch] for ch in letters))


def dense_sign(labels) -> int:
    prod = reduce(np.matmul, (dense(lb) for lb in labels))
    eye = np.eye(prod.shape[0])
    if np.allclose(prod, eye):
        return 1
    if np.allclose(prod, -eye):
        return -1
    raise AssertionError(f"{labels} do not multiply to +-I")


def brute_force_P(config) -> int:
    """Max satisfied contexts by enumerating every +-1 assignment (small configs only)."""
    pts = list(config.points)
    idx = {p: i for i, p in enumerate(pts)}
    k = len(pts)
    assert k <= 16
    xs = (np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1
    vals = 1 - 2 * xs
    sat = np.zeros(1 << k, dtype=int)
    for c in config.contexts:
        prod = np.prod(vals[:, [idx[p] for p in c.points]], axis=1)
        sat += prod == c.sign
    return int(sat.max())


@pytest.fixture(scope="session")
def w32():
    return doily()


@pytest.fixture(scope="session")
def w52():
    return build_polar_space(3)


@pytest.fixture(scope="session")
def w52_planes():
    return build_polar_space(3, 2)


@pytest.fixture(scope="session")
def grids():
    return doily_grids()


@pytest.fixture(scope="session")
def q52():
    return quadric(3)


@pytest.fixture(scope="session")
def recorded_counts():
    return (DATA / "doily_counts.csv").read_text()


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].removeprefix("test_")
    if report.when == "call" or report.failed:
        _ACCEPTANCE[name] = "FAIL" if report.failed else ("SKIP" if report.skipped else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{outcome}  {name}")
