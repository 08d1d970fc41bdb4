import numpy as np
import pytest

from fqsp.fourier import FourierSeries, sup_norm


def random_series(rng, half_order, peak=0.99):
    """Random complex series rescaled so that max |s| = peak."""
    n = 2 * half_order + 1
    s = FourierSeries(half_order, rng.normal(size=n) + 1j * rng.normal(size=n))
    return s.scaled(peak / sup_norm(s))


def direct_sum(coeffs, x):
    """Term-by-term evaluation, independent of the Horner implementation."""
    coeffs = np.asarray(coeffs, dtype=complex)
    h = (coeffs.size - 1) // 2
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    for j, c in enumerate(coeffs):
        out = out + c * np.exp(1j * (j - h) * x)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Record one verdict line per acceptance criterion; echoed in the summary."""

    def log(criterion: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
