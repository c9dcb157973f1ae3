import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qzak.spectral import DispersionSymbols, make_grid, to_coeffs
from qzak.states import PrimalState

settings.register_profile(
    "qzak", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qzak")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240611))


@pytest.fixture
def grid256():
    return make_grid(256)


@pytest.fixture
def syms1(grid256):
    return DispersionSymbols(grid256, 1.0)


def random_state(grid, rng, decay=2.0, zero_mean_nt=True):
    """Smooth random state with real n and nt."""
    w = (1.0 + np.abs(grid.xi)) ** (-decay)
    w[grid.nyquist] = 0.0

    def cplx():
        return w * (rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N))

    def real():
        c = to_coeffs(np.fft.ifft(cplx()).real * grid.N)
        c[grid.nyquist] = 0.0
        return c

    nt = real()
    if zero_mean_nt:
        nt[0] = 0.0
    return PrimalState(cplx(), real(), nt, 0.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = mod.summary_lines() if mod is not None else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
