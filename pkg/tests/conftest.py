import math
from functools import lru_cache

import numpy as np
import pytest
from scipy.integrate import quad

from oamur import gridstate as gs


@lru_cache(maxsize=None)
def ring_radial_moment(k: float, r0: float = gs.RING_R0, width: float = gs.RING_WIDTH) -> float:
    """<r^k> for the ring density |f(r)|^2, by 1-D quadrature in r (independent of the grid)."""
    f2 = lambda r: math.exp(-((r - r0) ** 2) / width ** 2)
    hi = r0 + 20 * width
    lo = max(0.0, r0 - 20 * width)
    pts = [r0]
    num = quad(lambda r: f2(r) * r ** (k + 1), lo, hi, points=pts, epsabs=0, epsrel=1e-13, limit=200)[0]
    den = quad(lambda r: f2(r) * r, lo, hi, points=pts, epsabs=0, epsrel=1e-13, limit=200)[0]
    return num / den


def two_ring_mu_abs(dl: int, c1: float, c2: float, **geom) -> float:
    """|mu_dl| for |c1| ring(l1) + |c2| ring(l2) with |l1-l2| = dl (c1^2 + c2^2 = 1)."""
    return abs(c1 * c2) * ring_radial_moment(dl, **geom) / math.sqrt(ring_radial_moment(2 * dl, **geom))


@pytest.fixture(scope="session")
def shipped_states():
    return {name: gs.synthesize(mode) for name, mode in gs.shipped_modes().items()}


@pytest.fixture(scope="session")
def ring_states():
    return {l: gs.synthesize(gs.RingGauss(l)) for l in range(-4, 5)}


@pytest.fixture(scope="session")
def sup01():
    return gs.synthesize(gs.two_ring(0, 1, 0.5))


@pytest.fixture(scope="session")
def random_sample():
    return list(gs.random_states(12345, 25))


def gaussian(grid, width=1.0, hbar=1.0, phase=None):
    def f(X, Y):
        g = np.exp(-(X ** 2 + Y ** 2) / (2 * width ** 2))
        return g if phase is None else g * np.exp(1j * phase(X, Y))
    return gs.GridState.from_function(grid, f, hbar)


def offset_gaussian_bins(x0: float, y0: float, width: float, bins: int) -> np.ndarray:
    """Exact polar-angle bin probabilities for the density of exp(-|r - r0|^2 / (2 width^2))."""
    from scipy.special import erf

    s = width / math.sqrt(2.0)
    d, p0 = math.hypot(x0, y0), math.atan2(y0, x0)

    def pdf(phi):
        t = d / s * math.cos(phi - p0)
        return math.exp(-d * d / (2 * s * s)) / (2 * math.pi) * (
            1 + math.sqrt(math.pi / 2) * t * math.exp(t * t / 2) * (1 + erf(t / math.sqrt(2))))

    e = -np.pi + 2 * np.pi / bins * np.arange(bins + 1)
    return np.array([quad(pdf, e[i], e[i + 1], epsabs=1e-15)[0] for i in range(bins)])


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
