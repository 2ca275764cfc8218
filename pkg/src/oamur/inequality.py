"""Evaluate the uncertainty inequalities on a grid state.

Every check returns an :class:`InequalityReport` whose ``lhs >= rhs`` is a
theorem; ``satisfied`` is false only when the slack falls below ``-tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import operators as ops
from .errors import OamurError
from .gridstate import GridSpec, GridState, ModeSpec, default_grid, synthesize

SLACK_TOL = 1e-9
RATIO_FLOOR = 1e-300
NAMES = ("robertson", "schrodinger", "result1", "result2", "result3", "result4")
DEFAULT_ORDERS = (1, 2, 3)
OBSERVABLES = ("x", "y", "px", "py")


@dataclass(frozen=True)
class InequalityReport:
    name: str
    n: int
    lhs: float
    rhs: float
    slack: float
    ratio: float
    satisfied: bool


def make_report(name: str, n: int, lhs: float, rhs: float, tol: float = SLACK_TOL) -> InequalityReport:
    lhs, rhs = float(lhs), float(rhs)
    slack = lhs - rhs
    ratio = math.inf if rhs <= RATIO_FLOOR else lhs / rhs
    return InequalityReport(name, int(n), lhs, rhs, slack, ratio, bool(slack >= -tol))


# ---------------------------------------------------------------------------
# Robertson / Schrodinger on the canonical observables


def _apply_observable(state: GridState, which: str) -> np.ndarray:
    X, Y = state.grid.mesh()
    if which == "x":
        return X * state.amplitudes
    if which == "y":
        return Y * state.amplitudes
    if which == "px":
        return state.hbar * ops._spectral_p(state.amplitudes, state.grid, "x")
    if which == "py":
        return state.hbar * ops._spectral_p(state.amplitudes, state.grid, "y")
    raise OamurError(f"unknown observable {which!r}; choose from {OBSERVABLES}")


def _pair(pair) -> tuple[str, str]:
    if isinstance(pair, str):
        pair = {"x": ("x", "px"), "y": ("y", "py")}.get(pair, pair)
    a, b = pair
    return a, b


def _centered_pair(state: GridState, pair):
    a, b = _pair(pair)
    psi = state.amplitudes
    Apsi, Bpsi = _apply_observable(state, a), _apply_observable(state, b)
    ma = ops.expectation(state, Apsi).real
    mb = ops.expectation(state, Bpsi).real
    dA, dB = Apsi - ma * psi, Bpsi - mb * psi
    var_a = ops.braket(state, dA, dA).real
    var_b = ops.braket(state, dB, dB).real
    cross = ops.braket(state, dA, dB)
    # <dA dB> = C_s + <[A,B]>/2 with C_s real and <[A,B]> imaginary
    cov = cross.real
    comm_abs = 2.0 * abs(cross.imag)
    return var_a, var_b, cov, comm_abs


def check_robertson(state: GridState, pair=("x", "px"), tol: float = SLACK_TOL,
                    strict: bool = True) -> InequalityReport:
    """sigma(A) sigma(B) >= |<[A,B]>| / 2, commutator evaluated on the grid."""
    ops.check_guard(state, strict)
    var_a, var_b, _, comm_abs = _centered_pair(state, pair)
    return make_report("robertson", 0, math.sqrt(var_a * var_b), 0.5 * comm_abs, tol)


def check_schrodinger(state: GridState, pair=("x", "px"), tol: float = SLACK_TOL,
                      strict: bool = True) -> InequalityReport:
    """sigma(A)^2 sigma(B)^2 >= C_s(A,B)^2 + |<[A,B]>|^2 / 4."""
    ops.check_guard(state, strict)
    var_a, var_b, cov, comm_abs = _centered_pair(state, pair)
    return make_report("schrodinger", 0, var_a * var_b, cov * cov + 0.25 * comm_abs ** 2, tol)


def symmetrized_covariance(state: GridState, pair) -> float:
    return _centered_pair(state, pair)[2]


# ---------------------------------------------------------------------------
# angle / angular-momentum relations


class _Cache:
    """Shared intermediate results for one state (L psi, moments)."""

    def __init__(self, state: GridState, nmax: int = 1):
        self.state = state
        self.Lpsi = ops.apply_L(state)
        self.oam = ops.oam_statistics(state, self.Lpsi)
        self.moments = ops.position_moments(state, max(nmax, 1))

    def moment(self, n: int) -> ops.MomentReport:
        if n > len(self.moments):
            self.moments = ops.position_moments(self.state, n)
        return self.moments[n - 1]


def _prepare(state, cache, n, strict) -> _Cache:
    ops._check_order(n)
    if cache is None:
        ops.check_guard(state, strict)
        cache = _Cache(state, n)
    return cache


def check_result1(state: GridState, tol: float = SLACK_TOL, strict: bool = True,
                  cache: _Cache | None = None) -> InequalityReport:
    """sigma(L) sqrt<Z^dag Z> >= (hbar/2) |<Z>|."""
    c = _prepare(state, cache, 1, strict)
    m = c.moment(1)
    lhs = c.oam.sigma_L * math.sqrt(m.radial_power)
    rhs = 0.5 * state.hbar * abs(m.z_moment)
    return make_report("result1", 1, lhs, rhs, tol)


def check_result2(state: GridState, n: int, tol: float = SLACK_TOL, strict: bool = True,
                  cache: _Cache | None = None) -> InequalityReport:
    """sigma(L) >= (n hbar / 2) |mu_n|."""
    c = _prepare(state, cache, n, strict)
    m = c.moment(n)
    return make_report("result2", n, c.oam.sigma_L, 0.5 * n * state.hbar * abs(m.mu_n), tol)


def check_result3(state: GridState, n: int, tol: float = SLACK_TOL, strict: bool = True,
                  cache: _Cache | None = None) -> InequalityReport:
    """<(dL)^2> <(Z^dag Z)^n> >= |C_s(L,x_n) + n hbar <x_n>/2|^2 + |C_s(L,y_n) + n hbar <y_n>/2|^2."""
    c = _prepare(state, cache, n, strict)
    m = c.moment(n)
    cov = ops.covariance_terms(state, n, c.Lpsi, c.oam, m)
    half = 0.5 * n * state.hbar
    rhs = (cov.cs_L_xn + half * cov.mean_xn) ** 2 + (cov.cs_L_yn + half * cov.mean_yn) ** 2
    return make_report("result3", n, c.oam.var_L * m.radial_power, rhs, tol)


def generalized_bound(sigma_g: float, comm_abs: float, phidag_phi: float,
                      phi_phidag: float) -> tuple[float, float]:
    """Sides of sigma(G) >= |<[G,Phi]>| / (sqrt<Phi^dag Phi> + sqrt<Phi Phi^dag>)."""
    denom = math.sqrt(max(phidag_phi, 0.0)) + math.sqrt(max(phi_phidag, 0.0))
    rhs = comm_abs / denom if denom > 0.0 else 0.0
    return sigma_g, rhs


def check_result4(state: GridState, n: int = 1, tol: float = SLACK_TOL, strict: bool = True,
                  cache: _Cache | None = None) -> InequalityReport:
    """Charge/order-parameter relation with G = L and Phi = Z^n on the grid.

    Z is normal, so <Phi^dag Phi> = <Phi Phi^dag> = <(Z^dag Z)^n>.
    """
    c = _prepare(state, cache, n, strict)
    comm = ops.commutator_expectation(state, n, c.Lpsi)
    rp = c.moment(n).radial_power
    lhs, rhs = generalized_bound(c.oam.sigma_L, abs(comm), rp, rp)
    return make_report("result4", n, lhs, rhs, tol)


def check_all(state: GridState, orders: Sequence[int] = DEFAULT_ORDERS, tol: float = SLACK_TOL,
              strict: bool = True) -> list[InequalityReport]:
    """Every inequality: Robertson/Schrodinger for both canonical pairs, the rest per order."""
    ops.check_guard(state, strict)
    reports = []
    for pair in ("x", "y"):
        reports.append(check_robertson(state, pair, tol, strict=False))
        reports.append(check_schrodinger(state, pair, tol, strict=False))
    cache = _Cache(state, max(orders) if orders else 1)
    reports.append(check_result1(state, tol, cache=cache))
    for n in orders:
        reports.append(check_result2(state, n, tol, cache=cache))
    for n in orders:
        reports.append(check_result3(state, n, tol, cache=cache))
    for n in orders:
        reports.append(check_result4(state, n, tol, cache=cache))
    return reports


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class Sweep:
    params: tuple
    reports: tuple
    min_ratio: float

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.reports])


def tightness_sweep(family: Callable[[float], ModeSpec], param_grid: Sequence[float],
                    grid: GridSpec | Callable[[ModeSpec], GridSpec] | None = None,
                    hbar: float = 1.0, tol: float = SLACK_TOL) -> Sweep:
    """Evaluate the first angle/OAM relation across a parametrized mode family.

    ``grid`` may be fixed, a callable of the mode, or None for the mode's
    default grid.  Reports are returned in parameter order.
    """
    reports = []
    for p in param_grid:
        mode = family(p)
        g = grid(mode) if callable(grid) else (grid or default_grid(mode))
        reports.append(check_result1(synthesize(mode, g, hbar), tol))
    ratios = [r.ratio for r in reports]
    return Sweep(tuple(param_grid), tuple(reports), min(ratios) if ratios else math.nan)
