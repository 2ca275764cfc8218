"""Property suite run by ``oamur selftest``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import fock
from . import operators as ops
from .gridstate import GridState, default_grid, random_states, shipped_modes, synthesize
from .inequality import SLACK_TOL, check_all

COMMUTATOR_TOL = 1e-6
CONVERGENCE_TOL = 1e-8
FOCK_TOL = 1e-8
FOCK_DIMS = (2, 3, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    checked: int
    violations: int
    worst: float
    detail: str
    seconds: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def commutator_ratios(state: GridState, orders=(1, 2, 3)) -> list[float]:
    """``|<[L,Z^n]> - n hbar <Z^n>| / (hbar sqrt<(Z^dag Z)^n>)`` per order."""
    Lpsi = ops.apply_L(state)
    moments = ops.position_moments(state, max(orders))
    out = []
    for n in orders:
        res = abs(ops.commutator_residual(state, n, Lpsi))
        out.append(res / (state.hbar * math.sqrt(moments[n - 1].radial_power)))
    return out


def expectation_summary(state: GridState, orders=(1, 2, 3)) -> dict[str, tuple[float, float]]:
    """Scalar expectations with the scale used to judge their relative change."""
    h = state.hbar
    oam = ops.oam_statistics(state)
    out = {
        "mean_L": (oam.mean_L, h),
        "var_L": (oam.var_L, h * h),
        "sigma_L": (oam.sigma_L, h),
    }
    X, Y = state.grid.mesh()
    rho = state.density() * state.grid.area
    r = math.sqrt(float((rho * (X ** 2 + Y ** 2)).sum()))
    out["mean_x"] = (float((rho * X).sum()), r)
    out["mean_y"] = (float((rho * Y).sum()), r)
    for ax in ("x", "y"):
        p = ops.expectation(state, ops.apply_momentum(state, ax)).real
        out[f"mean_p{ax}"] = (p, h / max(r, 1e-300))
    for m in ops.position_moments(state, max(orders)):
        scale = math.sqrt(m.radial_power)
        out[f"z{m.n}_re"] = (m.z_moment.real, scale)
        out[f"z{m.n}_im"] = (m.z_moment.imag, scale)
        out[f"radial_power_{m.n}"] = (m.radial_power, m.radial_power)
    return out


def relative_change(a: dict, b: dict) -> dict[str, float]:
    out = {}
    for k, (va, scale) in a.items():
        vb = b[k][0]
        out[k] = abs(va - vb) / max(abs(va), abs(vb), scale)
    return out


def grid_convergence(mode, factor: int = 2) -> float:
    """Largest relative change of any expectation when nx, ny are multiplied by ``factor``."""
    g = default_grid(mode)
    coarse = expectation_summary(synthesize(mode, g))
    fine = expectation_summary(synthesize(mode, g.refined(factor)))
    return max(relative_change(coarse, fine).values())


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def run_selftest(seed: int = 0, quick: bool = False, tol: float = SLACK_TOL) -> list[PropertyResult]:
    n_random = 100 if quick else 1000
    n_fock = 100 if quick else 1000
    modes = shipped_modes()
    results = []

    def commutators():
        worst, bad, count = 0.0, 0, 0
        for mode in modes.values():
            for ratio in commutator_ratios(synthesize(mode)):
                count += 1
                worst = max(worst, ratio)
                bad += ratio > COMMUTATOR_TOL
        return count, bad, worst, f"max residual / (hbar sqrt<(Z^dag Z)^n>) = {worst:.3e}"

    def inequalities():
        worst, bad, count = math.inf, 0, 0
        states = [synthesize(m) for m in modes.values()]
        for st in states + list(random_states(seed, n_random)):
            for rep in check_all(st, tol=tol):
                count += 1
                worst = min(worst, rep.slack)
                bad += not rep.satisfied
        return count, bad, worst, f"{n_random} random + {len(states)} shipped states, worst slack {worst:.3e}"

    def fock_run():
        bad, count = 0, 0
        coh = fock.number_phase_report(fock.coherent_state(2.0, 40))
        dev = max(abs(coh.lhs - 2.0), abs(coh.rhs - 2.0 / (2.0 + math.sqrt(5.0))))
        count += 1
        bad += dev > FOCK_TOL
        worst = math.inf
        seeds = np.random.SeedSequence(seed).spawn(len(FOCK_DIMS))
        per = [n_fock // len(FOCK_DIMS) + (i < n_fock % len(FOCK_DIMS)) for i in range(len(FOCK_DIMS))]
        for dim, ss, k in zip(FOCK_DIMS, seeds, per):
            for rep in fock.random_pair_property(ss, dim, k, tol):
                count += 1
                worst = min(worst, rep.slack)
                bad += not rep.satisfied
        return count, bad, worst, f"coherent alpha=2 deviation {dev:.2e}; random worst slack {worst:.3e}"

    def convergence():
        names = ("sup_l0_l1", "lg_p1_l2") if quick else tuple(modes)
        worst = max(grid_convergence(modes[k]) for k in names)
        return len(names), int(worst > CONVERGENCE_TOL), worst, f"max relative change on doubling {worst:.3e}"

    for name, fn in (
        ("commutator_identity", commutators),
        ("inequalities", inequalities),
        ("fock_number_phase", fock_run),
        ("grid_convergence", convergence),
    ):
        (count, bad, worst, detail), secs = _timed(fn)
        results.append(PropertyResult(name, count, int(bad), float(worst), detail, secs))
    return results
