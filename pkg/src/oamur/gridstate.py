"""Planar wavefunctions sampled on a centered uniform grid.

Amplitude arrays are indexed ``[iy, ix]`` (y is the outer, slow index) and
sample the points ``x_j = (j - nx/2) dx`` with ``dx = 2L/nx``, so the origin is
always a grid point and the grid covers ``[-L, L)`` along each axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Sequence, Union

import numpy as np
from scipy import fft as sfft
from scipy.special import eval_genlaguerre

from .errors import (
    EmptySuperposition,
    FeatureExceedsGrid,
    GridMismatch,
    OamurError,
    ZeroNorm,
)

NORM_TOL = 1e-12
DECAY_TOL = 1e-8
DEFAULT_N = 256
EXTENT_FACTOR = 12.0

# narrow-ring geometry used by the scenarios: width = r0 / 20
RING_R0 = 5.0
RING_WIDTH = RING_R0 / 20.0


@dataclass(frozen=True)
class GridSpec:
    nx: int = DEFAULT_N
    ny: int = DEFAULT_N
    half_extent: float = 12.0

    def __post_init__(self):
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 16 or v % 2:
                raise OamurError(f"{name} must be an even integer >= 16, got {v!r}")
            object.__setattr__(self, name, int(v))
        L = float(self.half_extent)
        if not (L > 0.0 and math.isfinite(L)):
            raise OamurError(f"half_extent must be positive and finite, got {self.half_extent!r}")
        object.__setattr__(self, "half_extent", L)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_extent / self.nx

    @property
    def dy(self) -> float:
        return 2.0 * self.half_extent / self.ny

    @property
    def area(self) -> float:
        """Quadrature weight of one sample, ``dx*dy``."""
        return self.dx * self.dy

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def x(self) -> np.ndarray:
        return _axis(self.nx, self.half_extent)

    @property
    def y(self) -> np.ndarray:
        return _axis(self.ny, self.half_extent)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Broadcastable ``(X, Y)`` with shapes ``(1, nx)`` and ``(ny, 1)``."""
        return self.x[None, :], self.y[:, None]

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.nx * factor, self.ny * factor, self.half_extent)


@lru_cache(maxsize=64)
def _axis(n: int, half_extent: float) -> np.ndarray:
    d = 2.0 * half_extent / n
    a = (np.arange(n) - n // 2) * d
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridState:
    """Immutable complex field on a :class:`GridSpec`."""

    grid: GridSpec
    amplitudes: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128, order="C", copy=True)
        if a.shape != self.grid.shape:
            raise GridMismatch(f"amplitudes shape {a.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(a)):
            raise OamurError("amplitudes contain non-finite values")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        hbar = float(self.hbar)
        if not (hbar > 0.0 and math.isfinite(hbar)):
            raise OamurError(f"hbar must be positive, got {self.hbar!r}")
        object.__setattr__(self, "hbar", hbar)

    @classmethod
    def from_function(cls, grid: GridSpec, func: Callable, hbar: float = 1.0,
                      normalized: bool = True) -> "GridState":
        """Sample ``func(X, Y)`` on the grid (X, Y broadcastable)."""
        X, Y = grid.mesh()
        vals = np.broadcast_to(func(X, Y), grid.shape)
        st = cls(grid, vals, hbar)
        return normalize(st) if normalized else st

    def density(self) -> np.ndarray:
        return self.amplitudes.real ** 2 + self.amplitudes.imag ** 2

    def norm(self) -> float:
        return math.sqrt(float(self.density().sum()) * self.grid.area)

    def decay_ratio(self) -> float:
        """Max modulus on the outermost two rows/columns over the global max."""
        a = np.abs(self.amplitudes)
        peak = a.max()
        if peak == 0.0:
            return math.inf
        edge = max(a[:2, :].max(), a[-2:, :].max(), a[:, :2].max(), a[:, -2:].max())
        return float(edge / peak)

    @property
    def decay_ok(self) -> bool:
        return self.decay_ratio() <= DECAY_TOL

    def replace(self, amplitudes) -> "GridState":
        return GridState(self.grid, amplitudes, self.hbar)


# ---------------------------------------------------------------------------
# mode recipes


@dataclass(frozen=True)
class LaguerreGauss:
    p: int = 0
    l: int = 0
    waist: float = 1.0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 0:
            raise OamurError("LaguerreGauss.p must be a non-negative integer")
        if int(self.l) != self.l:
            raise OamurError("LaguerreGauss.l must be an integer")
        if not self.waist > 0:
            raise OamurError("LaguerreGauss.waist must be positive")


@dataclass(frozen=True)
class RingGauss:
    l: int = 0
    r0: float = RING_R0
    width: float = RING_WIDTH

    def __post_init__(self):
        if int(self.l) != self.l:
            raise OamurError("RingGauss.l must be an integer")
        if not self.r0 >= 0:
            raise OamurError("RingGauss.r0 must be non-negative")
        if not self.width > 0:
            raise OamurError("RingGauss.width must be positive")


@dataclass(frozen=True)
class OffsetGauss:
    x0: float = 0.0
    y0: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if not self.width > 0:
            raise OamurError("OffsetGauss.width must be positive")


@dataclass(frozen=True)
class Superposition:
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((complex(w), m) for w, m in self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise EmptySuperposition("superposition needs at least one term")
        if all(w == 0 for w, _ in terms):
            raise EmptySuperposition("all superposition weights are zero")


ModeSpec = Union[LaguerreGauss, RingGauss, OffsetGauss, Superposition]


def two_ring(l1: int, l2: int, weight: float, r0: float = RING_R0,
             width: float = RING_WIDTH) -> Superposition:
    """``sqrt(weight)*ring(l1) + sqrt(1-weight)*ring(l2)`` sharing one radial profile."""
    if not 0.0 <= weight <= 1.0:
        raise OamurError("weight must lie in [0, 1]")
    return Superposition((
        (math.sqrt(weight), RingGauss(l1, r0, width)),
        (math.sqrt(1.0 - weight), RingGauss(l2, r0, width)),
    ))


def characteristic_extent(mode: ModeSpec) -> float:
    """Half extent giving 12 characteristic widths of margin around the mode."""
    if isinstance(mode, RingGauss):
        return mode.r0 + EXTENT_FACTOR * mode.width
    if isinstance(mode, OffsetGauss):
        return math.hypot(mode.x0, mode.y0) + EXTENT_FACTOR * mode.width
    if isinstance(mode, LaguerreGauss):
        # amplitude envelope exp(-r^2/waist^2) has Gaussian sigma waist/sqrt(2)
        return EXTENT_FACTOR * mode.waist / math.sqrt(2.0)
    if isinstance(mode, Superposition):
        return max(characteristic_extent(m) for w, m in mode.terms if w != 0)
    raise TypeError(f"unknown mode {mode!r}")


def default_grid(mode: ModeSpec, n: int = DEFAULT_N) -> GridSpec:
    return GridSpec(n, n, characteristic_extent(mode))


def mode_to_dict(mode: ModeSpec) -> dict:
    if isinstance(mode, Superposition):
        return {
            "kind": "superposition",
            "terms": [
                {"weight": {"re": w.real, "im": w.imag}, "mode": mode_to_dict(m)}
                for w, m in mode.terms
            ],
        }
    kind = {LaguerreGauss: "laguerre_gauss", RingGauss: "ring_gauss", OffsetGauss: "offset_gauss"}
    d = {"kind": kind[type(mode)]}
    d.update(mode.__dict__)
    return d


def _raw_field(mode: ModeSpec, grid: GridSpec) -> np.ndarray:
    X, Y = grid.mesh()
    if isinstance(mode, RingGauss):
        if mode.r0 + 5.0 * mode.width >= grid.half_extent:
            raise FeatureExceedsGrid(
                f"ring r0 + 5*width = {mode.r0 + 5 * mode.width:g} does not fit "
                f"inside half extent {grid.half_extent:g}"
            )
        r = np.hypot(X, Y)
        radial = np.exp(-((r - mode.r0) ** 2) / (2.0 * mode.width ** 2))
        if mode.l == 0:
            return radial.astype(np.complex128)
        return radial * np.exp(1j * mode.l * np.arctan2(Y, X))
    if isinstance(mode, OffsetGauss):
        g = np.exp(-((X - mode.x0) ** 2 + (Y - mode.y0) ** 2) / (2.0 * mode.width ** 2))
        return g.astype(np.complex128)
    if isinstance(mode, LaguerreGauss):
        w = mode.waist
        al = abs(int(mode.l))
        r2 = X ** 2 + Y ** 2
        sgn = 1.0 if mode.l >= 0 else -1.0
        # (sqrt2 r / w)^|l| e^{i l phi} written as a polynomial in x +/- iy
        vortex = ((math.sqrt(2.0) / w) * (X + 1j * sgn * Y)) ** al
        radial = eval_genlaguerre(int(mode.p), al, 2.0 * r2 / w ** 2) * np.exp(-r2 / w ** 2)
        return vortex * radial
    if isinstance(mode, Superposition):
        total = np.zeros(grid.shape, dtype=np.complex128)
        for weight, sub in mode.terms:
            if weight == 0:
                continue
            f = _raw_field(sub, grid)
            nrm = math.sqrt(float(np.sum(f.real ** 2 + f.imag ** 2)) * grid.area)
            if nrm == 0.0:
                raise ZeroNorm("superposition component vanishes on the grid")
            total += (weight / nrm) * f
        return total
    raise TypeError(f"unknown mode {mode!r}")


def synthesize(mode: ModeSpec, grid: GridSpec | None = None, hbar: float = 1.0) -> GridState:
    """Sample ``mode`` on ``grid`` and normalize.

    Superposition weights multiply unit-normalized components; the sum is
    renormalized afterwards.  Raises :class:`FeatureExceedsGrid` when the
    result would violate the boundary-decay guard.
    """
    if grid is None:
        grid = default_grid(mode)
    state = normalize(GridState(grid, _raw_field(mode, grid), hbar))
    ratio = state.decay_ratio()
    if ratio > DECAY_TOL:
        raise FeatureExceedsGrid(
            f"boundary/peak amplitude ratio {ratio:.3g} exceeds {DECAY_TOL:g}; enlarge the grid"
        )
    return state


def normalize(state: GridState) -> GridState:
    nrm = state.norm()
    if nrm == 0.0 or not math.isfinite(nrm):
        raise ZeroNorm("cannot normalize a state of zero norm")
    if nrm == 1.0:
        return state
    return state.replace(state.amplitudes / nrm)


def _check_same(states: Sequence[GridState]) -> None:
    g, h = states[0].grid, states[0].hbar
    for s in states[1:]:
        if s.grid != g:
            raise GridMismatch(f"grid {s.grid} differs from {g}")
        if s.hbar != h:
            raise GridMismatch(f"hbar {s.hbar} differs from {h}")


def superpose(states: Sequence[GridState], weights: Sequence[complex]) -> GridState:
    if not states:
        raise EmptySuperposition("no states to superpose")
    if len(states) != len(weights):
        raise OamurError("states and weights differ in length")
    _check_same(states)
    total = np.zeros(states[0].grid.shape, dtype=np.complex128)
    for s, w in zip(states, weights):
        total += complex(w) * s.amplitudes
    return normalize(states[0].replace(total))


def overlap(a: GridState, b: GridState) -> complex:
    """Inner product <a|b>, antilinear in the first argument."""
    _check_same([a, b])
    return complex(np.vdot(a.amplitudes, b.amplitudes)) * a.grid.area


def rotate_quarter(state: GridState, k: int = 1) -> GridState:
    """Rotate the state counterclockwise by ``k`` quarter turns.

    Exact index permutation, ``psi'(x, y) = psi(y, -x)`` per turn; the
    sample at ``+L`` that would be needed is supplied by periodic wrap.
    """
    g = state.grid
    if g.nx != g.ny:
        raise GridMismatch("quarter-turn rotation needs a square grid")
    n = g.nx
    idx = (-np.arange(n)) % n
    a = state.amplitudes
    for _ in range(k % 4):
        a = a[idx, :].T
    return state.replace(a)


# ---------------------------------------------------------------------------
# seeded random states

RANDOM_GRID = GridSpec(128, 128, 12.0)


def random_state(seed, grid: GridSpec = RANDOM_GRID, hbar: float = 1.0, *,
                 band: float = 1.5, envelope: float = 1.5, max_offset: float = 1.0) -> GridState:
    """Band-limited complex Gaussian random field times a Gaussian envelope.

    White complex noise is filtered by ``exp(-k^2 / (2 band^2))`` and the
    result multiplied by an isotropic Gaussian of width ``envelope`` centred
    at a random offset within ``max_offset`` of the origin.
    """
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    kx = 2.0 * np.pi * np.fft.fftfreq(grid.nx, grid.dx)
    ky = 2.0 * np.pi * np.fft.fftfreq(grid.ny, grid.dy)
    filt = np.exp(-(kx[None, :] ** 2 + ky[:, None] ** 2) / (2.0 * band ** 2))
    smooth = sfft.ifft2(sfft.fft2(noise) * filt)
    cx, cy = rng.uniform(-max_offset, max_offset, size=2)
    X, Y = grid.mesh()
    env = np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / (2.0 * envelope ** 2))
    state = normalize(GridState(grid, smooth * env, hbar))
    if not state.decay_ok:
        raise FeatureExceedsGrid("random state too wide for its grid")
    return state


def random_states(seed: int, count: int, grid: GridSpec = RANDOM_GRID,
                  hbar: float = 1.0) -> Iterator[GridState]:
    for child in np.random.SeedSequence(seed).spawn(count):
        yield random_state(child, grid, hbar)


# ---------------------------------------------------------------------------
# the fixed catalogue of modes exercised by the checks


def shipped_modes() -> dict[str, ModeSpec]:
    modes: dict[str, ModeSpec] = {}
    for l in range(-3, 4):
        modes[f"ring_l{l}"] = RingGauss(l)
    modes["lg_p0_l1"] = LaguerreGauss(0, 1, 1.0)
    modes["lg_p1_l2"] = LaguerreGauss(1, 2, 1.0)
    modes["lg_p2_lm1"] = LaguerreGauss(2, -1, 1.0)
    modes["gauss_origin"] = OffsetGauss(0.0, 0.0, 1.0)
    modes["gauss_offset"] = OffsetGauss(1.5, -0.5, 1.0)
    modes["sup_l0_l1"] = two_ring(0, 1, 0.5)
    modes["sup_l0_l2"] = two_ring(0, 2, 0.5)
    modes["sup_l0_l3"] = two_ring(0, 3, 0.5)
    modes["sup_l1_lm2_w30"] = two_ring(1, -2, 0.3)
    modes["sup_lg_gauss"] = Superposition((
        (1.0, LaguerreGauss(0, 2, 1.5)),
        (0.6 - 0.3j, OffsetGauss(0.8, 0.4, 1.0)),
        (0.4j, LaguerreGauss(1, -1, 1.2)),
    ))
    return modes
