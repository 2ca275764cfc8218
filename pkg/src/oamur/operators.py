"""Observables on grid states: momentum, orbital angular momentum, complex moments.

Derivatives are spectral: ``p psi = hbar * IFFT(k * FFT(psi))`` along one axis,
with ``k = 2 pi m / (2L)`` and the Nyquist wavenumber set to zero so that the
discrete momentum is exactly self-adjoint.  Position operators act by
multiplication at the sample points.  A fourth-order finite-difference path
is kept alongside as an independent oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as sfft
from scipy import ndimage

from . import _kernels
from .errors import DecayGuardViolated, DecayGuardWarning, MomentOrderTooLarge, OamurError
from .gridstate import GridSpec, GridState

MAX_MOMENT_ORDER = 8
# |sum rho z^n| below this fraction of sum rho |z|^n is indistinguishable from
# accumulated rounding and is reported as an exact zero
ROUNDOFF_FLOOR = 1e-13
VAR_CLAMP = 1e-12


@dataclass(frozen=True)
class OamReport:
    mean_L: float
    var_L: float
    sigma_L: float


@dataclass(frozen=True)
class MomentReport:
    n: int
    z_moment: complex
    radial_power: float
    mu_n: complex


@dataclass(frozen=True)
class CovarianceReport:
    n: int
    cs_L_xn: float
    cs_L_yn: float
    mean_xn: float
    mean_yn: float


def check_guard(state: GridState, strict: bool = False) -> bool:
    """Return whether the decay guard holds; warn (or raise if ``strict``) otherwise."""
    if state.decay_ok:
        return True
    msg = f"decay guard violated: boundary/peak ratio {state.decay_ratio():.3g}"
    if strict:
        raise DecayGuardViolated(msg)
    warnings.warn(msg, DecayGuardWarning, stacklevel=3)
    return False


def _check_order(n) -> int:
    if int(n) != n or n < 1:
        raise OamurError(f"moment order must be a positive integer, got {n!r}")
    if n > MAX_MOMENT_ORDER:
        raise MomentOrderTooLarge(f"moment order {n} exceeds cap {MAX_MOMENT_ORDER}")
    return int(n)


@lru_cache(maxsize=64)
def wavenumbers(n: int, d: float) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(n, d)
    k[n // 2] = 0.0
    k.setflags(write=False)
    return k


def _spectral_p(field: np.ndarray, grid: GridSpec, axis: str) -> np.ndarray:
    """``-i d/dx`` (or ``d/dy``) of ``field`` without the hbar factor."""
    if axis == "x":
        k = wavenumbers(grid.nx, grid.dx)
        return sfft.ifft(k[None, :] * sfft.fft(field, axis=1), axis=1)
    if axis == "y":
        k = wavenumbers(grid.ny, grid.dy)
        return sfft.ifft(k[:, None] * sfft.fft(field, axis=0), axis=0)
    raise OamurError(f"axis must be 'x' or 'y', got {axis!r}")


def _L_field(field: np.ndarray, grid: GridSpec, hbar: float) -> np.ndarray:
    X, Y = grid.mesh()
    return hbar * (X * _spectral_p(field, grid, "y") - Y * _spectral_p(field, grid, "x"))


def apply_momentum(state: GridState, axis: str) -> np.ndarray:
    """Unnormalized field ``p_axis psi``."""
    check_guard(state)
    return state.hbar * _spectral_p(state.amplitudes, state.grid, axis)


def apply_L(state: GridState) -> np.ndarray:
    """Unnormalized field ``(x p_y - y p_x) psi``."""
    check_guard(state)
    return _L_field(state.amplitudes, state.grid, state.hbar)


def braket(state: GridState, a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b> for two fields on the grid of ``state``."""
    return complex(np.vdot(a, b)) * state.grid.area


def expectation(state: GridState, field: np.ndarray) -> complex:
    """<psi|field> where ``field`` is some operator already applied to psi."""
    return braket(state, state.amplitudes, field)


def z_power(grid: GridSpec, n: int) -> np.ndarray:
    X, Y = grid.mesh()
    return (X + 1j * Y) ** n


def oam_statistics(state: GridState, Lpsi: np.ndarray | None = None) -> OamReport:
    """Mean and spread of L.

    The variance is evaluated as ``||L psi - <L> psi||^2``, which equals
    ``||L psi||^2 - <L>^2`` for normalized psi but keeps full relative
    precision on near-eigenstates.
    """
    if Lpsi is None:
        Lpsi = apply_L(state)
    psi = state.amplitudes
    norm2 = float(np.vdot(psi, psi).real) * state.grid.area
    mean = expectation(state, Lpsi).real / norm2
    dev = Lpsi - mean * psi
    var = float(np.vdot(dev, dev).real) * state.grid.area / norm2
    if var < 0.0:
        if var < -VAR_CLAMP:
            raise OamurError(f"negative variance {var:g}")
        var = 0.0
    return OamReport(mean_L=mean, var_L=var, sigma_L=math.sqrt(var))


def position_moments(state: GridState, nmax: int) -> list[MomentReport]:
    """Moment reports for n = 1..nmax from one pass over the density."""
    nmax = _check_order(nmax)
    check_guard(state)
    g = state.grid
    rho = state.density()
    mass = float(rho.sum())
    zsum, r2sum, r1sum = _kernels.moment_sums(rho, g.x, g.y, nmax)
    out = []
    for k in range(nmax):
        z = complex(zsum[k]) / mass
        if abs(z) <= ROUNDOFF_FLOOR * float(r1sum[k]) / mass:
            z = 0j
        rp = float(r2sum[k]) / mass
        mu = z / math.sqrt(rp) if rp > 0.0 else 0j
        out.append(MomentReport(n=k + 1, z_moment=z, radial_power=rp, mu_n=mu))
    return out


def position_moment(state: GridState, n: int) -> MomentReport:
    return position_moments(state, _check_order(n))[-1]


def covariance_terms(state: GridState, n: int, Lpsi: np.ndarray | None = None,
                     oam: OamReport | None = None,
                     moment: MomentReport | None = None) -> CovarianceReport:
    """Symmetrized covariances of L with ``x_n = Re Z^n`` and ``y_n = Im Z^n``.

    ``C_s(L, A) = Re<L psi|A psi> - <L><A>`` for real diagonal ``A``.
    """
    n = _check_order(n)
    if Lpsi is None:
        Lpsi = apply_L(state)
    if oam is None:
        oam = oam_statistics(state, Lpsi)
    if moment is None:
        moment = position_moment(state, n)
    zn = z_power(state.grid, n)
    psi = state.amplitudes
    mean_x, mean_y = moment.z_moment.real, moment.z_moment.imag
    cx = braket(state, Lpsi, zn.real * psi).real - oam.mean_L * mean_x
    cy = braket(state, Lpsi, zn.imag * psi).real - oam.mean_L * mean_y
    return CovarianceReport(n=n, cs_L_xn=cx, cs_L_yn=cy, mean_xn=mean_x, mean_yn=mean_y)


def commutator_expectation(state: GridState, n: int, Lpsi: np.ndarray | None = None) -> complex:
    """<psi|(L Z^n - Z^n L)|psi> by explicit operator composition."""
    n = _check_order(n)
    check_guard(state)
    if Lpsi is None:
        Lpsi = apply_L(state)
    zn = z_power(state.grid, n)
    psi = state.amplitudes
    lz = _L_field(zn * psi, state.grid, state.hbar)
    return expectation(state, lz - zn * Lpsi)


def commutator_residual(state: GridState, n: int, Lpsi: np.ndarray | None = None) -> complex:
    """``<[L, Z^n]> - n hbar <Z^n>``; pure discretization error for a valid state."""
    comm = commutator_expectation(state, n, Lpsi)
    zmean = expectation(state, z_power(state.grid, n) * state.amplitudes)
    return comm - n * state.hbar * zmean


HIST_UPSAMPLE = 2
HIST_RADIAL_NODES = 5   # Gauss-Legendre nodes per radial panel of width dx
HIST_ANGULAR_NODES = 256  # Gauss-Legendre nodes around the circle (at least 4 per bin)


def _upsample(field: np.ndarray, factor: int) -> np.ndarray:
    """Band-limited interpolation onto a grid ``factor`` times finer (FFT zero padding)."""
    ny, nx = field.shape
    spec = sfft.fftshift(sfft.fft2(field))
    out = np.zeros((ny * factor, nx * factor), dtype=np.complex128)
    oy, ox = (ny * factor - ny) // 2, (nx * factor - nx) // 2
    out[oy:oy + ny, ox:ox + nx] = spec
    return sfft.ifft2(sfft.ifftshift(out)) * (factor * factor)


def angular_histogram(state: GridState, bins: int = 64) -> np.ndarray:
    """Probability of the polar angle falling in ``bins`` equal bins on [-pi, pi).

    The density is interpolated onto polar Gauss-Legendre nodes (FFT
    upsampling of psi, then a quintic spline of |psi|^2) and ``rho r dr dphi``
    is integrated per bin.  Binning Cartesian cell centres instead carries
    O(1/cells-per-bin) noise, and Fourier harmonics of the angle are badly
    resolved wherever the density does not vanish at the origin.
    """
    if int(bins) != bins or bins < 4:
        raise OamurError("bins must be an integer >= 4")
    bins = int(bins)
    g = state.grid
    up = HIST_UPSAMPLE
    rho = np.abs(_upsample(state.amplitudes, up)) ** 2
    coef = ndimage.spline_filter(rho, order=5, mode="grid-wrap")

    R = g.half_extent * math.sqrt(2.0)
    step = min(g.dx, g.dy)
    edges = np.linspace(0.0, R, int(math.ceil(R / step)) + 1)
    xr, wr = np.polynomial.legendre.leggauss(HIST_RADIAL_NODES)
    h = np.diff(edges)[:, None]
    r = (edges[:-1, None] + 0.5 * (xr + 1.0) * h).ravel()
    w_r = (0.5 * wr * h).ravel() * r

    width = 2.0 * np.pi / bins
    qa = max(4, -(-HIST_ANGULAR_NODES // bins))
    xa, wa = np.polynomial.legendre.leggauss(qa)
    phi = (-np.pi + width * np.arange(bins)[:, None] + 0.5 * (xa + 1.0) * width).ravel()
    w_phi = np.tile(0.5 * wa * width, bins)

    X = np.outer(r, np.cos(phi))
    Y = np.outer(r, np.sin(phi))
    coords = [((Y + g.half_extent) * (up / g.dy)).ravel(), ((X + g.half_extent) * (up / g.dx)).ravel()]
    vals = ndimage.map_coordinates(coef, coords, order=5, mode="grid-wrap", prefilter=False)
    vals = vals.reshape(X.shape)
    # outside the box the periodic spline would wrap around; nothing lives there
    vals[(np.abs(X) > g.half_extent) | (np.abs(Y) > g.half_extent)] = 0.0
    p = (w_r @ vals * w_phi).reshape(bins, qa).sum(axis=1)
    return p / p.sum()


def bin_centers(bins: int) -> np.ndarray:
    return -np.pi + (2.0 * np.pi / bins) * (np.arange(bins) + 0.5)


def momentum_space(state: GridState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Continuum-normalized momentum amplitudes on the (shifted) wavenumber grid.

    ``phi(k) = dx dy / (2 pi) * sum psi exp(-i k.r)`` so that
    ``sum |phi|^2 dkx dky == sum |psi|^2 dx dy`` (Parseval).
    """
    g = state.grid
    kx = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(g.nx, g.dx))
    ky = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(g.ny, g.dy))
    phi = np.fft.fftshift(sfft.fft2(state.amplitudes)) * g.area / (2.0 * np.pi)
    return kx, ky, phi


# ---------------------------------------------------------------------------
# finite-difference oracle


def fd_apply_momentum(state: GridState, axis: str) -> np.ndarray:
    g = state.grid
    if axis == "x":
        d = _kernels.fd4(state.amplitudes, g.dx, 1)
    elif axis == "y":
        d = _kernels.fd4(state.amplitudes, g.dy, 0)
    else:
        raise OamurError(f"axis must be 'x' or 'y', got {axis!r}")
    return -1j * state.hbar * d


def fd_apply_L(state: GridState) -> np.ndarray:
    X, Y = state.grid.mesh()
    return X * fd_apply_momentum(state, "y") - Y * fd_apply_momentum(state, "x")


def fd_oam_statistics(state: GridState) -> OamReport:
    return oam_statistics(state, fd_apply_L(state))
