"""Truncated number-basis states and the charge/order-parameter relation.

With ``G = a^dag a`` and ``Phi = a`` the relation bounds the number spread of
any state with a nonzero phase order parameter ``<a>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import NotSelfAdjoint, OamurError, TruncationTooSmall
from .inequality import SLACK_TOL, generalized_bound

TAIL_TOL = 1e-10
NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FockState:
    n_max: int
    coefficients: np.ndarray

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 2:
            raise OamurError("n_max must be an integer >= 2")
        c = np.array(self.coefficients, dtype=np.complex128, copy=True).ravel()
        if c.size != self.n_max + 1:
            raise OamurError(f"expected {self.n_max + 1} coefficients, got {c.size}")
        norm2 = float(np.vdot(c, c).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise OamurError(f"coefficients not normalized (norm^2 = {norm2!r})")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def number(cls, n: int, n_max: int) -> "FockState":
        c = np.zeros(n_max + 1, dtype=np.complex128)
        c[n] = 1.0
        return cls(n_max, c)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def tail_mass(self) -> float:
        return float(abs(self.coefficients[-1]) ** 2)


@dataclass(frozen=True)
class GeneralizedReport:
    sigma_G: float
    comm_abs: float
    denom: float
    lhs: float
    rhs: float
    slack: float
    satisfied: bool


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), 1).astype(np.complex128)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=np.float64)).astype(np.complex128)


def truncation_floor(alpha: complex) -> float:
    m = abs(alpha) ** 2
    return m + 10.0 * math.sqrt(m + 1.0)


def coherent_state(alpha: complex, n_max: int) -> FockState:
    """Coefficients ``alpha^n / sqrt(n!)`` normalized over 0..n_max."""
    alpha = complex(alpha)
    if n_max < truncation_floor(alpha):
        raise TruncationTooSmall(
            f"n_max={n_max} below |alpha|^2 + 10 sqrt(|alpha|^2 + 1) = {truncation_floor(alpha):.3f}"
        )
    n = np.arange(n_max + 1)
    if alpha == 0:
        c = (n == 0).astype(np.complex128)
    else:
        logmag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
        c = np.exp(logmag - logmag.max() + 1j * n * np.angle(alpha))
    c = c / np.linalg.norm(c)
    state = FockState(n_max, c)
    if state.tail_mass > TAIL_TOL:
        raise TruncationTooSmall(f"tail mass {state.tail_mass:.3g} exceeds {TAIL_TOL:g}")
    return state


def _vector(state) -> np.ndarray:
    if isinstance(state, FockState):
        if state.tail_mass > TAIL_TOL:
            raise TruncationTooSmall(f"tail mass {state.tail_mass:.3g} exceeds {TAIL_TOL:g}")
        return state.coefficients
    v = np.asarray(state, dtype=np.complex128).ravel()
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise OamurError(f"state vector not normalized (norm^2 = {norm2!r})")
    return v


def check_result4_generic(state, G: np.ndarray, Phi: np.ndarray,
                          tol: float = SLACK_TOL) -> GeneralizedReport:
    """sigma(G) >= |<[G,Phi]>| / (sqrt<Phi^dag Phi> + sqrt<Phi Phi^dag>) for dense matrices.

    ``state`` is a :class:`FockState` (truncation guard enforced) or a plain
    unit vector.
    """
    psi = _vector(state)
    G = np.asarray(G, dtype=np.complex128)
    Phi = np.asarray(Phi, dtype=np.complex128)
    d = psi.size
    if G.shape != (d, d) or Phi.shape != (d, d):
        raise OamurError(f"operators must be {d}x{d}")
    if np.linalg.norm(G - G.conj().T) > HERMITIAN_TOL:
        raise NotSelfAdjoint("G is not self-adjoint")
    Gpsi = G @ psi
    mean_g = float(np.vdot(psi, Gpsi).real)
    dev = Gpsi - mean_g * psi
    sigma = math.sqrt(max(float(np.vdot(dev, dev).real), 0.0))
    Phipsi = Phi @ psi
    Phidag_psi = Phi.conj().T @ psi
    comm = np.vdot(psi, G @ Phipsi) - np.vdot(psi, Phi @ Gpsi)
    a = float(np.vdot(Phipsi, Phipsi).real)        # <Phi^dag Phi>
    b = float(np.vdot(Phidag_psi, Phidag_psi).real)  # <Phi Phi^dag>
    lhs, rhs = generalized_bound(sigma, abs(comm), a, b)
    slack = lhs - rhs
    return GeneralizedReport(
        sigma_G=sigma, comm_abs=float(abs(comm)), denom=math.sqrt(a) + math.sqrt(b),
        lhs=lhs, rhs=rhs, slack=slack, satisfied=bool(slack >= -tol),
    )


def number_phase_report(state: FockState, tol: float = SLACK_TOL) -> GeneralizedReport:
    """The relation for G = a^dag a, Phi = a."""
    return check_result4_generic(state, number_operator(state.dim), annihilation(state.dim), tol)


def random_pair_property(seed, dim: int, samples: int = 1000,
                         tol: float = SLACK_TOL) -> list[GeneralizedReport]:
    """Reports for seeded random Hermitian G, arbitrary Phi and unit psi."""
    if int(dim) != dim or not 2 <= dim <= 64:
        raise OamurError("dim must be an integer in [2, 64]")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(samples):
        A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        G = 0.5 * (A + A.conj().T)
        Phi = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        psi /= np.linalg.norm(psi)
        out.append(check_result4_generic(psi, G, Phi, tol))
    return out
