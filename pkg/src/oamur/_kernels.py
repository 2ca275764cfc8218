"""Inner-loop kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``OAMUR_DISABLE_NUMBA`` is unset (or ``0``).  numpy sums pairwise
and the jitted loops sum sequentially, so the two paths agree to round-off
only; byte-level determinism is promised within one backend.
"""

import os

import numpy as np

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

_DISABLED = os.environ.get("OAMUR_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAS_NUMBA and not _DISABLED


def backend():
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy reference implementations


def moment_sums_numpy(rho, x, y, nmax):
    """Return ``(zsum, rsum2, rsum1)`` with, for n = 1..nmax,

    ``zsum[n-1] = sum rho*(x+iy)**n``, ``rsum2[n-1] = sum rho*r**(2n)`` and
    ``rsum1[n-1] = sum rho*r**n``.  ``rho`` is (ny, nx); ``x`` and ``y`` are 1-D.
    """
    z = x[None, :] + 1j * y[:, None]
    r2 = (x * x)[None, :] + (y * y)[:, None]
    r1 = np.sqrt(r2)
    zsum = np.empty(nmax, dtype=np.complex128)
    rsum2 = np.empty(nmax)
    rsum1 = np.empty(nmax)
    wz = rho.astype(np.complex128)
    w2 = rho.copy()
    w1 = rho.copy()
    for k in range(nmax):
        wz = wz * z
        w2 = w2 * r2
        w1 = w1 * r1
        zsum[k] = wz.sum()
        rsum2[k] = w2.sum()
        rsum1[k] = w1.sum()
    return zsum, rsum2, rsum1


def fd4_numpy(f, h, axis):
    """Periodic fourth-order central first derivative along ``axis``."""
    return (
        -np.roll(f, -2, axis) + 8.0 * np.roll(f, -1, axis)
        - 8.0 * np.roll(f, 1, axis) + np.roll(f, 2, axis)
    ) / (12.0 * h)


# ---------------------------------------------------------------------------
# numba implementations

if HAS_NUMBA:

    @numba.njit(cache=True)
    def _moment_sums_nb(rho, x, y, nmax):
        ny, nx = rho.shape
        zsum = np.zeros(nmax, dtype=np.complex128)
        rsum2 = np.zeros(nmax)
        rsum1 = np.zeros(nmax)
        for i in range(ny):
            for j in range(nx):
                p = rho[i, j]
                z = complex(x[j], y[i])
                r2 = x[j] * x[j] + y[i] * y[i]
                r1 = np.sqrt(r2)
                wz = complex(p, 0.0)
                w2 = p
                w1 = p
                for k in range(nmax):
                    wz = wz * z
                    w2 = w2 * r2
                    w1 = w1 * r1
                    zsum[k] += wz
                    rsum2[k] += w2
                    rsum1[k] += w1
        return zsum, rsum2, rsum1

    @numba.njit(cache=True)
    def _fd4_rows_nb(f, h):
        # derivative along the last axis of a 2-D complex array
        ny, nx = f.shape
        out = np.empty_like(f)
        c = 1.0 / (12.0 * h)
        for i in range(ny):
            for j in range(nx):
                out[i, j] = c * (
                    -f[i, (j + 2) % nx] + 8.0 * f[i, (j + 1) % nx]
                    - 8.0 * f[i, (j - 1) % nx] + f[i, (j - 2) % nx]
                )
        return out

    def moment_sums_numba(rho, x, y, nmax):
        return _moment_sums_nb(np.ascontiguousarray(rho, dtype=np.float64),
                               np.asarray(x, np.float64), np.asarray(y, np.float64), int(nmax))

    def fd4_numba(f, h, axis):
        f = np.asarray(f, dtype=np.complex128)
        if axis in (1, -1):
            return _fd4_rows_nb(np.ascontiguousarray(f), float(h))
        return np.ascontiguousarray(_fd4_rows_nb(np.ascontiguousarray(f.T), float(h)).T)


if USE_NUMBA:
    moment_sums = moment_sums_numba
    fd4 = fd4_numba
else:
    moment_sums = moment_sums_numpy
    fd4 = fd4_numpy
