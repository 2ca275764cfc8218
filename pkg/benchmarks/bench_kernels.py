"""Time the jitted kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--sizes 128 256 512] [--repeat 5]

Each kernel is called once beforehand so numba compilation is excluded.
Results also include a relative-difference column as a sanity check.
"""

import argparse
import timeit

import numpy as np

from oamur import _kernels as K


def _cases(n, nmax):
    rng = np.random.default_rng(n)
    x = np.linspace(-10, 10, n, endpoint=False)
    rho = rng.random((n, n))
    f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = x[1] - x[0]
    return {
        f"moment_sums n<={nmax}": (
            lambda: K.moment_sums_numpy(rho, x, x, nmax),
            lambda: K.moment_sums_numba(rho, x, x, nmax),
            lambda out: out[0],
        ),
        "fd4 axis=1": (lambda: K.fd4_numpy(f, h, 1), lambda: K.fd4_numba(f, h, 1), lambda out: out),
        "fd4 axis=0": (lambda: K.fd4_numpy(f, h, 0), lambda: K.fd4_numba(f, h, 0), lambda out: out),
    }


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nmax", type=int, default=4)
    args = ap.parse_args()
    if not K.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':22s} {'grid':>9s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for n in args.sizes:
        for name, (np_fn, nb_fn, pick) in _cases(n, args.nmax).items():
            a, b = pick(np_fn()), pick(nb_fn())  # warm-up and compile
            diff = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
            t_np, t_nb = best(np_fn, args.repeat), best(nb_fn, args.repeat)
            print(f"{name:22s} {n:4d}x{n:<4d} {1e3 * t_np:10.2f} {1e3 * t_nb:10.2f} "
                  f"{t_np / t_nb:7.1f}x {diff:13.1e}")


if __name__ == "__main__":
    main()
