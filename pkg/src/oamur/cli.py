"""Command-line entry point.

Exit status: 0 when every inequality holds, 1 when a property or inequality
is violated, 2 on usage errors, unreadable state files and guard failures
(decay guard on grid states, truncation guard on Fock states).  On exit 2 no
output files are written.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import operators as ops
from . import scenarios as sc
from .errors import OamurError
from .gridstate import (
    GridSpec,
    GridState,
    LaguerreGauss,
    OffsetGauss,
    RingGauss,
    characteristic_extent,
    mode_to_dict,
    synthesize,
    two_ring,
)
from .inequality import DEFAULT_ORDERS, SLACK_TOL, check_all
from .io import atomic_write, load_state, save_state
from .serialize import dumps, histogram_csv, inequalities_csv, rows_to_csv

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SCENARIOS = ("eigenstate", "superposition")


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = 256
    extent: float | None = None
    hbar: float = 1.0
    tol: float = SLACK_TOL
    out_dir: Path = Path(".")
    fmt: str = "json"
    seed: int = 0
    n_max_moment: int = 4

    def __post_init__(self):
        if not self.tol > 0:
            raise OamurError("--tol must be positive")
        if not self.hbar > 0:
            raise OamurError("--hbar must be positive")
        if self.fmt not in ("json", "csv"):
            raise OamurError("--format must be json or csv")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            grid_n=args.grid_n, extent=args.extent, hbar=args.hbar, tol=args.tol,
            out_dir=Path(args.out_dir), fmt=args.format, seed=getattr(args, "seed", 0),
            n_max_moment=getattr(args, "n_max_moment", 4),
        )


# ---------------------------------------------------------------------------
# shared analysis


def analysis_report(state: GridState, n_max_moment: int = 4, tol: float = SLACK_TOL,
                    orders=DEFAULT_ORDERS) -> dict:
    """Everything ``analyze`` reports about one state, in a fixed key order."""
    ops.check_guard(state, strict=True)
    Lpsi = ops.apply_L(state)
    oam = ops.oam_statistics(state, Lpsi)
    moments = ops.position_moments(state, n_max_moment)
    ineq = check_all(state, orders, tol)
    residuals = [ops.commutator_residual(state, n, Lpsi) for n in orders]
    g = state.grid
    return {
        "grid": {"nx": g.nx, "ny": g.ny, "half_extent": g.half_extent},
        "hbar": state.hbar,
        "guards": {"decay_ratio": state.decay_ratio(), "decay_ok": state.decay_ok},
        "oam": oam,
        "moments": moments,
        "inequalities": ineq,
        "commutator_residuals": [{"n": n, "residual": r} for n, r in zip(orders, residuals)],
        "all_satisfied": all(r.satisfied for r in ineq),
    }


def _mode_from_args(args):
    mode = args.mode
    if mode == "ring":
        return RingGauss(args.l, args.r0, args.width)
    if mode == "lg":
        return LaguerreGauss(args.p, args.l, args.waist)
    if mode == "gauss":
        return OffsetGauss(args.x0, args.y0, args.width)
    if mode == "superposition":
        return two_ring(args.l1, args.l2, args.weight, args.r0, args.width)
    raise OamurError(f"unknown mode {mode!r}")


def _grid_for(cfg: RunConfig, mode) -> GridSpec:
    L = cfg.extent if cfg.extent is not None else characteristic_extent(mode)
    return GridSpec(cfg.grid_n, cfg.grid_n, L)


def _write_all(out_dir: Path, files: dict[str, str]) -> None:
    for name, text in files.items():
        atomic_write(out_dir / name, text)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.state:
        state = load_state(args.state)
        source = {"state_file": str(args.state)}
    else:
        mode = _mode_from_args(args)
        state = synthesize(mode, _grid_for(cfg, mode), cfg.hbar)
        source = {"mode": mode_to_dict(mode)}
    analysis = analysis_report(state, cfg.n_max_moment, cfg.tol)
    if cfg.fmt == "json":
        files = {"analysis.json": dumps({"input": source, "analysis": analysis})}
    else:
        files = {
            "inequalities.csv": inequalities_csv(analysis["inequalities"]),
            "moments.csv": rows_to_csv(
                ({"n": m.n, "z_re": m.z_moment.real, "z_im": m.z_moment.imag,
                  "radial_power": m.radial_power, "mu_re": m.mu_n.real, "mu_im": m.mu_n.imag,
                  "mu_abs": abs(m.mu_n)} for m in analysis["moments"]),
                ("n", "z_re", "z_im", "radial_power", "mu_re", "mu_im", "mu_abs"),
            ),
            "oam.csv": rows_to_csv([analysis["oam"]], ("mean_L", "var_L", "sigma_L")),
        }
    _write_all(cfg.out_dir, files)
    for r in analysis["inequalities"]:
        flag = "ok " if r.satisfied else "FAIL"
        print(f"{flag} {r.name:12s} n={r.n}  lhs={r.lhs:.6e}  rhs={r.rhs:.6e}  slack={r.slack:+.3e}")
    return EXIT_OK if analysis["all_satisfied"] else EXIT_VIOLATION


def parse_sweep(text: str) -> np.ndarray:
    try:
        a, b, k = text.split(":")
        a, b, k = float(a), float(b), int(k)
    except ValueError as exc:
        raise OamurError(f"--sweep expects start:stop:count, got {text!r}") from exc
    if k < 1:
        raise OamurError("--sweep count must be >= 1")
    return np.linspace(a, b, k)


def cmd_scenario(args) -> int:
    cfg = RunConfig.from_args(args)
    geometry = sc.RingGeometry(args.r0, args.width, cfg.grid_n, cfg.extent)
    files = {}
    ok = True
    if args.name == "eigenstate":
        res = sc.eigenstate_scenario(args.l, geometry, hbar=cfg.hbar, bins=args.bins, tol=cfg.tol)
    else:
        if args.sweep:
            rows = sc.tradeoff_table(args.l1, args.l2, parse_sweep(args.sweep), geometry,
                                     hbar=cfg.hbar, tol=cfg.tol)
            files["tradeoff.csv"] = rows_to_csv(rows, sc.TRADEOFF_COLUMNS)
            if cfg.fmt == "json":
                files["tradeoff.json"] = dumps(rows)
            ok = all(r["satisfied"] for r in rows)
            _write_all(cfg.out_dir, files)
            print(f"wrote {len(rows)} sweep rows; all satisfied: {ok}")
            return EXIT_OK if ok else EXIT_VIOLATION
        res = sc.superposition_scenario(args.l1, args.l2, args.weight, geometry,
                                        hbar=cfg.hbar, bins=args.bins, tol=cfg.tol)
    if cfg.fmt == "json":
        files[f"scenario_{res.name}.json"] = dumps(res)
    else:
        files[f"scenario_{res.name}_inequalities.csv"] = inequalities_csv(res.inequalities)
    files[f"histogram_{res.name}.csv"] = histogram_csv(ops.bin_centers(len(res.histogram)), res.histogram)
    _write_all(cfg.out_dir, files)
    print(res.verdict)
    ok = res.passed
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(seed=args.seed, quick=args.quick, tol=args.tol)
    for r in results:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag} {r.name:22s} checked={r.checked:6d} violations={r.violations:3d} "
              f"worst={r.worst:+.3e}  ({r.seconds:.1f}s)  {r.detail}")
    bad = sum(r.violations for r in results)
    print(f"selftest: {'PASS' if bad == 0 else 'FAIL'} ({bad} violations)")
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


def cmd_synth(args) -> int:
    cfg = RunConfig.from_args(args)
    mode = _mode_from_args(args)
    state = synthesize(mode, _grid_for(cfg, mode), cfg.hbar)
    save_state(state, args.output)
    print(f"wrote {args.output}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-n", type=int, default=256, help="samples per axis (even, >= 16)")
    p.add_argument("--extent", type=float, default=None,
                   help="grid half extent L; default r0 + 12*width (or 12 widths for Gaussians)")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=SLACK_TOL, help="slack tolerance for 'satisfied'")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out-dir", default=".")


def _mode_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("ring", "lg", "gauss", "superposition"), default="ring")
    p.add_argument("--l", type=int, default=0, help="winding number")
    p.add_argument("--p", type=int, default=0, help="Laguerre-Gauss radial index")
    p.add_argument("--waist", type=float, default=1.0)
    p.add_argument("--r0", type=float, default=sc.RING_R0)
    p.add_argument("--width", type=float, default=sc.RING_WIDTH)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--y0", type=float, default=0.0)
    p.add_argument("--l1", type=int, default=0)
    p.add_argument("--l2", type=int, default=1)
    p.add_argument("--weight", type=float, default=0.5, help="probability weight of the l1 component")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamur",
        description="Angle / orbital-angular-momentum uncertainty relations on planar wavefunctions.",
        epilog=(
            "exit status: 0 all checks satisfied; 1 an inequality or property violated; "
            "2 usage error, unreadable state file, or decay/truncation guard failure "
            "(nothing written)"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report OAM statistics, moments and all inequalities")
    _mode_flags(p)
    _common(p)
    p.add_argument("--state", default=None, help="wavefunction file (binary .wf or .json)")
    p.add_argument("--n-max-moment", type=int, default=4)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scenario", help="run a vortex-beam scenario")
    p.add_argument("name", choices=SCENARIOS)
    _mode_flags(p)
    _common(p)
    p.add_argument("--bins", type=int, default=sc.HIST_BINS)
    p.add_argument("--sweep", default=None, help="start:stop:count weight sweep (superposition)")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("selftest", help="run the full property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="100 random states instead of 1000")
    p.add_argument("--tol", type=float, default=SLACK_TOL)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("synth", help="synthesize a mode and save it as a state file")
    _mode_flags(p)
    _common(p)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OamurError as exc:
        print(f"oamur: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
