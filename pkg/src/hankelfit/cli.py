"""Command line interface.

Subcommands:
  approx    one-shot rank-1 Hankel/Toeplitz fit of a matrix file
  doa       single simulated scene, one estimator
  bench     full Monte Carlo experiment from a JSON config
  selftest  condensed oracle checks

Matrix file format: first line "D W", then D*W whitespace-separated
complex entries as "re im" pairs, row-major.

Exit codes: 0 success, 1 configuration/usage error, 2 estimator failures
above the configured threshold (or selftest failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

__all__ = ["main", "read_matrix", "write_matrix"]


def read_matrix(path) -> np.ndarray:
    tokens = Path(path).read_text(encoding="utf-8").split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: expected a 'D W' header")
    d, w = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if len(values) != 2 * d * w:
        raise ValueError(f"{path}: expected {2 * d * w} numbers after the header, got {len(values)}")
    flat = np.array(values, dtype=np.float64)
    return (flat[0::2] + 1j * flat[1::2]).reshape(d, w)


def write_matrix(X: np.ndarray, path) -> None:
    X = np.asarray(X, dtype=np.complex128)
    lines = [f"{X.shape[0]} {X.shape[1]}"]
    lines.extend(f"{float(v.real)!r} {float(v.imag)!r}" for v in X.ravel())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_approx(args) -> int:
    from .grids import GridSpec
    from .l1 import WeiszfeldConfig, approx_l1
    from .l2 import approx_l2
    from .toeplitz import toeplitz_approx

    X = read_matrix(args.matrix)
    grid = None
    if args.delta_rho or args.delta_phi:
        base = GridSpec.default_l2() if args.norm == "l2" else GridSpec.default_l1()
        grid = GridSpec(
            args.delta_rho or base.delta_rho,
            args.delta_phi or base.delta_phi,
            restrict_real=args.real,
        )
    elif args.real:
        grid = (
            GridSpec.default_l2(restrict_real=True)
            if args.norm == "l2"
            else GridSpec.default_l1(restrict_real=True)
        )
    if args.structure == "toeplitz":
        fit = toeplitz_approx(X, norm=args.norm, grid=grid, refine=args.refine)
    elif args.norm == "l2":
        fit = approx_l2(X, grid, refine=args.refine)
    else:
        fit = approx_l1(X, grid, WeiszfeldConfig(), refine=args.refine)
    print(f"structure: {fit.structure}")
    print(f"norm:      {fit.norm}")
    print(f"z:         {fit.z.real!r} {fit.z.imag!r}")
    print(f"c:         {fit.c.real!r} {fit.c.imag!r}")
    print(f"residual:  {fit.residual!r}")
    print(f"branch:    {fit.branch} (pre_flipped={fit.pre_flipped}, refined={fit.refined})")
    if args.out:
        write_matrix(fit.matrix, args.out)
        print(f"approximation written to {args.out}")
    return 0


def _cmd_doa(args) -> int:
    from .doa import ArrayConfig, ThetaGrid, acquire
    from .noise import NoiseModel, calibrate_amplitude, rng_from_seed

    config = ArrayConfig(m=args.m, d=args.d or max(args.m // 2, 1))
    if args.noise == "white":
        model = NoiseModel.white(args.sigma2)
    else:
        model = NoiseModel.impulsive(args.p, args.sigma1_2, args.sigma2_2)
    rng = rng_from_seed(args.seed)
    amplitude = calibrate_amplitude(args.snr_db, model, rng)
    scene = acquire(config, args.theta0, amplitude, model, rng=rng, seed=args.seed)
    grid = ThetaGrid(step=args.theta_step)
    theta_hat = _dispatch_method(args.method, scene, grid)
    print(f"theta0:    {scene.theta0}")
    print(f"theta_hat: {theta_hat!r}")
    print(f"abs_error: {abs(theta_hat - scene.theta0)!r}")
    return 0


def _dispatch_method(method: str, scene, grid) -> float:
    from .bench import METHOD_IDS, ExperimentConfig, _estimate

    if method not in METHOD_IDS:
        raise ValueError(f"unknown method {method!r}; known: {list(METHOD_IDS)}")
    cfg = ExperimentConfig(methods=(method,))
    return float(_estimate(method, scene, grid, cfg))


def _cmd_bench(args) -> int:
    from .bench import ExperimentConfig, emit_csv, emit_plot, run_experiment

    try:
        cfg = ExperimentConfig.from_json(args.config)
    except (OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.theta_step is not None:
        overrides["theta_step"] = args.theta_step
    if args.refine:
        overrides["refine"] = True
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)

    records, summaries = run_experiment(cfg, threads=args.threads)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    emit_csv(records, csv_path)
    print(f"wrote {csv_path} ({len(records)} records)")
    if args.plot != "none":
        plot_path = out_dir / ("plot.svg" if args.plot == "svg" else "plot.gp")
        emit_plot(summaries, plot_path, fmt="svg" if args.plot == "svg" else "gnuplot_script")
        print(f"wrote {plot_path}")
    n_failed = sum(1 for r in records if not r.ok)
    for s in summaries:
        print(
            f"  {s.method:18s} M={s.m:<4d} D={s.d:<4d} SNR={s.snr_db:>6.1f} dB  "
            f"mean |err| = {s.mean_abs_err:.6f} deg  (ok={s.n_ok}, failed={s.n_failed})"
        )
    if n_failed > cfg.fail_threshold * len(records):
        print(f"{n_failed}/{len(records)} trials failed", file=sys.stderr)
        return 2
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(verbose=True)
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hankelfit",
        description="Rank-1 Hankel/Toeplitz approximation and few-shot DoA estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="fit one matrix from a file")
    p.add_argument("matrix", help="matrix file ('D W' header + 're im' pairs)")
    p.add_argument("--norm", choices=("l2", "l1"), default="l2")
    p.add_argument("--structure", choices=("hankel", "toeplitz"), default="hankel")
    p.add_argument("--real", action="store_true", help="restrict the generator to [-1, 1]")
    p.add_argument("--delta-rho", type=float, default=None, dest="delta_rho")
    p.add_argument("--delta-phi", type=float, default=None, dest="delta_phi")
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out", default=None, help="write the approximation matrix here")
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("doa", help="single simulated scene")
    p.add_argument("--m", type=int, required=True, help="array elements")
    p.add_argument("--d", type=int, default=None, help="window length (default m//2)")
    p.add_argument("--theta0", type=float, default=20.0)
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--noise", choices=("white", "impulsive"), default="white")
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--sigma1-2", type=float, default=1.0, dest="sigma1_2")
    p.add_argument("--sigma2-2", type=float, default=200.0, dest="sigma2_2")
    p.add_argument("--method", default="r1h_l2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta-step", type=float, default=0.01, dest="theta_step")
    p.set_defaults(func=_cmd_doa)

    p = sub.add_parser("bench", help="Monte Carlo experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the master seed")
    p.add_argument("--out", default="bench_out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--theta-step", type=float, default=None, dest="theta_step")
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--plot", choices=("svg", "gnuplot", "none"), default="svg")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("selftest", help="run the built-in oracle checks")
    p.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
