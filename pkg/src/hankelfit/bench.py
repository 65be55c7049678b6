"""Config-driven Monte Carlo benchmark over the DoA estimators.

Reproducibility contract: the CSV produced by a run is a pure function of
the config (including the master seed).  Each trial derives its own Philox
stream from ``(master_seed, m_index, snr_index, trial_index)``; the method
is deliberately absent from the key so every estimator sees the identical
noise realization, which is what makes small-sample orderings between
methods meaningful.  Trials may run on any number of worker threads; the
records are ordered by construction, not by completion.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import baselines
from .doa import (
    ArrayConfig,
    ThetaGrid,
    acquire,
    average_per_sensor,
    estimate_doa_l1,
    estimate_doa_l2,
    matched_filter_ml,
)
from .l1 import WeiszfeldConfig
from .noise import (
    FaultSpec,
    NoiseModel,
    calibrate_amplitude,
    inject_faults,
    rng_from_seed,
    seed_sequence,
    ula_sensor_map,
)

__all__ = [
    "SCHEMA_VERSION",
    "METHOD_IDS",
    "CSV_HEADER",
    "ExperimentConfig",
    "TrialRecord",
    "CellSummary",
    "run_experiment",
    "summarize",
    "emit_csv",
    "parse_csv",
    "emit_plot",
]

SCHEMA_VERSION = 1

METHOD_IDS = (
    "r1h_l2",
    "r1h_l1",
    "matrix_pencil",
    "hankel_music",
    "fbss_music",
    "max_energy",
    "toeplitz_music",
    "matched_filter_ml",
)

CSV_HEADER = "method,M,D,snr_db,noise,theta0_deg,theta_hat_deg,abs_err_deg,seed,ok"


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark campaign: the sweep axes and all policy knobs."""

    m_list: tuple = (16,)
    d_list: tuple | None = None  # None: d = m // 2 per array size
    snr_db_list: tuple = (0.0,)
    noise: NoiseModel = field(default_factory=NoiseModel.white)
    trials: int = 100
    methods: tuple = ("r1h_l2",)
    theta0_policy: str = "uniform"  # or "fixed"
    theta0_value: float = 0.0
    theta0_range: tuple = (-85.0, 85.0)
    master_seed: int = 0
    theta_step: float = 0.01
    spacing_ratio: float = 0.5
    l1_two_stage: bool = True
    refine: bool = False
    weiszfeld: WeiszfeldConfig = field(default_factory=WeiszfeldConfig)
    fault: FaultSpec | None = None
    fail_threshold: float = 0.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.m_list:
            raise ValueError("m_list must be non-empty")
        if not self.methods:
            raise ValueError("methods must be non-empty")
        unknown = [m for m in self.methods if m not in METHOD_IDS]
        if unknown:
            raise ValueError(f"unknown methods: {unknown}; known: {list(METHOD_IDS)}")
        if self.d_list is not None and len(self.d_list) != len(self.m_list):
            raise ValueError("d_list must pair up with m_list")
        if self.theta0_policy not in ("uniform", "fixed"):
            raise ValueError("theta0_policy must be 'uniform' or 'fixed'")

    def d_for(self, i: int) -> int:
        if self.d_list is not None:
            return int(self.d_list[i])
        return max(int(self.m_list[i]) // 2, 1)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
        version = raw.pop("schema_version", None)
        if version != SCHEMA_VERSION:
            raise ValueError(f"config schema_version must be {SCHEMA_VERSION}, got {version!r}")
        noise = raw.pop("noise", None)
        kwargs = {}
        if noise is not None:
            kwargs["noise"] = NoiseModel(**noise)
        fault = raw.pop("fault", None)
        if fault is not None:
            kwargs["fault"] = FaultSpec(
                faulty_sensors=frozenset(fault.get("faulty_sensors", ())),
                alpha_db=float(fault.get("alpha_db", 0.0)),
            )
        weiszfeld = raw.pop("weiszfeld", None)
        if weiszfeld is not None:
            kwargs["weiszfeld"] = WeiszfeldConfig(**weiszfeld)
        for key in ("m_list", "d_list", "snr_db_list", "methods", "theta0_range"):
            if key in raw and raw[key] is not None:
                raw[key] = tuple(raw[key])
        try:
            return cls(**raw, **kwargs)
        except TypeError as e:
            raise ValueError(f"bad config: {e}") from e


@dataclass(frozen=True)
class TrialRecord:
    """One (method, trial) outcome; ``ok`` is False when the estimator raised."""

    method: str
    m: int
    d: int
    snr_db: float
    noise_kind: str
    theta0: float
    theta_hat: float
    abs_err: float
    seed: int
    ok: bool
    wall_time: float = 0.0

    def csv_fields(self) -> tuple:
        return (
            self.method,
            self.m,
            self.d,
            self.snr_db,
            self.noise_kind,
            self.theta0,
            self.theta_hat,
            self.abs_err,
            self.seed,
            int(self.ok),
        )


@dataclass(frozen=True)
class CellSummary:
    method: str
    m: int
    d: int
    snr_db: float
    mean_abs_err: float
    n_ok: int
    n_failed: int


def _estimate(method: str, scene, grid: ThetaGrid, cfg: ExperimentConfig) -> float:
    X, config = scene.X, scene.config
    if method == "r1h_l2":
        return estimate_doa_l2(X, config, grid, refine=cfg.refine)
    if method == "r1h_l1":
        return estimate_doa_l1(
            X, config, grid, cfg.weiszfeld, two_stage=cfg.l1_two_stage, refine=cfg.refine
        )
    if method == "matched_filter_ml":
        return matched_filter_ml(X, config, grid)
    if method == "matrix_pencil":
        return baselines.matrix_pencil(X, config)
    if method == "hankel_music":
        return baselines.hankel_music(X, config, grid)
    if method == "fbss_music":
        return baselines.fbss_music(X, config, grid)
    r_tilde = average_per_sensor(X, config)
    if method == "max_energy":
        return baselines.max_energy(r_tilde, config, grid)
    if method == "toeplitz_music":
        return baselines.toeplitz_music(r_tilde, config, grid)
    raise ValueError(f"unknown method {method!r}")


def _run_trial(cfg: ExperimentConfig, m_idx: int, snr_idx: int, trial: int) -> list[TrialRecord]:
    """One scene, all methods.  Pure function of (cfg, indices)."""
    m = int(cfg.m_list[m_idx])
    d = cfg.d_for(m_idx)
    snr_db = float(cfg.snr_db_list[snr_idx])
    config = ArrayConfig(m=m, d=d, spacing_ratio=cfg.spacing_ratio)
    grid = ThetaGrid(step=cfg.theta_step)

    ss = seed_sequence(cfg.master_seed, m_idx, snr_idx, trial)
    seed_id = int(ss.generate_state(1, dtype=np.uint64)[0])
    rng = rng_from_seed(ss)
    if cfg.theta0_policy == "uniform":
        lo, hi = cfg.theta0_range
        theta0 = float(rng.uniform(lo, hi))
    else:
        theta0 = float(cfg.theta0_value)
    amplitude = calibrate_amplitude(snr_db, cfg.noise, rng)
    scene = acquire(config, theta0, amplitude, cfg.noise, rng=rng, seed=seed_id)
    if cfg.fault is not None and cfg.fault.faulty_sensors:
        scene.X = inject_faults(scene.X, ula_sensor_map(d, config.w), cfg.fault, rng)

    records = []
    for method in cfg.methods:
        t0 = time.perf_counter()
        try:
            theta_hat = float(_estimate(method, scene, grid, cfg))
            err = abs(theta_hat - theta0)
            ok = True
        except Exception:
            theta_hat = float("nan")
            err = float("nan")
            ok = False
        records.append(
            TrialRecord(
                method=method,
                m=m,
                d=d,
                snr_db=snr_db,
                noise_kind=cfg.noise.kind,
                theta0=theta0,
                theta_hat=theta_hat,
                abs_err=err,
                seed=seed_id,
                ok=ok,
                wall_time=time.perf_counter() - t0,
            )
        )
    return records


def run_experiment(cfg: ExperimentConfig, threads: int = 1):
    """Run the full sweep; returns ``(records, summaries)``.

    Record order is cell-major (m, snr, method) then trial index, identical
    at any thread count.  Failed trials are recorded, never dropped.
    """
    jobs = [
        (m_idx, snr_idx, trial)
        for m_idx in range(len(cfg.m_list))
        for snr_idx in range(len(cfg.snr_db_list))
        for trial in range(cfg.trials)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(lambda j: _run_trial(cfg, *j), jobs))
    else:
        per_trial = [_run_trial(cfg, *j) for j in jobs]

    by_key = {}
    for job, recs in zip(jobs, per_trial):
        m_idx, snr_idx, trial = job
        for rec in recs:
            by_key[(m_idx, snr_idx, cfg.methods.index(rec.method), trial)] = rec
    records = [by_key[k] for k in sorted(by_key)]
    return records, summarize(records)


def summarize(records) -> list[CellSummary]:
    """Per-cell mean absolute error over successful trials, in record order."""
    cells: dict[tuple, list[TrialRecord]] = {}
    order = []
    for rec in records:
        key = (rec.method, rec.m, rec.d, rec.snr_db)
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(rec)
    out = []
    for key in order:
        recs = cells[key]
        oks = [r.abs_err for r in recs if r.ok]
        out.append(
            CellSummary(
                method=key[0],
                m=key[1],
                d=key[2],
                snr_db=key[3],
                mean_abs_err=float(np.mean(oks)) if oks else float("nan"),
                n_ok=len(oks),
                n_failed=len(recs) - len(oks),
            )
        )
    return out


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))  # plain float repr even for numpy scalars
    return str(value)


def emit_csv(records, path) -> None:
    """Write the frozen-schema CSV; full-precision decimals, fixed order."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(CSV_HEADER + "\n")
            for rec in records:
                f.write(",".join(_fmt(v) for v in rec.csv_fields()) + "\n")
    except OSError as e:
        raise OSError(f"cannot write CSV to {path}: {e}") from e


def parse_csv(path) -> list[TrialRecord]:
    """Read a CSV produced by :func:`emit_csv` back into records.

    Wall time is not part of the schema and comes back as zero.
    """
    records = []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        for line in f:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            records.append(
                TrialRecord(
                    method=parts[0],
                    m=int(parts[1]),
                    d=int(parts[2]),
                    snr_db=float(parts[3]),
                    noise_kind=parts[4],
                    theta0=float(parts[5]),
                    theta_hat=float(parts[6]),
                    abs_err=float(parts[7]),
                    seed=int(parts[8]),
                    ok=bool(int(parts[9])),
                )
            )
    return records


def emit_plot(summaries, path, fmt: str = "svg") -> None:
    """Render mean absolute error vs array size, one series per method.

    ``svg`` writes a self-contained figure (one panel per SNR, log y);
    ``gnuplot_script`` writes a runnable script with inline data.
    """
    if not summaries:
        raise ValueError("summary is empty")
    if fmt not in ("svg", "gnuplot_script"):
        raise ValueError(f"unknown plot format {fmt!r}")
    snrs = sorted({s.snr_db for s in summaries})
    methods = []
    for s in summaries:
        if s.method not in methods:
            methods.append(s.method)

    def series(method, snr):
        pts = sorted(
            (s.m, s.mean_abs_err)
            for s in summaries
            if s.method == method and s.snr_db == snr and np.isfinite(s.mean_abs_err)
        )
        return pts

    if fmt == "gnuplot_script":
        lines = [
            "set logscale y",
            'set xlabel "array elements"',
            'set ylabel "mean absolute error (deg)"',
            'set key outside',
        ]
        blocks, plot_parts = [], []
        for snr in snrs:
            for method in methods:
                pts = series(method, snr)
                if not pts:
                    continue
                tag = f"d_{method}_{str(snr).replace('-', 'm').replace('.', 'p')}"
                blocks.append(f"${tag} << EOD")
                blocks.extend(f"{m} {err}" for m, err in pts)
                blocks.append("EOD")
                plot_parts.append(f'${tag} with linespoints title "{method} @ {snr} dB"')
        lines.extend(blocks)
        lines.append("plot " + ", ".join(plot_parts))
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
        return

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, len(snrs), figsize=(5.0 * len(snrs), 4.0), squeeze=False)
    for ax, snr in zip(axes[0], snrs):
        for method in methods:
            pts = series(method, snr)
            if not pts:
                continue
            ms, errs = zip(*pts)
            ax.plot(ms, errs, marker="o", label=method)
        ax.set_yscale("log")
        ax.set_xlabel("array elements")
        ax.set_ylabel("mean absolute error (deg)")
        ax.set_title(f"SNR = {snr} dB")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
