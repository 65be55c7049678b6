import json

import numpy as np
import pytest

from hankelfit.bench import (
    CSV_HEADER,
    ExperimentConfig,
    TrialRecord,
    emit_csv,
    emit_plot,
    parse_csv,
    run_experiment,
    summarize,
)
from hankelfit.noise import FaultSpec, NoiseModel


def small_config(**overrides):
    base = dict(
        m_list=(8,),
        snr_db_list=(5.0,),
        noise=NoiseModel.white(1.0),
        trials=6,
        methods=("r1h_l2", "max_energy", "matrix_pencil"),
        master_seed=99,
        theta_step=0.5,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_run_experiment_shape_and_order():
    cfg = small_config()
    records, summaries = run_experiment(cfg)
    assert len(records) == 6 * 3
    # cell-major then trial order
    assert [r.method for r in records[:6]] == ["r1h_l2"] * 6
    assert all(r.m == 8 and r.d == 4 for r in records)
    assert len(summaries) == 3
    for s in summaries:
        assert s.n_ok + s.n_failed == cfg.trials


def test_same_noise_realization_across_methods():
    records, _ = run_experiment(small_config())
    by_trial = {}
    for r in records:
        by_trial.setdefault(r.seed, set()).add((r.theta0,))
    assert len(by_trial) == 6  # one seed per trial, shared by all methods
    assert all(len(v) == 1 for v in by_trial.values())


def test_thread_count_does_not_change_results(tmp_path):
    cfg = small_config()
    rec1, _ = run_experiment(cfg, threads=1)
    rec8, _ = run_experiment(cfg, threads=8)
    p1, p8 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(rec1, p1)
    emit_csv(rec8, p8)
    assert p1.read_bytes() == p8.read_bytes()


def test_failures_recorded_not_dropped():
    # window length 1 starves the pencil of its shifted pair on every trial
    cfg = small_config(m_list=(2,), methods=("matrix_pencil", "max_energy"), trials=4)
    records, summaries = run_experiment(cfg)
    pencil = [r for r in records if r.method == "matrix_pencil"]
    assert len(pencil) == 4 and not any(r.ok for r in pencil)
    assert all(np.isnan(r.theta_hat) for r in pencil)
    cell = [s for s in summaries if s.method == "matrix_pencil"][0]
    assert cell.n_failed == 4 and cell.n_ok == 0
    good = [s for s in summaries if s.method == "max_energy"][0]
    assert good.n_ok == 4


def test_fixed_theta_policy():
    cfg = small_config(theta0_policy="fixed", theta0_value=12.5, trials=3)
    records, _ = run_experiment(cfg)
    assert all(r.theta0 == 12.5 for r in records)


def test_abs_error_range():
    records, _ = run_experiment(small_config())
    for r in records:
        if r.ok:
            assert 0.0 <= r.abs_err <= 180.0


def test_csv_round_trip(tmp_path):
    records, _ = run_experiment(small_config(trials=3))
    path = tmp_path / "out.csv"
    emit_csv(records, path)
    back = parse_csv(path)
    assert len(back) == len(records)
    for a, b in zip(records, back):
        assert a.csv_fields() == b.csv_fields()


def test_csv_empty_and_single(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path)
    assert path.read_text() == CSV_HEADER + "\n"
    assert parse_csv(path) == []

    rec = TrialRecord("r1h_l2", 8, 4, 0.0, "white_gaussian", 1.0, 1.5, 0.5, 7, True)
    emit_csv([rec], path)
    assert len(path.read_text().splitlines()) == 2


def test_csv_full_precision(tmp_path):
    theta = 1.0 / 3.0
    rec = TrialRecord("r1h_l2", 8, 4, 0.0, "white_gaussian", theta, theta, 0.0, 7, True)
    path = tmp_path / "prec.csv"
    emit_csv([rec], path)
    assert parse_csv(path)[0].theta0 == theta  # bit-exact round trip


def test_emit_csv_bad_path():
    with pytest.raises(OSError):
        emit_csv([], "/nonexistent-dir/x/y.csv")


def test_fault_injection_runs_through_bench():
    cfg = small_config(
        m_list=(8,),
        methods=("r1h_l1",),
        trials=2,
        fault=FaultSpec(faulty_sensors={1, 5}, alpha_db=10.0),
        l1_two_stage=False,
        theta_step=1.0,
    )
    records, _ = run_experiment(cfg)
    assert all(r.ok for r in records)


def test_summarize_means():
    recs = [
        TrialRecord("m", 4, 2, 0.0, "white_gaussian", 0, 1.0, 1.0, 1, True),
        TrialRecord("m", 4, 2, 0.0, "white_gaussian", 0, 3.0, 3.0, 2, True),
        TrialRecord("m", 4, 2, 0.0, "white_gaussian", 0, np.nan, np.nan, 3, False),
    ]
    s = summarize(recs)[0]
    assert s.mean_abs_err == pytest.approx(2.0)
    assert s.n_ok == 2 and s.n_failed == 1


def test_emit_plot_svg(tmp_path):
    _, summaries = run_experiment(small_config(trials=2, m_list=(8,)))
    path = tmp_path / "plot.svg"
    emit_plot(summaries, path, fmt="svg")
    text = path.read_text()
    assert "<svg" in text
    assert "mean absolute error" in text


def test_emit_plot_gnuplot_two_series(tmp_path):
    _, summaries = run_experiment(small_config(trials=2, methods=("r1h_l2", "max_energy")))
    path = tmp_path / "plot.gp"
    emit_plot(summaries, path, fmt="gnuplot_script")
    text = path.read_text()
    assert "set logscale y" in text and "plot " in text
    assert "r1h_l2" in text and "max_energy" in text


def test_emit_plot_validation(tmp_path):
    with pytest.raises(ValueError):
        emit_plot([], tmp_path / "x.svg")
    _, summaries = run_experiment(small_config(trials=1))
    with pytest.raises(ValueError):
        emit_plot(summaries, tmp_path / "x.bmp", fmt="bmp")


def test_config_json_loading(tmp_path):
    raw = {
        "schema_version": 1,
        "m_list": [8, 16],
        "snr_db_list": [0.0, 10.0],
        "noise": {"kind": "bernoulli_gaussian", "p": 0.1, "sigma1_2": 1.0, "sigma2_2": 200.0},
        "trials": 2,
        "methods": ["r1h_l2"],
        "master_seed": 5,
        "theta_step": 1.0,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(raw))
    cfg = ExperimentConfig.from_json(path)
    assert cfg.m_list == (8, 16)
    assert cfg.noise.kind == "bernoulli_gaussian"
    assert cfg.d_for(1) == 8

    raw["schema_version"] = 99
    path.write_text(json.dumps(raw))
    with pytest.raises(ValueError):
        ExperimentConfig.from_json(path)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(methods=("nope",))
    with pytest.raises(ValueError):
        small_config(trials=0)
    with pytest.raises(ValueError):
        small_config(m_list=())
    with pytest.raises(ValueError):
        small_config(d_list=(4, 4))  # length mismatch with m_list
    with pytest.raises(ValueError):
        small_config(theta0_policy="gaussian")
