import json
import os
import shutil

import numpy as np
import pytest
from scipy import stats

from main import run
from services.datasets import DATA_DIR
from transport.kernels import SquaredExponential, gram
from transport.stack import LayerStack, stack_nll
from transport.types import MetricsReport
from transport.types.config import CovarianceConfig, StackConfig
from utils import format_series, read_series

from .model_file import build_model_file, read_model, write_model

FAST_TRAIN = {"iterations": 10, "batch_size": 8, "polish_iterations": 5, "restarts": 2, "trace_every": 5}


def toy_series(n=16, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(float(n))
    y = np.sin(0.6 * t) + 0.1 * rng.normal(size=n)
    return t, y


def gp_config(noise=0.2, **train):
    payload = {
        "covariance": {
            "kernel": {"family": "squared_exponential", "sigma": 1.0, "rate": 0.5},
            "noise": noise,
        },
        "train": train or FAST_TRAIN,
    }
    return payload


@pytest.fixture
def files(tmp_path):
    t, y = toy_series()
    data = tmp_path / "toy.csv"
    data.write_text(format_series(t, y), encoding="utf-8")
    config = tmp_path / "config.json"
    config.write_text(json.dumps(gp_config()), encoding="utf-8")
    return tmp_path, data, config


def fit_model(tmp_path, data, config, name="model.json", seed=3):
    out = tmp_path / name
    code = run(["fit", "--data", str(data), "--config", str(config), "--out", str(out), "--seed", str(seed)])
    assert code == 0
    return out


# --- fit / nll -----------------------------------------------------------------


def test_fit_writes_model_and_report(files, capsys):
    tmp_path, data, config = files
    out = fit_model(tmp_path, data, config)
    model = read_model(out)
    assert model.fit_report is not None
    assert model.fit_report.final_nll <= model.fit_report.initial_nll
    assert len(model.data.t) == 16
    report = json.loads(capsys.readouterr().out)
    assert report["final_nll"] == model.fit_report.final_nll


def test_fixed_seed_gives_identical_hash(files):
    tmp_path, data, config = files
    a = read_model(fit_model(tmp_path, data, config, "a.json"))
    b = read_model(fit_model(tmp_path, data, config, "b.json"))
    assert a.hash == b.hash


def test_fit_missing_file_exits_2(files):
    tmp_path, _, config = files
    code = run(["fit", "--data", str(tmp_path / "absent.csv"), "--config", str(config), "--out", str(tmp_path / "m.json")])
    assert code == 2


def test_fit_bad_config_exits_3(files):
    tmp_path, data, _ = files
    bad = gp_config()
    bad["covariance"]["bandwidth"] = 3.0
    code = run(["fit", "--data", str(data), "--config", json.dumps(bad), "--out", str(tmp_path / "m.json")])
    assert code == 3


def test_fit_malformed_json_exits_2(files):
    tmp_path, data, _ = files
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    code = run(["fit", "--data", str(data), "--config", str(broken), "--out", str(tmp_path / "m.json")])
    assert code == 2


def test_nll_round_trip(files, capsys):
    tmp_path, data, config = files
    out = fit_model(tmp_path, data, config)
    capsys.readouterr()
    assert run(["nll", "--model", str(out)]) == 0
    printed = float(capsys.readouterr().out.strip())
    model = read_model(out)
    assert printed == pytest.approx(model.fit_report.final_nll, abs=1e-9)
    assert printed == pytest.approx(stack_nll(LayerStack.from_config(model.config), model.t, model.y).value, abs=1e-9)


def test_nll_matches_gp_oracle(tmp_path, capsys):
    t, y = toy_series(n=10, seed=4)
    config = StackConfig(covariance=CovarianceConfig(kernel=SquaredExponential(sigma=1.3, rate=0.4), noise=0.3))
    path = tmp_path / "gp.json"
    write_model(path, build_model_file(config, t, y))
    assert run(["nll", "--model", str(path)]) == 0
    K = gram(config.covariance.effective_kernel(), t, t)
    expected = -stats.multivariate_normal(mean=np.zeros(t.size), cov=K).logpdf(y)
    assert float(capsys.readouterr().out.strip()) == pytest.approx(expected, abs=1e-8)


def test_corrupted_hash_exits_3(files):
    tmp_path, data, config = files
    out = fit_model(tmp_path, data, config)
    payload = json.loads(out.read_text(encoding="utf-8"))
    payload["data"]["y"][0] += 1.0
    out.write_text(json.dumps(payload), encoding="utf-8")
    assert run(["nll", "--model", str(out)]) == 3


# --- sample ----------------------------------------------------------------------


def test_sample_reproduces_noiseless_data(tmp_path):
    t = np.arange(5.0)
    y = np.array([0.3, -0.2, 0.8, 1.1, -0.4])
    config = StackConfig(covariance=CovarianceConfig(kernel=SquaredExponential(sigma=1.0, rate=0.5)))
    model = tmp_path / "model.json"
    write_model(model, build_model_file(config, t, y))
    inputs = tmp_path / "inputs.csv"
    inputs.write_text("t\n1\n3\n", encoding="utf-8")
    out = tmp_path / "samples.csv"
    assert run(["sample", "--model", str(model), "--inputs", str(inputs), "--n", "200", "--out", str(out)]) == 0

    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,sample_id,value"
    assert len(lines) == 1 + 200 * 2
    quantiles = (tmp_path / "samples_quantiles.csv").read_text(encoding="utf-8").splitlines()
    assert quantiles[0] == "t,mean,q025,q50,q975"
    q50 = np.array([float(row.split(",")[3]) for row in quantiles[1:]])
    np.testing.assert_allclose(q50, y[[1, 3]], atol=1e-6)


def test_sample_grid_and_zero_samples(files):
    tmp_path, data, config = files
    model = fit_model(tmp_path, data, config)
    out = tmp_path / "grid.csv"
    assert run(["sample", "--model", str(model), "--grid", "0,15,7", "--n", "20", "--out", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 1 + 20 * 7
    assert run(["sample", "--model", str(model), "--grid", "0,15,7", "--n", "0", "--out", str(out)]) == 3


# --- diagnose --------------------------------------------------------------------


def test_diagnose_student_t_closed_form(capsys):
    spec = json.dumps({"kind": "student_t", "theta": 1.0, "rho": 0.0})
    assert run(["diagnose", "--copula", spec, "--n", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["closed_form"] == pytest.approx([1 - 1 / np.sqrt(2)] * 2, abs=1e-5)
    assert report["empirical"] == {}


def test_diagnose_heavy_student_t_with_default_pairs(capsys):
    spec = json.dumps({"kind": "student_t", "theta": 1, "rho": 0})
    assert run(["diagnose", "--copula", spec]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pairs"] == 100_000
    lower, upper = report["empirical"]["0.01"]
    assert lower > 0.15 and upper > 0.15


def test_diagnose_empirical_separates_tails(capsys):
    assert run(["diagnose", "--copula", '{"kind": "gaussian", "rho": 0.5}', "--n", "50000", "--seed", "1"]) == 0
    gaussian = json.loads(capsys.readouterr().out)
    assert gaussian["closed_form"] == [0.0, 0.0]
    assert gaussian["pairs"] == 50000
    assert set(gaussian["empirical"]) == {"0.01", "0.005", "0.001"}
    assert run(["diagnose", "--copula", '{"kind": "student_t", "theta": 1, "rho": 0.5}', "--n", "50000"]) == 0
    student = json.loads(capsys.readouterr().out)
    assert student["empirical"]["0.01"][0] > gaussian["empirical"]["0.01"][0]


def test_diagnose_independence_and_model(files, capsys):
    assert run(["diagnose", "--copula", '{"kind": "archimedean", "generator": "independence"}', "--n", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["closed_form"] == [0.0, 0.0]
    tmp_path, data, config = files
    model = fit_model(tmp_path, data, config)
    capsys.readouterr()
    assert run(["diagnose", "--model", str(model), "--n", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["copula"] == "gaussian"


# --- benchmark / fetch -----------------------------------------------------------


def test_benchmark_on_a_file(tmp_path, capsys):
    t = np.arange(40.0)
    y = 20 + 10 * np.sin(2 * np.pi * t / 11) + np.random.default_rng(0).normal(size=40)
    data = tmp_path / "series.csv"
    data.write_text(format_series(t, y), encoding="utf-8")
    out = tmp_path / "metrics.csv"
    train = json.dumps({"iterations": 2, "polish_iterations": 1, "restarts": 1})
    args = ["benchmark", "--dataset", str(data), "--splits", "2", "--train-frac", "0.3", "--samples", "10"]
    report = tmp_path / "report.json"
    assert run(args + ["--train", train, "--out", str(out), "--report", str(report)]) == 0
    rows = out.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "split,model,mse,mae,ese,eae,train_nll"
    assert len(rows) == 1 + 2 * 2
    table = capsys.readouterr().out
    assert "ESE" in table and "warm-start NLL check" in table
    saved = MetricsReport.model_validate_json(report.read_text(encoding="utf-8"))
    assert set(saved.paired_wins) == {"mse", "mae", "ese", "eae"}
    assert all(0 <= wins <= 2 for wins in saved.paired_wins.values())
    assert set(saved.warm_start_ok) == {0, 1}
    assert all(saved.warm_start_ok.values())


@pytest.mark.slow
@pytest.mark.skipif(not os.environ.get("TP_SLOW_TESTS"), reason="set TP_SLOW_TESTS=1 to run the full Sunspots benchmark")
def test_sunspots_student_t_beats_warped_gp(tmp_path):
    report = tmp_path / "sunspots.json"
    args = ["benchmark", "--dataset", str(DATA_DIR / "sunspots.csv"), "--splits", "10", "--report", str(report)]
    assert run(args) == 0
    saved = MetricsReport.model_validate_json(report.read_text(encoding="utf-8"))
    assert len(saved.warm_start_ok) == 10
    assert all(saved.warm_start_ok.values())
    assert saved.paired_wins["ese"] >= 6


def test_fetch_from_cache(tmp_path):
    cache = tmp_path / "cache"
    cache.mkdir()
    shutil.copy(DATA_DIR / "sunspots.csv", cache / "sunspots.csv")
    out = tmp_path / "sunspots.csv"
    assert run(["fetch", "--name", "sunspots", "--cache-dir", str(cache), "--out", str(out)]) == 0
    t, _ = read_series(out)
    assert t.size == 309


def test_fetch_several_into_a_directory(tmp_path, capsys):
    cache = tmp_path / "cache"
    cache.mkdir()
    shutil.copy(DATA_DIR / "sunspots.csv", cache / "sunspots.csv")
    quarters = np.arange(203.0)
    (cache / "tb3ms.csv").write_text(format_series(1959 + quarters / 4, np.full(203, 2.5)), encoding="utf-8")
    out_dir = tmp_path / "datasets"
    names = ["sunspots", "tb3ms", "sunspots"]
    assert run(["fetch", "--name", *names, "--cache-dir", str(cache), "--out-dir", str(out_dir)]) == 0
    assert sorted(p.name for p in out_dir.iterdir()) == ["sunspots.csv", "tb3ms.csv"]
    assert read_series(out_dir / "tb3ms.csv")[0].size == 203
    assert len(capsys.readouterr().out.splitlines()) == 2
    out = str(tmp_path / "one.csv")
    assert run(["fetch", "--name", "sunspots", "tb3ms", "--cache-dir", str(cache), "--out", out]) == 3
