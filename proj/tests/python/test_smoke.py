import math

import numpy as np
import pytest

import mfgp


def test_testbed_matches_closed_form():
    tb = mfgp.generate_testbed(4, "desk")
    X2, Y2, S = tb["designs"][1], tb["outputs"][1], tb["locations"]
    assert Y2.shape == (15, 1000)
    M, D, L = X2[2]
    expect = mfgp.hi_fidelity(M, D, L, 30.0, S[7, 0], S[7, 1])
    assert Y2[2, 7] == pytest.approx(expect, rel=1e-12)
    s1, s2 = 1.0, 20.0
    single = M / math.sqrt(4 * math.pi * D * s2) * math.exp(-s1 * s1 / (4 * D * s2))
    assert mfgp.hi_fidelity(M, D, L, 30.0, s1, s2) == pytest.approx(math.sqrt(4 * math.pi) * single, rel=1e-13)


def synthetic(seed=0):
    rng = np.random.default_rng(seed)
    X1 = rng.uniform(size=(14, 2))
    X2 = X1[:7].copy()
    S = np.column_stack([np.linspace(0, 1, 25), np.zeros(25)])

    def field(X, hi):
        base = np.sin(3 * X[:, :1] + 2 * S[:, 0]) * (1 + X[:, 1:2])
        return base + (0.3 * X[:, :1] * S[:, 0] if hi else 0.0)

    return [X1, X2], [field(X1, False), field(X2, True)], S, field


def test_sep_interpolates_and_summarizes():
    designs, outputs, S, _ = synthetic()
    fit = mfgp.fit_sep(designs, outputs, S, neighbors_p=2, iterations=300, burn_in=50, seed=3)
    assert len(fit.theta_map) == 2
    np.testing.assert_allclose(fit.predict_mean(designs[1][3]), outputs[1][3], atol=1e-6)
    summary = fit.predict(designs[1][:2], samples=200, seed=5)
    assert summary["mean"].shape == (2, 25)
    np.testing.assert_allclose(summary["q975"] - summary["q025"], 0.0, atol=1e-6)


def test_nonsep_predictions_and_metrics():
    designs, outputs, S, field = synthetic(1)
    fit = mfgp.fit_nonsep(designs, outputs, S, components=3, iterations=300, burn_in=50, seed=2)
    assert fit.explained[1].sum() == pytest.approx(1.0)
    X0 = np.random.default_rng(9).uniform(size=(4, 2))
    summary = fit.predict(X0, samples=300, seed=1, threads=2)
    assert np.all(summary["q025"] <= summary["q975"])
    metrics = mfgp.compute_metrics(field(X0, True), summary)
    assert 0.0 <= metrics["cvg95"] <= 100.0
    assert metrics["rmspe"] >= 0.0


def test_invalid_input_raises():
    designs, outputs, S, _ = synthetic()
    with pytest.raises(ValueError):
        mfgp.fit_sep(designs, outputs[:1], S)


def test_cli_entry(tmp_path):
    code, out, err = mfgp.run_cli(
        ["gen-testbed", "--preset", "desk", "--seed", "2", "--out", str(tmp_path / "tb")]
    )
    assert code == 0, err
    assert (tmp_path / "tb" / "manifest.json").exists()
    code, _, err = mfgp.run_cli(["fit", "--config", str(tmp_path / "missing.json")])
    assert code == 2
