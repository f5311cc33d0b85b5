"""Smoke tests for the python extension (built into the CMake tree)."""

import json
import math
import os
import subprocess
import tempfile

import numpy as np
import pytest

_core = pytest.importorskip("_core")


def test_pg_mean_and_samples():
    assert _core.pg_mean(1.0, 0.0) == pytest.approx(0.25)
    assert _core.pg_mean(2.0, 3.0) == pytest.approx(math.tanh(1.5) / 3.0)
    draws = _core.sample_pg(1.0, 0.0, seed=7, n=20000)
    assert draws.shape == (20000,)
    assert draws.mean() == pytest.approx(0.25, abs=0.01)
    with pytest.raises(ValueError):
        _core.sample_pg(-1.0, 0.0, seed=1)


def test_stick_breaking_round_trip():
    psi = np.array([0.3, -1.2, 2.0])
    pi = _core.pi_sb(psi)
    assert pi.shape == (4,)
    assert pi.sum() == pytest.approx(1.0)
    assert np.allclose(_core.pi_sb_inv(pi), psi, atol=1e-10)

    x = np.array([3, 2, 1], dtype=np.int32)
    assert list(_core.residual_counts(x)) == [6, 3]
    assert list(_core.kappa(x)) == [0.0, 0.5]
    ll = _core.log_multinomial_sb(x, np.zeros(2))
    assert math.isfinite(ll)


def test_augmentation_and_evidence():
    x = np.array([1, 0], dtype=np.int32)
    omega = _core.sample_aux(x, np.zeros(1), seed=3)
    assert omega.shape == (1,)
    prec, lin = _core.evidence(x, np.array([0.25]))
    assert lin[0] == pytest.approx(0.5)
    mean, cov = _core.gp_conditional(np.eye(1), np.zeros(1), prec, lin)
    assert mean[0] == pytest.approx(0.4)
    assert cov[0, 0] == pytest.approx(0.8)


def test_sampling_is_deterministic_per_seed():
    a = _core.sample_pg(3.0, 1.5, seed=42, n=100)
    b = _core.sample_pg(3.0, 1.5, seed=42, n=100)
    c = _core.sample_pg(3.0, 1.5, seed=43, n=100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_lds_ffbs_shapes():
    T, D, K = 5, 2, 3
    states = _core.lds_ffbs(
        A=0.9 * np.eye(D),
        B=0.2 * np.eye(D),
        C=np.ones((K - 1, D)),
        mu0=np.zeros(D),
        Sigma0=np.eye(D),
        precision_diag=np.full((T, K - 1), 0.5),
        linear=np.zeros((T, K - 1)),
        seed=11,
    )
    assert states.shape == (T, D)
    assert np.all(np.isfinite(states))


def test_selfcheck_and_runner():
    assert _core.selfcheck()
    with tempfile.TemporaryDirectory() as tmp:
        cfg = os.path.join(tmp, "selfcheck.json")
        with open(cfg, "w") as f:
            json.dump({"model": "selfcheck", "seed": 1}, f)
        assert _core.run_config(cfg) == 0
        assert _core.run_config(os.path.join(tmp, "missing.json")) == 1


def test_cli_binary_if_available():
    cli = os.environ.get("PGMULT_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("CLI binary not exported")
    proc = subprocess.run([cli, "selfcheck"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "selfcheck passed" in proc.stdout
