import math

import pytest
from fastapi.testclient import TestClient

from groverbench import __version__
from groverbench.service import app

client = TestClient(app)


def test_health():
    body = client.get("/health").json()
    assert body == {"status": "ok", "version": __version__}


def test_prediction_endpoint():
    body = client.get("/grover/prediction", params={"n": 3}).json()
    assert body["k"] == 2
    assert abs(body["probability"] - 0.9453125) < 1e-12
    body = client.get("/grover/prediction",
                      params={"n": 2, "k_policy": "optimal"}).json()
    assert body["k"] == 1
    assert abs(body["probability"] - 1.0) < 1e-15
    body = client.get("/grover/prediction", params={"n": 4, "k": 1}).json()
    assert body["k"] == 1


def test_run_statevector():
    body = client.post("/grover/run", json={"n": 5}).json()
    assert body["marked"] == "11111"
    assert body["k"] == 4
    assert abs(body["marked_probability"] - 0.999182) < 1e-5
    assert body["max_bond_dim"] is None
    assert body["discarded_weight"] is None
    assert body["counts"] is None


def test_run_mps_with_shots():
    body = client.post("/grover/run", json={
        "n": 4, "backend": "mps", "shots": 32, "seed": 6}).json()
    assert body["max_bond_dim"] == 2
    assert body["discarded_weight"] == 0.0
    assert sum(body["counts"].values()) == 32
    assert body["marked_amplitude_sampled"] == pytest.approx(
        math.sqrt(body["counts"].get("1111", 0) / 32))


def test_run_validation_errors():
    assert client.post("/grover/run",
                       json={"n": 2, "precision": "f16"}).status_code == 422
    assert client.post("/grover/run",
                       json={"n": 3, "marked": "01"}).status_code == 422
    assert client.post("/grover/run",
                       json={"n": 2, "backend": "gpu"}).status_code == 422
    # Pydantic-level type errors are also 422.
    assert client.post("/grover/run",
                       json={"n": "many"}).status_code == 422


def test_run_capacity_is_413():
    assert client.post("/grover/run", json={"n": 40}).status_code == 413


def test_sweep_roundtrip_with_nulls():
    body = client.post("/bench/sweep", json={
        "experiment": "runtime", "n_min": 3, "n_max": 3,
        "modes": ["iterative"], "seed": 8}).json()
    assert not body["partial"]
    assert body["skipped"] == []
    assert len(body["records"]) == 2
    sv_row = next(r for r in body["records"] if r["backend"] == "sv")
    mps_row = next(r for r in body["records"] if r["backend"] == "mps")
    # NaN never crosses the wire; optional measurements are null.
    assert sv_row["max_bond_dim"] is None
    assert sv_row["marked_amplitude_sampled"] is None
    assert mps_row["max_bond_dim"] == 2.0
    assert mps_row["discarded_weight"] == 0.0


def test_sweep_partial_flag(monkeypatch):
    monkeypatch.setenv("GROVERBENCH_SV_CAP", "3")
    body = client.post("/bench/sweep", json={
        "experiment": "runtime", "n_min": 3, "n_max": 4,
        "backends": ["sv"], "modes": ["iterative"]}).json()
    assert body["partial"]
    assert len(body["skipped"]) == 1
    assert len(body["records"]) == 2
    skipped_row = next(r for r in body["records"] if r["n"] == 4)
    assert skipped_row["wall_time_seconds"] is None


def test_sweep_validation_errors():
    assert client.post("/bench/sweep", json={
        "experiment": "runtime", "n_min": 5, "n_max": 3}).status_code == 422
    assert client.post("/bench/sweep", json={
        "experiment": "sideways", "n_min": 2, "n_max": 3}).status_code == 422
    assert client.post("/bench/sweep", json={
        "experiment": "shots", "n_min": 2, "n_max": 3,
        "shots": []}).status_code == 422
