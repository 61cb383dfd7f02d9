import pytest
from fastapi.testclient import TestClient

from paradox.errors import NonConvergenceError
from paradox.main import app
from paradox.routers import analysis

client = TestClient(app)


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_table1():
    response = client.get("/table1", params={"alphas": [0.05, 0.02]})
    assert response.status_code == 200
    rows = response.json()["rows"]
    assert len(rows) == 2
    assert abs(rows[0]["lindley_min_n"] - 105_685) <= 1
    assert abs(rows[1]["conjugate_min_n"] - 537_952) <= 1


def test_figure1_panel_b():
    rows = client.get("/figure1/B").json()["rows"]
    assert rows[0]["tau"] == 1.0
    assert rows[0]["posterior_h0"] == pytest.approx(0.3129, abs=5e-4)


def test_figure1_unknown_panel():
    assert client.get("/figure1/C").status_code == 404


def test_zone():
    payload = client.post("/zone", json={"n": 1_000_000}).json()
    assert payload["inputs"]["command"] == "zone"
    assert payload["rows"][0]["z_hi"] == pytest.approx(3.717, abs=1e-3)


def test_analyze():
    response = client.post("/analyze", json={"n": 1_000_000, "z": 1.96, "delta": 0.3})
    assert response.status_code == 200
    assert response.json()["result"]["classification"]["label"] == "jl-conflict"


def test_simulate_is_reproducible():
    body = {"n": 1_000_000, "reps": 20_000, "seed": 5}
    first = client.post("/simulate", json=body).json()
    second = client.post("/simulate", json={**body, "workers": 2}).json()
    assert first == second


def test_calibrate():
    rows = client.post("/calibrate", json={"n": 100, "z": 2.5, "grid": "1e4:1e6:2"}).json()["rows"]
    assert rows[-1]["posterior_odds"] == pytest.approx(0.4394, rel=0.01)


def test_usage_error_is_422():
    response = client.post("/analyze", json={"n": 100, "z": 1.96})
    assert response.status_code == 422
    assert response.json()["detail"]["type"] == "UsageError"


def test_domain_error_is_422():
    response = client.post("/zone", json={"n": 100, "c": 1.5})
    assert response.status_code == 422
    assert response.json()["detail"]["exit_code"] == 4


def test_unknown_field_is_422():
    assert client.post("/zone", json={"n": 100, "colour": "blue"}).status_code == 422


def test_command_mismatch_is_422():
    assert client.post("/zone", json={"n": 100, "command": "simulate"}).status_code == 422


def test_convergence_error_is_500(monkeypatch):
    def stalled(run_config):
        raise NonConvergenceError("root finding stalled", best_estimate=2.0)

    monkeypatch.setattr(analysis, "run_command", stalled)
    response = client.post("/zone", json={"n": 100})
    assert response.status_code == 500
    assert response.json()["detail"]["best_estimate"] == 2.0
