"""
Tests for the HTTP surface.
"""

from unittest.mock import patch

import pytest
from fastapi.testclient import TestClient

from app.config.settings import get_reference_network
from app.main import app, health_check
from app.models.request import CompareRequest
from app.routes.sweep import compare_schemes
from app.services.errors import QuadratureError, SimulationAbortedError


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def network():
    return get_reference_network()


class TestHealth:

    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json()["status"] == "healthy"

    @pytest.mark.asyncio
    async def test_health_handler(self):
        result = await health_check()
        assert result.status == "healthy"


class TestOpenApi:

    @pytest.mark.parametrize("path", ["/api/v1/coverage/analytic", "/api/v1/compare"])
    def test_error_body_documented(self, client, path):
        responses = client.get("/openapi.json").json()["paths"][path]["post"]["responses"]
        for status in ("422", "500"):
            schema = responses[status]["content"]["application/json"]["schema"]
            assert schema["$ref"].endswith("/ErrorResponse")


class TestCoverageRoutes:

    def test_analytic(self, client, network):
        response = client.post("/api/v1/coverage/analytic", json={"network": network, "thresholds_db": [0.0]})
        assert response.status_code == 200
        rows = response.json()["rows"]
        assert len(rows) == 7
        assert all(0.0 <= row["coverage"] <= 1.0 for row in rows)

    def test_unknown_network_key(self, client, network):
        network["bandwidth_hz"] = 1e7
        response = client.post("/api/v1/coverage/analytic", json={"network": network, "thresholds_db": [0.0]})
        assert response.status_code == 422
        assert response.json()["error"] is True

    def test_radius_above_cap(self, client, network):
        network["inner_radius_m"] = 1e5
        response = client.post("/api/v1/coverage/analytic", json={"network": network, "thresholds_db": [0.0]})
        assert response.status_code == 422
        assert "inner_radius_m" in response.json()["message"]

    def test_empty_thresholds(self, client, network):
        response = client.post("/api/v1/coverage/analytic", json={"network": network, "thresholds_db": []})
        assert response.status_code == 422

    def test_quadrature_failure(self, client, network):
        with patch("app.routes.coverage.sweep_service.sweep_threshold", side_effect=QuadratureError("stuck")):
            response = client.post("/api/v1/coverage/analytic", json={"network": network, "thresholds_db": [0.0]})
        assert response.status_code == 500
        body = response.json()
        assert body == {"error": True, "message": "Quadrature failure: stuck", "status_code": 500}

    def test_simulate(self, client, network):
        response = client.post("/api/v1/coverage/simulate", json={
            "network": network, "thresholds_db": [0.0, 5.0], "n_realizations": 100, "seed": 7,
        })
        assert response.status_code == 200
        body = response.json()
        assert body["seed"] == 7
        assert len(body["results"]) == 2
        assert body["results"][0]["overall"]["n_samples"] == 100

    def test_simulation_aborted(self, client, network):
        with patch("app.routes.coverage.mc_service.estimate_coverage", side_effect=SimulationAbortedError("empty")):
            response = client.post("/api/v1/coverage/simulate", json={
                "network": network, "thresholds_db": [0.0], "n_realizations": 100,
            })
        assert response.status_code == 500
        assert response.json()["error"] is True


class TestSweepRoutes:

    def test_inner_radius_sweep(self, client, network):
        response = client.post("/api/v1/sweep/inner-radius", json={
            "network": network, "inner_radii_m": [0.0, 400.0], "threshold_db": 0.0,
        })
        assert response.status_code == 200
        series = response.json()["series"]
        assert series["analytic_overall"][0]["value"] == pytest.approx(series["analytic_uniform"][0]["value"])

    def test_threshold_sweep(self, client, network):
        response = client.post("/api/v1/sweep/threshold", json={"network": network, "thresholds_db": [-5.0, 0.0]})
        assert response.status_code == 200
        assert response.json()["axis_values"] == [-5.0, 0.0]

    def test_optimal_d_with_bounds(self, client, network):
        response = client.post("/api/v1/optimal-d", json={
            "network": network, "threshold_db": 0.0, "d_lo_m": 10.0, "d_hi_m": 50.0,
        })
        assert response.status_code == 200
        assert response.json()["at_boundary"] is True

    def test_compare(self, client, network):
        network["inner_radius_m"] = 500.0
        response = client.post("/api/v1/compare", json={"network": network, "threshold_db": 0.0})
        assert response.status_code == 200
        rows = {row["scheme"]: row["analytic"] for row in response.json()["rows"]}
        assert rows["single_tier"] < rows["uniform"] < rows["coverage_oriented"]

    @pytest.mark.asyncio
    async def test_compare_handler(self, network):
        request = CompareRequest(network=network, threshold_db=0.0)
        result = await compare_schemes(request)
        assert [row.scheme.value for row in result.rows] == ["single_tier", "uniform", "coverage_oriented"]
