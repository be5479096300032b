import pytest
from fastapi.testclient import TestClient

from cech.complex import make_boundary_simplex
from common import __version__
from descent.fixtures import break_psi, restricted_global
from gateway_api.main import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/v1/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "version": __version__}


def test_run_cohomology_inline(client):
    body = {"command": "cohomology", "degree": 4, "input": make_boundary_simplex(4).to_json()}
    response = client.post("/v1/run", json=body)
    assert response.status_code == 200
    report = response.json()
    assert report["status"] == "ok"
    assert report["version"] == __version__
    assert (report["result"]["betti"], report["result"]["torsion"]) == (1, [])


def test_run_glue_inline(client, rng):
    datum, _ = restricted_global(rng)
    response = client.post("/v1/run", json={"command": "glue", "input": datum.to_json()})
    assert response.status_code == 200
    assert response.json()["result"]["passed"] is True


def test_invalid_datum_is_422(client, rng):
    datum, _ = restricted_global(rng)
    broken, _, _ = break_psi(datum)
    response = client.post("/v1/run", json={"command": "glue", "input": broken.to_json()})
    assert response.status_code == 422
    assert response.json()["detail"]["status"] == "validation_failure"


@pytest.mark.parametrize(
    "body",
    [
        {"command": "frobnicate"},
        {"command": "pi2-demo", "grid": 6},
        {"command": "pontryagin", "tol": -1.0},
    ],
)
def test_bad_options_are_422(client, body):
    assert client.post("/v1/run", json=body).status_code == 422


def test_missing_input_is_422(client):
    response = client.post("/v1/run", json={"command": "cohomology"})
    assert response.status_code == 422
    assert response.json()["detail"]["error"]["error"] == "SchemaError"


def test_pontryagin_trivial_bundle(client):
    response = client.post("/v1/run", json={"command": "pontryagin", "k": 0, "grid": 16})
    assert response.status_code == 200
    assert response.json()["result"]["pairing"] == 0
