import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.routes.toolkit import _TTLCache

client = TestClient(app)


def test_health_and_root():
    assert client.get("/healthz").json() == {"status": "ok"}
    root = client.get("/").json()
    assert root["ok"] is True
    assert "toolkit" in root["routers"]


def test_density_at_point():
    r = client.get("/v1/density", params={"domain": "disk:0,0,2", "at": "1"})
    assert r.status_code == 200
    row = r.json()["rows"][0]
    assert row["mu"] == pytest.approx(4 / 3)
    assert row["d_lambda"] == pytest.approx(2 / 3)


def test_density_scan():
    r = client.get("/v1/density", params={"domain": "punct:1", "scan": 128})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert rows and all(row["eps_mu"] <= 1.0 + 1e-9 for row in rows)


def test_constants_are_cached():
    params = {"domain": "disk:0,0,2"}
    first = client.get("/v1/constants", params=params)
    second = client.get("/v1/constants", params=params)
    assert first.status_code == 200
    assert first.json() == second.json()
    assert first.json()["Chat"] == pytest.approx(4 / 9)


def test_constants_infinite_diameter_is_a_string():
    body = client.get("/v1/constants", params={"domain": "disk:0,0,0.5"}).json()
    assert body["tau_diam_complement"] == "Infinity"


def test_perfectness_endpoints():
    r = client.get("/v1/perfectness", params={"generate": "geom:2,quadratic,6"})
    assert r.status_code == 200
    assert r.json()["k_hat"] == pytest.approx(2.0 ** -11)
    r = client.get("/v1/perfectness", params={"domain": "punct:1", "n": 256})
    assert r.status_code == 200
    assert r.json()["k_hat"] <= 1 / 32
    assert client.get("/v1/perfectness").status_code == 400


def test_example1_endpoint():
    r = client.get("/v1/example1", params={"R": 5})
    assert r.status_code == 200
    assert r.json()["passed"] is True


def test_verify_endpoint():
    r = client.get("/v1/verify", params={"suite": "dlambda_upper", "points": 10})
    assert r.status_code == 200
    body = r.json()
    assert body["passed"] is True
    assert [s["suite"] for s in body["suites"]] == ["dlambda_upper"]


def test_errors_map_to_status_codes():
    r = client.get("/v1/density", params={"domain": "disk:0,0", "at": "0"})
    assert r.status_code == 400
    assert r.json()["detail"]["error"] == "DomainSpecError"
    assert r.json()["detail"]["position"] == 5
    r = client.get("/v1/density", params={"domain": "disk:0,0,1", "at": "2"})
    assert r.status_code == 422
    assert r.json()["detail"]["error"] == "PointNotInDomain"
    r = client.get("/v1/verify", params={"suite": "lemma7"})
    assert r.status_code == 422


def test_cache_is_bounded():
    cache = _TTLCache(600, max_items=3)
    for i in range(5):
        cache.set(f"disk:0,0,{i + 1}", i)
    assert len(cache) == 3
    assert cache.get("disk:0,0,1") is None and cache.get("disk:0,0,2") is None
    assert cache.get("disk:0,0,5") == 4


def test_cache_purges_stale_entries_on_set():
    cache = _TTLCache(-1)
    cache.set("ext:1", 1)
    cache.set("ext:2", 2)
    assert len(cache) == 1
    assert cache.get("ext:2") is None
