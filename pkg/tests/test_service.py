import json

import pytest
from fastapi.testclient import TestClient

from artifact import service
from artifact.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def load(problems_dir, name):
    return json.loads((problems_dir / name).read_text())


def test_health(client):
    assert client.get("/health").json()["status"] == "ok"


def test_genus1_abelian(client, problems_dir):
    r = client.post("/tasks/abelian-integrate", json=load(problems_dir, "genus1.json"))
    assert r.status_code == 200
    item = r.json()["data"]["integrals"][0]
    ab = item["abelian"]
    assert ab["value"] == {"digits": [12, 0, 8, 0, 15, 0, 9, 0, 16, 0, 8, 0], "val": 2, "prec": 14,
                           "uniformizer": "a"}
    assert ab["value_base_p"] == {"digits": [12, 8, 15, 9, 16, 8], "val": 1, "prec": 7, "uniformizer": "17"}
    assert item["alternate"]["homology_difference"] == ["1"]
    assert item["alternate"]["abelian"]["value"] == ab["value"]


def test_skeleton_returns_dot(client, problems_dir):
    r = client.post("/tasks/skeleton", json=load(problems_dir, "genus1.json"))
    body = r.json()
    assert set(body["dot"]) == {"T.dot", "Gamma.dot"}
    assert body["data"]["genus"] == 1


def test_precision_override(client, problems_dir):
    r = client.post("/tasks/periods", json=load(problems_dir, "genus1.json"), params={"precision": 8})
    per = r.json()["data"]["periods"][0][0]
    assert per["precision"] == 8 and per["value"]["digits"] == [10, 0, 12, 0, 9, 0]


def test_schema_error(client):
    r = client.post("/tasks/cover", json={"field": {"p": 7}})
    assert r.status_code == 422 and r.json()["exit_code"] == 2


def test_unknown_task(client, problems_dir):
    r = client.post("/tasks/frobnicate", json=load(problems_dir, "genus1.json"))
    assert r.json()["exit_code"] == 2


def test_missing_endpoints(client, problems_dir):
    prob = load(problems_dir, "genus1.json")
    del prob["end"]
    assert client.post("/tasks/abelian-integrate", json=prob).json()["exit_code"] == 2


def test_math_precondition(client, problems_dir):
    prob = load(problems_dir, "genus1.json")
    prob["curve"]["roots"] = ["6", "6", "-11"]
    r = client.post("/tasks/cover", json=prob)
    assert r.status_code == 409 and r.json()["exit_code"] == 3


def test_point_off_curve(client, problems_dir):
    prob = load(problems_dir, "genus1.json")
    prob["start"]["y"] = "7"
    assert client.post("/tasks/bc-integrate", json=prob).json()["exit_code"] == 3


def test_precision_exhausted(client, problems_dir, monkeypatch):
    def starved(problem, N, work):
        return {}, {}, [service.field_of(problem, N).zero(N - 1)]

    monkeypatch.setitem(service.HANDLERS, "periods", starved)
    r = client.post("/tasks/periods", json=load(problems_dir, "genus1.json"))
    assert r.status_code == 507 and r.json()["exit_code"] == 4
