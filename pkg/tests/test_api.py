import pytest
from fastapi.testclient import TestClient

from impsem.main import app

from tests.corpus import EX1, SUM_PROGRAM


@pytest.fixture
def client(monkeypatch):
    monkeypatch.delenv("IMPSEM_FUEL", raising=False)
    return TestClient(app)


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json() == {"message": "impsem API is running"}


def test_health(client):
    assert client.get("/health").json() == {"status": "healthy"}


def test_run(client):
    response = client.post("/run", json={"program": SUM_PROGRAM, "env": "x=0,y=0,n=3"})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "done"
    assert body["env"] == "x=3,y=6,n=3"
    assert body["exit_code"] == 0
    assert "message" not in body


def test_run_out_of_fuel(client):
    response = client.post("/run", json={"program": SUM_PROGRAM, "env": "x=0,y=0,n=3", "fuel": 1})
    assert response.json()["status"] == "out_of_fuel"
    assert response.json()["exit_code"] == 3


def test_vcg(client):
    body = client.post("/vcg", json={"program": EX1, "post": "pp(y,n)"}).json()
    assert body["status"] == "no_counterexample"
    assert len(body["conditions"]) == 2
    assert body["precondition"] == "le(x,n) /\\ pp(y,x)"

    body = client.post("/vcg", json={"program": EX1, "post": "pp(x,n)", "samples": 50, "seed": 3}).json()
    assert body["status"] == "counterexample"
    assert body["counterexample"]


def test_absint(client):
    payload = {"program": SUM_PROGRAM, "abenv": "x=[0,0],y=[0,0],n=[3,3]", "verify": True}
    body = client.post("/absint", json=payload).json()
    assert body["status"] == "analyzed"
    assert body["env"] == "x=[3,+inf],y=[0,+inf],n=[3,3]"
    assert body["counterexample"] == []


def test_check(client):
    payload = {"program": "while x < n do [pp(x,y)] x:=x+1; y:=x+y done", "env": "x=0,y=0,n=3"}
    body = client.post("/check", json=payload).json()
    assert body["status"] == "violations"
    assert body["exit_code"] == 5
    assert body["violations"] == [{"path": "root", "assertion": "pp(x,y)"}] * 2


def test_parse_error_is_a_bad_request(client):
    response = client.post("/run", json={"program": "x := := 1"})
    assert response.status_code == 400
    assert response.json()["detail"].startswith("line 1, column 6")


def test_request_validation(client):
    assert client.post("/run", json={"program": "skip", "fuel": -1}).status_code == 422
    assert client.post("/run", json={}).status_code == 422
