"""Snapshot tool against a mocked API."""

import json

import pytest

from lmfdbsnap.cli import main
from lmfdbsnap.snapshot import Client, build_record, fetch
from lmfdbsnap.unitgens import unit_generators

UPSTREAM = {
    "1.12.a.a": {
        "form": {"label": "1.12.a.a", "level": 1, "weight": 12,
                 "field_poly": [0, 1]},
        "hecke": {"label": "1.12.a.a", "hecke_ring_power_basis": True,
                  "hecke_ring_character_values": None,
                  "ap": [[-24], [252], [4830], [-16744], [534612]]},
    },
    "5.4.a.a": {
        "form": {"label": "5.4.a.a", "level": 5, "weight": 4,
                 "field_poly": [0, 1]},
        "hecke": {"label": "5.4.a.a", "hecke_ring_power_basis": True,
                  "hecke_ring_character_values": None,
                  "ap": [[1], [-8], [0], [6], [-28]]},
    },
    "7.3.b.a": {
        "form": {"label": "7.3.b.a", "level": 7, "weight": 3,
                 "field_poly": [0, 1]},
        "hecke": {"label": "7.3.b.a", "hecke_ring_power_basis": True,
                  "hecke_ring_character_values": [[3, [-1]]],
                  "ap": [[-3], [-2], [0], [0], [6]]},
    },
    "13.2.e.a": {
        "form": {"label": "13.2.e.a", "level": 13, "weight": 2,
                 "field_poly": [3, 3, 1]},  # x^2 + 3x + 3, root = a_2
        "hecke": {"label": "13.2.e.a", "hecke_ring_power_basis": True,
                  # chi(2) = a_2^2 + 2 a_2 + 1 has order 6 mod x^2+3x+3
                  "hecke_ring_character_values": [[2, [1, 2]]],
                  "ap": [[0, 1], [-2, -2], [1, 2], [-1, -2], [-3, -2]]},
    },
}


class FakeResponse:
    def __init__(self, data):
        self._data = data

    def raise_for_status(self):
        pass

    def json(self):
        return {"data": self._data}


class FakeSession:
    def __init__(self):
        self.calls = []

    def get(self, url, params=None, timeout=None):
        self.calls.append((url, dict(params)))
        table = url.rstrip("/").rsplit("/", 1)[-1]
        label = params.get("label")
        if label is not None:
            entry = UPSTREAM.get(label)
            if entry is None:
                return FakeResponse([])
            key = "form" if table == "mf_newforms" else "hecke"
            return FakeResponse([entry[key]])
        # search query
        n_max = int(params["level"].removeprefix("le"))
        k_max = int(params["weight"].removeprefix("le"))
        rows = [{"label": lab, "level": e["form"]["level"]}
                for lab, e in UPSTREAM.items()
                if e["form"]["level"] <= n_max and e["form"]["weight"] <= k_max]
        return FakeResponse(rows)


def fake_client():
    return Client(rate_s=0, session=FakeSession())


def test_fetch_by_labels():
    fixture, manifest = fetch(fake_client(), labels=["5.4.a.a", "7.3.b.a"])
    assert sorted(r["label"] for r in fixture["records"]) == \
        ["5.4.a.a", "7.3.b.a"]
    assert manifest.errors == {}
    assert sorted(manifest.labels) == ["5.4.a.a", "7.3.b.a"]
    assert manifest.to_json()["schema_version"] == 1


def test_anchor_value_and_primary_validation():
    fixture, manifest = fetch(fake_client(), labels=["1.12.a.a"])
    rec = fixture["records"][0]
    assert rec["weight"] == 12 and rec["level"] == 1
    assert rec["ap"]["2"] == [-24]
    galoisfinder = pytest.importorskip("galoisfinder.newforms")
    records = galoisfinder.load(fixture)
    assert records[0].label == "1.12.a.a"


def test_character_values_reexpressed():
    entry = UPSTREAM["7.3.b.a"]
    rec = build_record("7.3.b.a", entry["form"], entry["hecke"])
    gens, _ = unit_generators(7)
    assert rec["char"]["gen_values_order"] == list(gens)
    assert rec["char"]["gen_values"] == [[-1]]


def test_irrational_character_values():
    entry = UPSTREAM["13.2.e.a"]
    rec = build_record("13.2.e.a", entry["form"], entry["hecke"])
    gens, _ = unit_generators(13)
    assert gens == (2,)
    assert rec["char"]["gen_values"] == [[1, 2]]
    assert rec["ap"]["2"] == [0, 1]


def test_malformed_and_unknown_labels():
    fixture, manifest = fetch(fake_client(),
                              labels=["x.y", "99.2.a.a", "1.12.a.a"])
    assert [r["label"] for r in fixture["records"]] == ["1.12.a.a"]
    assert set(manifest.errors) == {"x.y", "99.2.a.a"}
    # manifest label set equals fixture label set
    assert sorted(manifest.labels) == ["1.12.a.a"]


def test_search_query():
    fixture, manifest = fetch(fake_client(), n_max=5, k_max=12)
    assert sorted(r["label"] for r in fixture["records"]) == \
        ["1.12.a.a", "5.4.a.a"]
    assert manifest.query == {"n_max": 5, "k_max": 12}


def test_fetch_needs_query():
    with pytest.raises(ValueError):
        fetch(fake_client())


def test_cli_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setattr("lmfdbsnap.cli.Client",
                        lambda **kw: fake_client())
    out = tmp_path / "fixture.json"
    man = tmp_path / "manifest.json"
    rc = main(["--labels", "1.12.a.a", "5.4.a.a", "--out", str(out),
               "--manifest", str(man), "--rate", "0"])
    assert rc == 0
    fixture = json.loads(out.read_text())
    manifest = json.loads(man.read_text())
    assert sorted(manifest["labels"]) == \
        sorted(r["label"] for r in fixture["records"])
    rc = main(["--labels", "x.y", "--out", str(out), "--manifest", str(man)])
    assert rc == 1
    assert json.loads(man.read_text())["errors"]


def test_rate_limiter(monkeypatch):
    sleeps = []
    monkeypatch.setattr("lmfdbsnap.snapshot.time.sleep",
                        lambda s: sleeps.append(s))
    client = Client(rate_s=10.0, session=FakeSession())
    client.newform("1.12.a.a")
    client.hecke_data("1.12.a.a")
    assert sleeps and all(0 < s <= 10.0 for s in sleeps)
