"""Fetch newform records from the LMFDB API and freeze them as fixtures.

Two upstream tables are consulted per newform orbit:

  /api/mf_newforms   -> label, level, weight, field_poly
  /api/mf_hecke_nf   -> ap (prime-indexed coefficient vectors on the power
                        basis of the coefficient field), and
                        hecke_ring_character_values (pairs [unit, vector]
                        giving the nebentype on a generating set of units)

Only power-basis Hecke rings are supported; anything else is recorded as a
per-label error.  Emitted records follow the fixture schema of the consuming
store: nebentype values are re-expressed on the conventional unit-group
generators, and a_l is kept for primes l <= 11 not dividing the level.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field

import requests

from .unitgens import euler_phi, unit_generators

BASE_URL = "https://www.lmfdb.org"
SCHEMA_VERSION = 1
SMALL_PRIMES = (2, 3, 5, 7, 11)
LABEL_RE = re.compile(r"^(\d+)\.(\d+)\.([a-z]+)\.([a-z]+)$")

# primes in order, enough to index the ap list for l <= 11
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class SnapshotError(Exception):
    pass


@dataclass
class Manifest:
    query: dict
    labels: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)
    retrieved_at: str = ""
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return {"query": self.query, "labels": sorted(self.labels),
                "errors": self.errors, "retrieved_at": self.retrieved_at,
                "schema_version": self.schema_version}


class Client:
    """Sequential API client with a minimum interval between requests."""

    def __init__(self, base_url: str = BASE_URL, rate_s: float = 0.5,
                 session=None):
        self.base_url = base_url.rstrip("/")
        self.rate_s = rate_s
        self.session = session or requests.Session()
        self._last = 0.0

    def _get(self, table: str, params: dict) -> list[dict]:
        wait = self._last + self.rate_s - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        query = dict(params)
        query["_format"] = "json"
        resp = self.session.get(f"{self.base_url}/api/{table}/", params=query,
                                timeout=30)
        self._last = time.monotonic()
        resp.raise_for_status()
        doc = resp.json()
        return doc.get("data", [])

    def newform(self, label: str) -> dict:
        rows = self._get("mf_newforms", {
            "label": label,
            "_fields": "label,level,weight,field_poly"})
        if not rows:
            raise SnapshotError(f"no mf_newforms row for {label}")
        return rows[0]

    def hecke_data(self, label: str) -> dict:
        rows = self._get("mf_hecke_nf", {
            "label": label,
            "_fields": "label,ap,hecke_ring_power_basis,"
                       "hecke_ring_character_values"})
        if not rows:
            raise SnapshotError(f"no mf_hecke_nf row for {label}")
        return rows[0]

    def search_labels(self, n_max: int, k_max: int) -> list[str]:
        rows = self._get("mf_newforms", {
            "level": f"le{n_max}", "weight": f"le{k_max}",
            "_fields": "label,level"})
        return sorted(r["label"] for r in rows if n_max % int(r["level"]) == 0)


# ---------------------------------------------------------------------------
# exact arithmetic in Z[x]/(field_poly)

def _polmod_mul(a: list[int], b: list[int], fp: list[int]) -> list[int]:
    deg = len(fp) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for i in range(len(out) - 1, deg - 1, -1):
        c = out[i]
        if c:
            for j in range(deg + 1):
                out[i - deg + j] -= c * fp[j]
    out = out[:deg]
    return out + [0] * (deg - len(out))


def _polmod_pow(a: list[int], e: int, fp: list[int]) -> list[int]:
    deg = len(fp) - 1
    out = [1] + [0] * (deg - 1)
    base = list(a) + [0] * (deg - len(a))
    while e:
        if e & 1:
            out = _polmod_mul(out, base, fp)
        base = _polmod_mul(base, base, fp)
        e >>= 1
    return out


def _char_values_on_generators(level: int, raw_values, fp: list[int]) -> list[list[int]]:
    """Re-express nebentype values on the conventional generators.

    raw_values is the API's list of [unit, coefficient-vector] pairs on some
    generating set; None or [] means the trivial character.
    """
    gens, _ = unit_generators(level)
    deg = len(fp) - 1
    one = [1] + [0] * (deg - 1)
    if not raw_values:
        return [list(one) for _ in gens]
    units = [int(u) % level for u, _ in raw_values]
    vals = [list(map(int, v)) for _, v in raw_values]
    # walk products of the provided units until the whole group is covered
    table = {1 % level: one}
    frontier = [(1 % level, one)]
    while frontier:
        m, v = frontier.pop()
        for u, uv in zip(units, vals):
            m2 = m * u % level
            if m2 not in table:
                v2 = _polmod_mul(v, uv, fp)
                table[m2] = v2
                frontier.append((m2, v2))
    if len(table) != euler_phi(level):
        raise SnapshotError("character values do not generate the unit group")
    return [list(table[g % level]) for g in gens]


def build_record(label: str, form_row: dict, hecke_row: dict) -> dict:
    m = LABEL_RE.match(label)
    if m is None:
        raise SnapshotError(f"malformed label {label!r}")
    level, weight = int(form_row["level"]), int(form_row["weight"])
    fp = [int(c) for c in (form_row.get("field_poly") or [0, 1])]
    if fp[-1] != 1:
        raise SnapshotError(f"{label}: field_poly is not monic")
    deg = len(fp) - 1
    if hecke_row.get("hecke_ring_power_basis") is False:
        raise SnapshotError(f"{label}: only power-basis Hecke rings are supported")
    ap_rows = hecke_row.get("ap") or []
    ap = {}
    for ell in SMALL_PRIMES:
        if level % ell == 0:
            continue
        idx = _PRIMES.index(ell)
        if idx >= len(ap_rows):
            raise SnapshotError(f"{label}: ap list too short for a_{ell}")
        vec = [int(c) for c in ap_rows[idx]]
        if len(vec) > deg:
            raise SnapshotError(f"{label}: a_{ell} exceeds field degree")
        ap[str(ell)] = vec + [0] * (deg - len(vec))
    gens, _ = unit_generators(level)
    gen_values = _char_values_on_generators(
        level, hecke_row.get("hecke_ring_character_values"), fp)
    return {"label": label, "level": level, "weight": weight,
            "char": {"modulus": level, "gen_values_order": list(gens),
                     "gen_values": gen_values},
            "field_poly": fp, "ap": ap, "den": 1}


def fetch(client: Client, labels=None, n_max=None, k_max=None,
          source_commit: str = "lmfdb-api") -> tuple[dict, Manifest]:
    """Retrieve records by explicit labels or by (n_max, k_max) search."""
    if labels is None:
        if n_max is None or k_max is None:
            raise ValueError("need labels or both n_max and k_max")
        query = {"n_max": n_max, "k_max": k_max}
        labels = client.search_labels(n_max, k_max)
    else:
        query = {"labels": list(labels)}
    manifest = Manifest(query=query)
    manifest.retrieved_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    records = []
    for label in labels:
        try:
            if LABEL_RE.match(label) is None:
                raise SnapshotError(f"malformed label {label!r}")
            rec = build_record(label, client.newform(label),
                               client.hecke_data(label))
            records.append(rec)
            manifest.labels.append(label)
        except (SnapshotError, requests.RequestException, KeyError,
                ValueError) as exc:
            manifest.errors[label] = str(exc)
    fixture = {"version": SCHEMA_VERSION, "source_commit": source_commit,
               "records": records}
    _validate_with_primary_loader(fixture)
    return fixture, manifest


def _validate_with_primary_loader(fixture: dict) -> None:
    """Run the consuming store's validation when it is installed."""
    try:
        from galoisfinder.newforms import load
    except ImportError:
        return
    load(json.loads(json.dumps(fixture)))
