"""Newform eigenvalue fixtures and their reductions at primes over p.

Records carry exact data: the coefficient field as a monic integer
polynomial, Hecke eigenvalues a_l as polynomials in the field generator, and
the nebentype's generator values in the same field.  Reduction picks a root
of the field polynomial in GF(p^r); each root is one prime P over p, and the
Frobenius-conjugate roots give the conjugate eigensystem reductions.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .characters import DirichletChar, unit_group
from .fields import (ExtField, FieldElement, _pp_divmod, _pp_gcd, _pp_mod,
                     _pp_mul, _pp_powmod, _pp_sub, _pp_trim, embed, is_prime,
                     make_field, roots_in_field)

SMALL_PRIMES = (2, 3, 5, 7, 11)
LABEL_RE = re.compile(r"^(\d+)\.(\d+)\.([a-z]+)\.([a-z]+)$")
SCHEMA_VERSION = 1


class NewformDataError(ValueError):
    pass


@dataclass(frozen=True)
class NewformRecord:
    label: str
    level: int
    weight: int
    char_modulus: int
    char_gens: tuple[int, ...]
    gen_values: tuple[tuple[int, ...], ...]
    field_poly: tuple[int, ...]
    ap: tuple[tuple[int, tuple[int, ...]], ...]
    den: int = 1

    @property
    def degree(self) -> int:
        return len(self.field_poly) - 1

    def ap_dict(self) -> dict[int, tuple[int, ...]]:
        return dict(self.ap)


class ReducedNewform:
    """One mod-P reduction of a record: generator |-> a chosen root."""

    __slots__ = ("record", "root_index", "root", "a_mod", "nebentype_mod")

    def __init__(self, record: NewformRecord, root_index: int, root: FieldElement,
                 a_mod: dict[int, FieldElement], nebentype_mod: DirichletChar):
        self.record = record
        self.root_index = root_index
        self.root = root
        self.a_mod = a_mod
        self.nebentype_mod = nebentype_mod

    def nebentype_value(self, ell: int) -> FieldElement:
        return self.nebentype_mod(ell)

    def __eq__(self, other):
        return (isinstance(other, ReducedNewform)
                and self.record.label == other.record.label
                and self.root == other.root)

    def __hash__(self):
        return hash((self.record.label, self.root))

    def __repr__(self):
        return f"<{self.record.label} reduced at root #{self.root_index}>"


def _require(cond: bool, label: str, message: str):
    if not cond:
        raise NewformDataError(f"record {label}: {message}")


def validate_record(raw: dict) -> NewformRecord:
    label = raw.get("label", "<missing label>")
    for key in ("label", "level", "weight", "char", "field_poly", "ap"):
        _require(key in raw, label, f"missing field {key!r}")
    m = LABEL_RE.match(raw["label"])
    _require(m is not None, label, "malformed label")
    level, weight = int(raw["level"]), int(raw["weight"])
    _require(int(m.group(1)) == level, label, "label level mismatch")
    _require(int(m.group(2)) == weight, label, "label weight mismatch")
    _require(level >= 1 and weight >= 2, label, "level/weight out of range")
    char = raw["char"]
    _require(char.get("modulus") == level, label, "nebentype modulus must equal level")
    ug = unit_group(level)
    gens = tuple(char.get("gen_values_order", ()))
    _require(gens == ug.generators, label,
             f"nebentype generators {gens} do not match unit group {ug.generators}")
    fp = tuple(int(c) for c in raw["field_poly"])
    _require(len(fp) >= 2 and fp[-1] == 1, label, "field_poly must be monic nonconstant")
    _heuristic_irreducible(fp, label)
    deg = len(fp) - 1
    gv = tuple(tuple(int(c) for c in v) for v in char.get("gen_values", ()))
    _require(len(gv) == len(gens), label, "one nebentype value per generator required")
    for v in gv:
        _require(len(v) <= deg, label, "nebentype value exceeds field degree")
    ap_raw = raw["ap"]
    ap = []
    for ell in SMALL_PRIMES:
        if level % ell == 0:
            continue
        _require(str(ell) in ap_raw, label, f"missing a_{ell}")
        coeffs = tuple(int(c) for c in ap_raw[str(ell)])
        _require(len(coeffs) <= deg, label, f"a_{ell} exceeds field degree")
        ap.append((ell, coeffs))
    den = int(raw.get("den", 1))
    _require(den >= 1, label, "denominator must be positive")
    return NewformRecord(raw["label"], level, weight, level, gens, gv, fp,
                         tuple(ap), den)


def _heuristic_irreducible(fp: tuple[int, ...], label: str) -> None:
    """Cheap certificate: squarefree mod some prime, irreducible mod some
    prime when such a witness exists (it does for all bundled fixtures)."""
    if len(fp) == 2:
        return
    witnesses = [q for q in (10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079) if is_prime(q)]
    squarefree_seen = False
    for q in witnesses:
        f = [c % q for c in fp]
        if not f[-1]:
            continue
        deriv = _pp_trim([(i * f[i]) % q for i in range(1, len(f))])
        if deriv and len(_pp_gcd(list(f), deriv, q)) == 1:
            squarefree_seen = True
            if _factor_degrees_mod_p(fp, q) == [len(fp) - 1]:
                return
    _require(squarefree_seen, label, "field_poly not squarefree (heuristic check)")


def _factor_degrees_mod_p(fp: tuple[int, ...], p: int) -> list[int]:
    """Irreducible factor degrees of a squarefree monic poly mod p."""
    f = _pp_trim([c % p for c in fp])
    degrees = []
    # remove multiplicities first
    deriv = _pp_trim([(i * f[i]) % p for i in range(1, len(f))])
    if not deriv:
        raise NewformDataError("degree >= p unsupported")
    g = _pp_divmod(f, _pp_gcd(f, deriv, p), p)[0]
    inv = pow(g[-1], p - 2, p)
    g = [c * inv % p for c in g]
    i = 0
    xq = [0, 1]
    while len(g) - 1 > 0:
        i += 1
        if 2 * i > len(g) - 1:
            degrees.append(len(g) - 1)
            break
        xq = _pp_powmod(xq, p, g, p)
        h = _pp_gcd(_pp_sub(xq, [0, 1], p), g, p)
        if len(h) - 1 > 0:
            degrees.extend([i] * ((len(h) - 1) // i))
            g = _pp_divmod(g, h, p)[0]
            if len(g) - 1 == 0:
                break
            xq = _pp_mod(xq, g, p)
    return sorted(degrees)


def load(source) -> list[NewformRecord]:
    """Parse and validate a fixture document (path, file object, or dict)."""
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    for key in ("version", "source_commit", "records"):
        if key not in doc:
            raise NewformDataError(f"fixture document missing {key!r}")
    records = []
    seen = set()
    for raw in doc["records"]:
        rec = validate_record(raw)
        if rec.label in seen:
            raise NewformDataError(f"duplicate label {rec.label}")
        seen.add(rec.label)
        records.append(rec)
    return records


def _eval_at(field: ExtField, coeffs: tuple[int, ...], root: FieldElement,
             den: int) -> FieldElement:
    acc = field.zero
    for c in reversed(coeffs):
        acc = acc * root + field(c)
    if den != 1:
        acc = acc / field(den)
    return acc


def reduce_record(record: NewformRecord, field: ExtField) -> list[ReducedNewform]:
    """One ReducedNewform per root of field_poly in the field.

    Roots are found factor-by-factor over F_p and carried up through the
    canonical subfield embeddings, which is much cheaper than root-finding
    directly in a large field.
    """
    p = field.p
    roots: list[FieldElement] = []
    for h in _factor_mod_p(record.field_poly, p):
        d = len(h) - 1
        if field.r % d != 0:
            continue
        if d == 1:
            roots.append(field(-h[0]))
            continue
        sub = make_field(p, d)
        sub_roots = roots_in_field(sub, [sub(c) for c in h])
        roots.extend(embed(rt, field) for rt in sub_roots)
    if not roots:
        degs = _factor_degrees_mod_p(record.field_poly, p)
        raise NewformDataError(
            f"record {record.label}: no prime over p={p} has residue degree dividing "
            f"r={field.r}; enlarge r (factor degrees mod p: {degs})")
    roots.sort(key=lambda rt: rt.coeffs)
    out = []
    for idx, root in enumerate(roots):
        a_mod = {ell: _eval_at(field, coeffs, root, record.den)
                 for ell, coeffs in record.ap}
        neb_vals = [_eval_at(field, v, root, record.den) for v in record.gen_values]
        neb = DirichletChar(record.level, field, neb_vals)
        out.append(ReducedNewform(record, idx, root, a_mod, neb))
    return out


def _factor_mod_p(fp: tuple[int, ...], p: int) -> list[list[int]]:
    """Monic irreducible factors of field_poly mod p (with multiplicity 1;
    fixture polynomials are squarefree mod the usable primes)."""
    f = _pp_trim([c % p for c in fp])
    deriv = _pp_trim([(i * f[i]) % p for i in range(1, len(f))])
    common = _pp_gcd(f, deriv, p) if deriv else [0]
    if len(common) != 1:
        # repeated factors mod p: fall back to the squarefree part
        f = _pp_divmod(f, common, p)[0]
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    factors = []
    # distinct-degree split, then equal-degree split by random gcds
    import random
    rng = random.Random(0xFAC7)
    i = 0
    g = f
    xq = [0, 1]
    stacks: list[tuple[list[int], int]] = []
    while len(g) - 1 > 0:
        i += 1
        if 2 * i > len(g) - 1:
            stacks.append((g, len(g) - 1))
            break
        xq = _pp_powmod(xq, p, g, p)
        h = _pp_gcd(_pp_sub(xq, [0, 1], p), g, p)
        if len(h) - 1 > 0:
            stacks.append((h, i))
            g = _pp_divmod(g, h, p)[0]
            if len(g) - 1 == 0:
                break
            xq = _pp_mod(xq, g, p)
    for poly, d in stacks:
        factors.extend(_equal_degree_split(poly, d, p, rng))
    monic = []
    for h in factors:
        inv = pow(h[-1], p - 2, p)
        monic.append([c * inv % p for c in h])
    return sorted(monic)


def _equal_degree_split(f: list[int], d: int, p: int, rng) -> list[list[int]]:
    if len(f) - 1 == d:
        return [f]
    e = (p ** d - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(len(f) - 1)]
        a = _pp_trim(a)
        if len(a) < 1:
            continue
        b = _pp_powmod(a, e, f, p)
        b0 = list(b) if b else [0]
        b0[0] = (b0[0] - 1) % p
        u = _pp_gcd(_pp_trim(b0), f, p)
        if 0 < len(u) - 1 < len(f) - 1:
            rest = _pp_divmod(f, u, p)[0]
            return _equal_degree_split(u, d, p, rng) + _equal_degree_split(rest, d, p, rng)


def residue_degree(record: NewformRecord, p: int) -> int:
    """Minimal residue degree of a prime over p in the coefficient field."""
    return min(_factor_degrees_mod_p(record.field_poly, p))


def choose_r(p: int, records, N: int) -> int:
    """Smallest r such that every needed residue field embeds in GF(p^r)."""
    exponent = unit_group(N).exponent
    r = 1
    if exponent > 1:
        # residue degree for the cyclotomic values K_0: order of p mod exponent
        o, x = 1, p % exponent
        while x != 1:
            x = (x * p) % exponent
            o += 1
        r = o
    for rec in records:
        r = lcm(r, residue_degree(rec, p))
    return r


class NewformStore:
    """Immutable post-load store with cached reductions."""

    def __init__(self, records):
        self.records = {rec.label: rec for rec in records}
        self._cache: dict[tuple[str, ExtField], list[ReducedNewform]] = {}

    @classmethod
    def from_file(cls, source) -> "NewformStore":
        return cls(load(source))

    def __contains__(self, label: str) -> bool:
        return label in self.records

    def get(self, label: str) -> NewformRecord:
        if label not in self.records:
            raise KeyError(f"unknown newform label {label}")
        return self.records[label]

    def reductions(self, label: str, field: ExtField) -> list[ReducedNewform]:
        key = (label, field)
        if key not in self._cache:
            self._cache[key] = reduce_record(self.get(label), field)
        return self._cache[key]

    def by_level_weight(self, level_divides: int, weight: int):
        return [rec for rec in self.records.values()
                if weight == rec.weight and level_divides % rec.level == 0]
