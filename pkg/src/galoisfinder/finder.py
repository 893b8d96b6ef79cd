"""Candidate enumeration and matching of degree-4 representations to data.

A search context fixes the level N, the symmetric power g, the nebentype eta,
the working field, a newform store, and the set of Hecke operators that were
actually computed.  Candidates are built directly from the Hodge-Tate template
{0, 1, 2, g+3}: either four characters chi_i * e^{w_i}, or two characters plus
one newform piece chi * e^{w} * sigma_f whose weight is forced by the two
Hodge-Tate slots it occupies.  Every candidate passes the parity test at
complex conjugation, and (by default) a determinant prefilter at the two
smallest usable primes.  Matching then compares predicted Frobenius data
against observed eigenvalues exactly, at every supplied (ell, k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .characters import (DirichletChar, char_eval, enumerate_chars,
                         galois_orbit, parse_char_expr, trivial_char)
from .fields import ExtField, make_field
from .newforms import NewformDataError, NewformStore
from .reps import (Char1D, GaloisRep, HeckeData, NewformTwist, RepContext,
                   classify_pattern, det_character, frob_charpoly,
                   hecke_data_from_rep, parse_rep_text, rep_charpoly,
                   rep_to_text)

SMALL_PRIMES = (2, 3, 5, 7, 11)

# Issued when a unique match rests on data from fewer than three primes.
IMPOSTER_CAVEAT = (
    "match is based on data at {n} prime(s): it is still possible (though very "
    "unlikely) that an imposter eigensystem agrees at these operators")

ZERO_MATCH_LINT = (
    "no candidate matched: the eigensystem may belong to a shape outside the "
    "enumerated candidate list")


@dataclass(frozen=True)
class FinderContext:
    """Everything a search needs: ambient parameters, data sources, and the
    set of operator labels (ell, k) that are available."""

    N: int
    g: int
    eta: DirichletChar
    field: ExtField
    store: NewformStore
    computed: frozenset

    def __post_init__(self):
        if self.N % self.eta.N != 0:
            raise ValueError(f"eta has modulus {self.eta.N}, not a divisor of N={self.N}")
        if self.eta.field != self.field:
            raise ValueError("eta is valued in a different field")
        for ell, k in self.computed:
            if gcd(ell, self.field.p * self.N) != 1:
                raise ValueError(f"computed operator at ell={ell} dividing pN")
            if not 0 <= k <= 4:
                raise ValueError(f"operator index k={k} outside 0..4")

    @property
    def rep_ctx(self) -> RepContext:
        return RepContext(self.N, self.g, self.eta.lift_to(self.N), self.field)


def usable_primes(ctx: FinderContext) -> list[int]:
    """Small primes coprime to pN, in increasing order."""
    return [ell for ell in SMALL_PRIMES if gcd(ell, ctx.field.p * ctx.N) == 1]


def _rep_key(rho: GaloisRep):
    parts = []
    for c in rho.constituents:
        if isinstance(c, Char1D):
            parts.append(("c", c.w, c.chi.serialize(), "", ()))
        else:
            parts.append(("f", c.w, c.chi.serialize(), c.form.record.label,
                          c.form.root.coeffs))
    return tuple(sorted(parts))


def reps_equal(a: GaloisRep, b: GaloisRep) -> bool:
    """Equality as multisets of constituents."""
    return _rep_key(a) == _rep_key(b)


def enumerate_candidates(ctx: FinderContext, det_prefilter: bool = True):
    """Yield the candidate representations for ctx, deduplicated as multisets.

    Slots follow the Hodge-Tate template (0, 1, 2, g+3).  A newform piece
    occupies a pair of slots (w1, w2), w1 < w2, and must have weight
    w2 - w1 + 1; each record contributes one candidate per reduction at a
    prime over p.  The determinant prefilter keeps a candidate only if its
    determinant character agrees with eta at the two smallest usable primes.
    """
    F = ctx.field
    g = ctx.g
    rep_ctx = ctx.rep_ctx
    slots = (0, 1, 2, g + 3)
    chars = enumerate_chars(ctx.N, F)
    test = usable_primes(ctx)[:2]
    if not test:
        raise ValueError("no usable test primes below 12")

    vals = {chi: tuple(char_eval(chi, ell) for ell in test) for chi in chars}
    inv_vals = {chi: tuple(v.inverse() for v in vals[chi]) for chi in chars}
    sign = {chi: 1 if chi.parity() == "even" else -1 for chi in chars}
    eta_v = tuple(char_eval(rep_ctx.eta, ell) for ell in test)
    # product of two character value vectors -> the ordered pairs realizing
    # it, so the two free character slots cost one lookup instead of a scan
    pair_lookup: dict[tuple, list] = {}
    if det_prefilter:
        for ca, cb in itertools.product(chars, repeat=2):
            key = tuple(vals[ca][i] * vals[cb][i] for i in range(len(test)))
            pair_lookup.setdefault(key, []).append((ca, cb))

    seen = set()

    def emit(constituents):
        rho = GaloisRep(tuple(constituents), rep_ctx)
        key = _rep_key(rho)
        if key in seen:
            return None
        seen.add(key)
        return rho

    def odd_ok(signed):
        return sorted(signed) == [-1, -1, 1, 1]

    # --- four characters ---------------------------------------------------
    slot_signs = tuple((-1) ** w for w in slots)
    if det_prefilter:
        for c0, c1 in itertools.product(chars, repeat=2):
            need = tuple(eta_v[i] * inv_vals[c0][i] * inv_vals[c1][i]
                         for i in range(len(test)))
            for c2, c3 in pair_lookup.get(need, ()):
                combo = (c0, c1, c2, c3)
                if not odd_ok([sign[c] * s for c, s in zip(combo, slot_signs)]):
                    continue
                rho = emit(Char1D(c, w) for c, w in zip(combo, slots))
                if rho is not None:
                    yield rho
    else:
        for combo in itertools.product(chars, repeat=4):
            if not odd_ok([sign[c] * s for c, s in zip(combo, slot_signs)]):
                continue
            rho = emit(Char1D(c, w) for c, w in zip(combo, slots))
            if rho is not None:
                yield rho

    # --- one newform piece plus two characters -----------------------------
    for i, w1 in enumerate(slots):
        for w2 in slots[i + 1:]:
            k = w2 - w1 + 1
            if not 2 <= k <= g + 4:
                continue
            rest = [w for w in slots if w not in (w1, w2)]
            rest_signs = tuple((-1) ** w for w in rest)
            for rec in ctx.store.by_level_weight(ctx.N, k):
                try:
                    reds = ctx.store.reductions(rec.label, F)
                except NewformDataError:
                    continue
                for red in reds:
                    eps_inv = tuple(red.nebentype_value(ell).inverse()
                                    for ell in test)
                    for ct in chars:
                        # the form contributes eigenvalues {t, -t} at
                        # conjugation, so the two characters must split
                        # (parity is independent of the form)
                        base_inv = tuple(inv_vals[ct][i] * inv_vals[ct][i]
                                         * eps_inv[i] for i in range(len(test)))
                        twist = NewformTwist(red, ct, w1)
                        if det_prefilter:
                            need = tuple(eta_v[i] * base_inv[i]
                                         for i in range(len(test)))
                            for ca, cb in pair_lookup.get(need, ()):
                                pair_signs = [sign[ca] * rest_signs[0],
                                              sign[cb] * rest_signs[1]]
                                if sorted(pair_signs) != [-1, 1]:
                                    continue
                                rho = emit([Char1D(ca, rest[0]),
                                            Char1D(cb, rest[1]), twist])
                                if rho is not None:
                                    yield rho
                        else:
                            for ca, cb in itertools.product(chars, repeat=2):
                                pair_signs = [sign[ca] * rest_signs[0],
                                              sign[cb] * rest_signs[1]]
                                if sorted(pair_signs) != [-1, 1]:
                                    continue
                                rho = emit([Char1D(ca, rest[0]),
                                            Char1D(cb, rest[1]), twist])
                                if rho is not None:
                                    yield rho


@lru_cache(maxsize=64)
def _candidates(ctx: FinderContext, det_prefilter: bool) -> tuple[GaloisRep, ...]:
    return tuple(enumerate_candidates(ctx, det_prefilter))


@dataclass(frozen=True)
class MatchReport:
    matches: tuple[GaloisRep, ...]
    groups: tuple[tuple[GaloisRep, ...], ...]
    patterns: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def unique(self) -> bool:
        """Exactly one eigensystem-level match.

        Distinct candidates can be isomorphic (a twist can be absorbed into
        the newform), so uniqueness is judged on the full predicted
        eigenvalue data, not on the formal constituent lists.
        """
        return len(self.groups) == 1


def _expected_cp(ctx: FinderContext, data: HeckeData, ell: int):
    """Observed data at ell, rewritten as charpoly coefficients {k: cp_k}."""
    F = ctx.field
    out = {0: F.one}
    lf = F(ell)
    for (l2, k), val in data.values.items():
        if l2 != ell or k == 0:
            continue
        s = F.one if k % 2 == 0 else -F.one
        out[k] = s * val * lf ** (k * (k - 1) // 2)
    return out


def match(ctx: FinderContext, data: HeckeData,
          det_prefilter: bool = True) -> MatchReport:
    """All candidates whose predictions agree with data at every supplied label."""
    F = ctx.field
    for ell, k in data.values:
        if gcd(ell, F.p * ctx.N) != 1:
            raise ValueError(f"data at ell={ell} dividing pN is not usable")
        if (ell, k) not in ctx.computed:
            raise ValueError(f"data at ({ell},{k}) outside the computed set")
    for (ell, k), val in data.values.items():
        if k == 0 and val != F.one:
            raise ValueError(f"a({ell},0) must be 1")

    targets = {ell: _expected_cp(ctx, data, ell) for ell in data.primes()}
    # candidates share their constituent objects (characters from the
    # enumeration list, one NewformTwist per reduction and twist), so their
    # charpoly factors are cached by object identity; the trace coefficient,
    # a sum of cached factor traces, rejects almost every candidate without
    # forming the full degree-4 product
    fac_cache: dict = {}
    rep_ctx = ctx.rep_ctx

    def factor(c, ell):
        key = (id(c.chi), c.w, ell) if isinstance(c, Char1D) else (id(c), ell)
        f = fac_cache.get(key)
        if f is None:
            f = frob_charpoly(c, ell, rep_ctx)
            fac_cache[key] = f
        return f

    trace_targets = [(ell, t[1].coeffs) for ell, t in targets.items()
                     if 1 in t]
    matches = []
    for rho in _candidates(ctx, det_prefilter):
        ok = True
        for ell, want in trace_targets:
            tr = None
            for c in rho.constituents:
                v = factor(c, ell)[1]
                tr = v if tr is None else tr + v
            if tr.coeffs != want:
                ok = False
                break
        if not ok:
            continue
        for ell, target in targets.items():
            cp = [F.one]
            for c in rho.constituents:
                poly = factor(c, ell)
                new = [F.zero] * (len(cp) + len(poly) - 1)
                for i, a in enumerate(cp):
                    if a:
                        for j, b in enumerate(poly):
                            if b:
                                new[i + j] = new[i + j] + a * b
                cp = new
            if any(cp[k] != want for k, want in target.items()):
                ok = False
                break
        if ok:
            matches.append(rho)

    full = usable_primes(ctx)
    groups: dict[tuple, list[GaloisRep]] = {}
    for rho in matches:
        key = []
        for ell in full:
            key.extend(rep_charpoly(rho, ell))
        groups.setdefault(tuple(key), []).append(rho)

    warnings = []
    if not matches:
        warnings.append(ZERO_MATCH_LINT)
    elif len(groups) == 1 and len(set(data.primes())) < 3:
        warnings.append(IMPOSTER_CAVEAT.format(n=len(set(data.primes()))))

    group_list = tuple(tuple(g) for g in groups.values())
    patterns = tuple(classify_pattern(g[0]) for g in group_list)
    return MatchReport(tuple(matches), group_list, patterns, tuple(warnings))


# ---------------------------------------------------------------------------
# verification against published result tables

def computed_labels(computed) -> frozenset:
    """[[ell, "full"|"partial"], ...] -> operator labels (ell, k).

    A full T_ell determines a(ell, k) for k = 1, 2, 3; a partial T_{ell,1}
    only a(ell, 1).  (k = 0 and 4 carry no information beyond eta.)
    """
    labels = set()
    for ell, kind in computed:
        if kind == "full":
            labels.update({(ell, 1), (ell, 2), (ell, 3)})
        elif kind == "partial":
            labels.add((ell, 1))
        else:
            raise ValueError(f"unknown operator kind {kind!r}")
    return frozenset(labels)


@dataclass
class RowResult:
    level: int
    g: int
    eta_text: str
    row_index: int
    rep_text: str
    ok: bool
    notes: tuple[str, ...]
    pattern: str = "other"
    warnings: tuple[str, ...] = ()


def verify_table(table: dict, store: NewformStore) -> list[RowResult]:
    """Re-derive each row of one published table and check it.

    For every row: parse the representation, derive its determinant character
    (which must be a Galois conjugate eta^t of the table's eta), synthesize the
    eigenvalue data it predicts at the computed operators, run the search, and
    require that the row's representation is the unique match and that the
    stated Galois multiplicity is consistent with the number of conjugate
    eigensystems the representation generates (coefficient-field degree per
    realized determinant character; old constituents may recur in cohomology,
    so for them only divisibility is required).
    """
    N, g = table["level"], table["g"]
    field = make_field(table["p"], table["r"])
    eta = parse_char_expr(table["eta"], N, field).lift_to(N)
    labels = computed_labels(table["computed"])
    results = []
    header_ctx = RepContext(N, g, eta, field)
    # tables group eta up to Galois conjugacy: rows may realize any eta^t
    # with t coprime to the order
    eta_orbit = [eta ** t for t in range(1, max(eta.order(), 2))
                 if gcd(t, eta.order()) == 1]
    for idx, row in enumerate(table["rows"]):
        notes = []
        warnings = ()
        pattern = "other"
        try:
            rho = parse_rep_text(row["rep"], header_ctx, store)
            eta_eff = det_character(rho)
            if eta_eff not in eta_orbit:
                notes.append("determinant character is not a conjugate of eta")
            else:
                ctx = FinderContext(N, g, eta_eff, field, store, labels)
                rho = GaloisRep(rho.constituents, ctx.rep_ctx)
                data = hecke_data_from_rep(rho, labels)
                report = match(ctx, data)
                warnings = report.warnings
                key = _rep_key(rho)
                if not any(_rep_key(m) == key for m in report.matches):
                    notes.append("stated representation is not among the matches")
                if not report.unique:
                    notes.append(f"match is not unique ({len(report.groups)} "
                                 "eigensystem groups)")
                if report.groups:
                    pattern = classify_pattern(rho)
                # galois_mult counts the eigenspaces sharing this rep.  The
                # rep itself predicts the conjugate-eigensystem count: the
                # product of coefficient-field degrees, divided by the number
                # of conjugates of eta (conjugation permutes the realized
                # determinant characters evenly).  A constituent of level
                # properly dividing N is an old form; its eigenspaces recur
                # an integer number of times in the cohomology, so only
                # divisibility can be required there.
                gm = 1
                old = False
                for c in rho.constituents:
                    if isinstance(c, NewformTwist):
                        gm *= c.form.record.degree
                        old = old or c.form.record.level < N
                gm = max(1, gm // len(eta_orbit))
                stated = row["galois_mult"]
                if (stated != gm if not old else stated % gm != 0):
                    notes.append(f"galois multiplicity {stated} stated, "
                                 f"{gm} conjugate eigensystems derived")
        except (ValueError, KeyError) as exc:
            notes.append(f"error: {exc}")
        results.append(RowResult(N, g, table["eta"], idx, row["rep"],
                                 not notes, tuple(notes), pattern, warnings))
    return results


def verify_tables(doc: dict, store: NewformStore) -> list[RowResult]:
    out = []
    for table in doc["tables"]:
        out.extend(verify_table(table, store))
    return out


# ---------------------------------------------------------------------------
# normalized text emission

def emit_table(table: dict) -> str:
    """Byte-stable text rendering of one result table."""
    lines = []
    eta = table["eta"]
    coeff = f"Sym^{table['g']}(V)" if table["g"] != 1 else "V"
    if eta != "1":
        coeff += f" (x) {eta}"
    lines.append(f"Level {table['level']}. Coeffs {coeff}. "
                 f"GF({table['p']}^{table['r']}).")
    if table["dim"] == 0:
        lines.append("Dim 0.")
        return "\n".join(lines) + "\n"
    ops = " ".join(f"T_{ell}" if kind == "full" else f"T_{ell},1"
                   for ell, kind in table["computed"])
    lines.append(f"Computed {ops}. Dim {table['dim']}.")
    lines.append("galois_mult | hecke_mult | rep")
    for row in table["rows"]:
        lines.append(f"{row['galois_mult']:>11} | {row['hecke_mult']:>10} | "
                     f"{row['rep']}")
    return "\n".join(lines) + "\n"


def emit_tables(doc: dict) -> str:
    return "\n".join(emit_table(t) for t in doc["tables"])
