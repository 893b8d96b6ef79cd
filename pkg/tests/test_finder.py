"""Candidate enumeration, matching, and table verification."""

import pytest

from galoisfinder.characters import enumerate_chars, parse_char_expr, trivial_char
from galoisfinder.fields import make_field
from galoisfinder.finder import (IMPOSTER_CAVEAT, ZERO_MATCH_LINT,
                                 FinderContext, _rep_key, computed_labels,
                                 emit_table, enumerate_candidates, match,
                                 usable_primes, verify_table)
from galoisfinder.newforms import NewformStore
from galoisfinder.reps import (GaloisRep, HeckeData, hecke_data_from_rep,
                               rep_to_text)


def small_ctx(labels=((2, 1), (2, 2), (2, 3), (5, 1), (5, 2), (5, 3)),
              store=None, eta_expr="chi3"):
    F = make_field(12379, 1)
    eta = parse_char_expr(eta_expr, 3, F)
    return FinderContext(3, 1, eta, F, store or NewformStore([]),
                         frozenset(labels))


def test_context_invariants():
    F = make_field(12379, 1)
    store = NewformStore([])
    with pytest.raises(ValueError):
        FinderContext(3, 1, trivial_char(2, F), F, store, frozenset())
    with pytest.raises(ValueError):  # 3 | N
        FinderContext(3, 1, trivial_char(3, F), F, store, frozenset({(3, 1)}))
    ctx = small_ctx()
    assert usable_primes(ctx) == [2, 5, 7, 11]


def test_candidates_include_published_pair():
    ctx = small_ctx()
    texts = {rep_to_text(rho) for rho in enumerate_candidates(ctx)}
    assert "e^0 + e^1 + chi3*e^2 + e^4" in texts
    assert "chi3*e^0 + e^1 + e^2 + e^4" in texts


def test_candidates_duplicate_free_and_prefilter_subset():
    ctx = small_ctx()
    full = [_rep_key(r) for r in enumerate_candidates(ctx, det_prefilter=False)]
    assert len(full) == len(set(full))
    filtered = [_rep_key(r) for r in enumerate_candidates(ctx, det_prefilter=True)]
    assert set(filtered) <= set(full)


def test_level1_trivial_context_single_candidate():
    F = make_field(12379, 1)
    ctx = FinderContext(1, 0, trivial_char(1, F), F, NewformStore([]),
                        frozenset({(2, 1)}))
    cands = list(enumerate_candidates(ctx))
    assert len(cands) == 1
    assert rep_to_text(cands[0]) == "e^0 + e^1 + e^2 + e^3"


def test_match_round_trip_and_uniqueness():
    ctx = small_ctx()
    target = [r for r in enumerate_candidates(ctx)
              if rep_to_text(r) == "chi3*e^0 + e^1 + e^2 + e^4"][0]
    data = hecke_data_from_rep(target, ctx.computed)
    report = match(ctx, data)
    assert report.unique
    assert any(_rep_key(m) == _rep_key(target) for m in report.matches)
    assert report.patterns == ("type1",)


def test_match_monotone_in_operator_set():
    ctx = small_ctx()
    target = list(enumerate_candidates(ctx))[0]
    prev = None
    grown = [(2, 1)], [(2, 1), (5, 1)], [(2, 1), (5, 1), (5, 2), (5, 3)]
    for labels in grown:
        sub = FinderContext(ctx.N, ctx.g, ctx.eta, ctx.field, ctx.store,
                            frozenset(labels))
        data = hecke_data_from_rep(target, labels)
        got = {_rep_key(m) for m in match(sub, data).matches}
        if prev is not None:
            assert got <= prev
        prev = got


def test_empty_operator_set_matches_everything():
    ctx = small_ctx(labels=())
    report = match(ctx, HeckeData({}))
    assert len(report.matches) == len(list(enumerate_candidates(ctx)))
    assert not report.unique


def test_perturbed_data_matches_nothing():
    ctx = small_ctx()
    target = list(enumerate_candidates(ctx))[0]
    data = hecke_data_from_rep(target, ctx.computed)
    F = ctx.field
    perturbed = dict(data.values)
    perturbed[(2, 1)] = perturbed[(2, 1)] + F.one
    report = match(ctx, HeckeData(perturbed))
    assert report.matches == ()
    assert ZERO_MATCH_LINT in report.warnings


def test_imposter_caveat_wording():
    ctx = small_ctx()
    target = list(enumerate_candidates(ctx))[0]
    data = hecke_data_from_rep(target, {(2, 1), (2, 2), (2, 3)})
    report = match(ctx, data)
    if report.unique:
        assert any("it is still possible (though very unlikely)" in w
                   for w in report.warnings)
    assert "it is still possible (though very unlikely)" in IMPOSTER_CAVEAT


def test_match_rejects_bad_labels():
    ctx = small_ctx()
    F = ctx.field
    with pytest.raises(ValueError):
        match(ctx, HeckeData({(3, 1): F.one}))  # 3 | N
    with pytest.raises(ValueError):
        match(ctx, HeckeData({(7, 1): F.one}))  # outside computed set


def test_computed_labels_expansion():
    got = computed_labels([[2, "full"], [5, "partial"]])
    assert got == frozenset({(2, 1), (2, 2), (2, 3), (5, 1)})
    with pytest.raises(ValueError):
        computed_labels([[2, "half"]])


def test_emit_table_dim0():
    table = {"level": 2, "g": 2, "eta": "1", "p": 12379, "r": 1,
             "computed": [], "dim": 0, "tag": None, "rows": []}
    out = emit_table(table)
    assert out.endswith("Dim 0.\n")
    assert out == emit_table(dict(table))  # byte-stable


def test_emit_tables_matches_text_fixture(tables):
    from galoisfinder.bundled import golden_tables_text
    from galoisfinder.finder import emit_tables
    assert emit_tables(tables) == golden_tables_text()


def test_verify_small_golden_table(tables, store):
    table = [t for t in tables["tables"]
             if t["level"] == 3 and t["g"] == 1][0]
    results = verify_table(table, store)
    assert len(results) == 2
    for res in results:
        assert res.ok, res.notes
        assert res.pattern == "type1"


def test_verify_flags_wrong_multiplicity(tables, store):
    import copy
    table = copy.deepcopy([t for t in tables["tables"]
                           if t["level"] == 3 and t["g"] == 1][0])
    table["rows"][0]["galois_mult"] = 5
    results = verify_table(table, store)
    assert not results[0].ok
    assert any("multiplicity" in n for n in results[0].notes)
    assert results[1].ok
