"""Newform records, validation, and mod-p reduction."""

import pytest

from galoisfinder.fields import make_field
from galoisfinder.newforms import (NewformDataError, NewformStore, choose_r,
                                   residue_degree, validate_record)

GOOD = {
    "label": "11.2.a.a", "level": 11, "weight": 2,
    "char": {"modulus": 11, "gen_values_order": [2], "gen_values": [[1]]},
    "field_poly": [0, 1],
    "ap": {"2": [-2], "3": [-1], "5": [1], "7": [-2]},
    "den": 1,
}


def test_validate_good_record():
    rec = validate_record(GOOD)
    assert rec.degree == 1
    assert rec.ap_dict()[3] == (-1,)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(field_poly=[2, 3]),        # not monic
    lambda d: d.update(field_poly=[1]),           # constant
    lambda d: d.update(ap={"2": [-2]}),           # missing small primes
    lambda d: d["char"].update(modulus=22),       # modulus != level
    lambda d: d["char"].update(gen_values=[[1], [1]]),  # wrong value count
])
def test_validate_rejects(mutate):
    import copy
    doc = copy.deepcopy(GOOD)
    mutate(doc)
    with pytest.raises(NewformDataError):
        validate_record(doc)


def test_residue_degree_and_choose_r():
    rec = validate_record(GOOD)
    assert residue_degree(rec, 12037) == 1
    # r must also accommodate character values: ord(12037 mod 10) = 4
    assert choose_r(12037, [rec], 11) == 4
    assert choose_r(12037, [rec], 1) == 1


def test_reduction_rational_record():
    rec = validate_record(GOOD)
    store = NewformStore([rec])
    F = make_field(12037, 1)
    reds = store.reductions("11.2.a.a", F)
    assert len(reds) == 1
    assert reds[0].a_mod[2] == F(-2)
    assert reds[0].nebentype_mod.is_trivial


def test_store_lookup_errors():
    store = NewformStore([validate_record(GOOD)])
    assert "11.2.a.a" in store
    assert "3.6.a.a" not in store
    with pytest.raises(KeyError):
        store.get("3.6.a.a")
    assert store.by_level_weight(22, 2)[0].label == "11.2.a.a"
    assert store.by_level_weight(11, 4) == []
    assert store.by_level_weight(7, 2) == []


# ---- bundled fixture spot checks (LMFDB-published values) -----------------

def test_bundled_anchor_values(store):
    F = make_field(12037, 1)
    red = store.reductions("1.12.a.a", F)[0]
    assert red.a_mod[2] == F(-24)
    assert red.a_mod[3] == F(252)
    red = store.reductions("11.2.a.a", F)[0]
    assert [red.a_mod[ell] for ell in (2, 3, 5, 7)] == \
        [F(-2), F(-1), F(1), F(-2)]
    red = store.reductions("6.4.a.a", F)[0]
    assert red.a_mod[5] == F(6)
    assert red.a_mod[7] == F(-16)
    assert red.a_mod[11] == F(12)


def test_bundled_irrational_orbit(store):
    # 13.2.e.a has coefficient field Q(zeta_6); a_2 has minimal polynomial
    # x^2 + 3x + 3
    rec = store.get("13.2.e.a")
    assert rec.degree == 2
    r = residue_degree(rec, 12037)
    F = make_field(12037, r)
    reds = store.reductions("13.2.e.a", F)
    assert len(reds) == 2
    for red in reds:
        a2 = red.a_mod[2]
        assert a2 * a2 + F(3) * a2 + F(3) == F.zero
    assert not reds[0].nebentype_mod.is_trivial


def test_bundled_labels_cover_tables(store, tables):
    import re
    needed = set()
    for t in tables["tables"]:
        for row in t["rows"]:
            needed.update(re.findall(r"s\[([^\]]+)\]", row["rep"]))
    missing = sorted(lab for lab in needed if lab not in store)
    assert missing == []
