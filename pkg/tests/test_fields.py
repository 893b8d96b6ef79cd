"""Finite field tower arithmetic."""

import random

import pytest
import sympy

from galoisfinder.fields import (CONWAY_TABLE, ExtField, FieldElement, embed,
                                 frobenius, is_prime, make_field, parse_field,
                                 roots_in_field)

P = 12037


def rand_elems(F, n, seed=0):
    rng = random.Random(seed)
    return [FieldElement(F, tuple(rng.randrange(F.p) for _ in range(F.r)))
            for _ in range(n)]


def test_is_prime_oracle():
    sieve = {n for n in range(2, 200) if all(n % d for d in range(2, n))}
    for n in range(200):
        assert is_prime(n) == (n in sieve)
    for p in (12037, 12379, 16001):
        assert is_prime(p)
    assert not is_prime(12039)


def test_make_field_rejects_bad_p():
    with pytest.raises(ValueError):
        make_field(4, 2)
    with pytest.raises(ValueError):
        make_field(5, 2)


@pytest.mark.parametrize("r", [1, 2, 3, 6])
def test_ring_axioms_random(r):
    F = make_field(P, r)
    xs = rand_elems(F, 12, seed=r)
    for a, b, c in zip(xs[::3], xs[1::3], xs[2::3]):
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a + b == b + a
        assert a * b == b * a
        assert a - a == F.zero
        assert a * F.one == a


@pytest.mark.parametrize("r", [1, 2, 4])
def test_inverse_and_fermat(r):
    F = make_field(P, r)
    for a in rand_elems(F, 6, seed=10 + r):
        if a:
            assert a * a.inverse() == F.one
            assert a / a == F.one
        # multiplicative group order divides p^r - 1
        assert a ** (F.p ** F.r) == a


def test_modulus_is_lex_min_irreducible():
    """The r=2 modulus is the lexicographically least monic irreducible."""
    F = make_field(P, 2)
    x = sympy.symbols("x")

    def irreducible(c0, c1):
        poly = sympy.Poly(x ** 2 + c1 * x + c0, x, modulus=P)
        facs = sympy.factor_list(poly)[1]
        return len(facs) == 1 and facs[0][1] == 1

    mod = F.modulus
    assert len(mod) == 3 and mod[2] == 1
    assert irreducible(mod[0], mod[1])
    # nothing lexicographically earlier (ascending-coefficient order) works
    for c0 in range(mod[0]):
        assert not irreducible(c0, 0)
    for c1 in range(mod[1]):
        assert not irreducible(mod[0], c1)


def test_conway_table_hook():
    """A table entry overrides the lex-min default."""
    # x^2 + 12x + 5 happens to be irreducible mod 12037? verify first, then
    # assert the hook is consulted.
    x = sympy.symbols("x")
    c0 = c1 = None
    for cand0 in range(5, 60):
        facs = sympy.factor_list(sympy.Poly(x ** 2 + 12 * x + cand0, x, modulus=P))[1]
        if len(facs) == 1 and facs[0][1] == 1:
            c0, c1 = cand0, 12
            break
    assert c0 is not None
    key = (P, 2)
    try:
        CONWAY_TABLE[key] = (c0, c1, 1)
        # bypass the construction cache so other tests keep their instances
        F = make_field.__wrapped__(P, 2)
        assert F.modulus == (c0, c1, 1)
    finally:
        del CONWAY_TABLE[key]


def test_serialize_parse_roundtrip():
    F = make_field(P, 3)
    for a in rand_elems(F, 5, seed=3):
        assert F.parse_element(a.serialize()) == a
    G = parse_field(F.descriptor())
    assert G == F
    # short descriptor without modulus
    assert parse_field(f"GF({P}^3)") == F
    assert parse_field(f"GF({P})") == make_field(P, 1)


def test_frobenius_is_p_power():
    F = make_field(P, 4)
    for a in rand_elems(F, 5, seed=4):
        assert frobenius(a) == a ** F.p
    # fixed field of frobenius is the prime field
    one = F.one
    assert frobenius(F(7) * one) == F(7) * one


def test_embed_subfield_homomorphism():
    F2 = make_field(P, 2)
    F4 = make_field(P, 4)
    xs = rand_elems(F2, 6, seed=7)
    for a, b in zip(xs[::2], xs[1::2]):
        assert embed(a, F4) * embed(b, F4) == embed(a * b, F4)
        assert embed(a, F4) + embed(b, F4) == embed(a + b, F4)
    # prime-field elements embed to the obvious constants
    assert embed(make_field(P, 1)(5), F4) == F4(5)


def test_roots_in_field():
    F = make_field(P, 2)
    a, b = F(17), F(23)
    # (x - a)(x - b) = x^2 - (a+b) x + ab
    coeffs = [a * b, -(a + b), F.one]
    roots = roots_in_field(F, coeffs)
    assert sorted(r.coeffs for r in roots) == sorted([a.coeffs, b.coeffs])
    # irreducible quadratic over GF(p) has no roots in GF(p)
    F1 = make_field(P, 1)
    mod = make_field(P, 2).modulus
    assert roots_in_field(F1, [F1(c) for c in mod]) == []


def test_large_field_smoke():
    F = make_field(16001, 60)
    a = F(2) ** 100
    assert a * a.inverse() == F.one
    assert frobenius(a) == a ** 16001
