"""Dirichlet characters over finite fields."""

from math import gcd

import pytest

from galoisfinder.characters import (DirichletChar, basis_names, char_eval,
                                     char_name, check_basis_row,
                                     enumerate_chars, galois_orbit,
                                     parse_char, parse_char_expr,
                                     stabilizer_of, trivial_char, unit_group)
from galoisfinder.fields import make_field


def euler_phi(n):
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def carmichael(n):
    from math import lcm
    units = [a for a in range(1, n + 1) if gcd(a, n) == 1]

    def order(a):
        k, x = 1, a % n
        while x != 1 % n:
            x = x * a % n
            k += 1
        return k
    return lcm(*(order(a) for a in units)) if units else 1


@pytest.mark.parametrize("N", list(range(1, 41)))
def test_unit_group_structure(N):
    ug = unit_group(N)
    prod = 1
    for o in ug.orders:
        prod *= o
    assert prod == euler_phi(N)
    assert ug.exponent == carmichael(N)
    for g, o in zip(ug.generators, ug.orders):
        assert gcd(g, N) == 1
        assert pow(g, o, N) == 1 % N


@pytest.mark.parametrize("N", [1, 3, 5, 8, 12, 13, 16, 17])
def test_enumerate_chars_group(N):
    F = make_field(16001, 1) if N == 17 else make_field(12037, 1)
    chars = enumerate_chars(N, F)
    assert len(chars) == euler_phi(N)
    assert len(set(chars)) == len(chars)
    # multiplicativity at random coprime arguments
    for chi in chars[:6]:
        for a, b in [(2, 5), (7, 11), (3, 7)]:
            if gcd(a * b, N) != 1:
                continue
            assert char_eval(chi, a * b % N) == char_eval(chi, a) * char_eval(chi, b)
    # closed under product
    if len(chars) > 1:
        assert chars[0] * chars[1] in set(chars)


def test_order_parity_conductor():
    F = make_field(12037, 1)
    chars = enumerate_chars(12, F)
    for chi in chars:
        # parity by direct evaluation at -1
        sign = char_eval(chi, 11)  # -1 mod 12
        assert (chi.parity() == "even") == (sign == F.one)
        # conductor: minimal modulus the character factors through
        conds = []
        for M in (1, 2, 3, 4, 6, 12):
            ok = all(char_eval(chi, a) == char_eval(chi, b)
                     for a in range(1, 13) for b in range(1, 13)
                     if gcd(a, 12) == 1 and gcd(b, 12) == 1 and (a - b) % M == 0)
            if ok:
                conds.append(M)
        assert chi.conductor() == min(conds)
        # order is the exponent in the character group
        k = 1
        acc = chi
        while not acc.is_trivial:
            acc = acc * chi
            k += 1
        assert chi.order() == k


def test_serialize_roundtrip():
    F = make_field(12037, 1)
    for chi in enumerate_chars(13, F):
        assert parse_char(chi.serialize(), F) == chi


def test_lift_restrict_roundtrip():
    F = make_field(12037, 1)
    for chi in enumerate_chars(5, F):
        lifted = chi.lift_to(15)
        assert lifted.N == 15
        assert lifted.restrict_to(5) == chi
        for a in range(1, 15):
            if gcd(a, 15) == 1:
                assert char_eval(lifted, a) == char_eval(chi, a % 5)


def test_basis_rows_verify():
    for N in (3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 17):
        for name in basis_names(N):
            check_basis_row(name)


def test_char_name_parse_expr_roundtrip():
    # each expression over the native prime of its basis characters
    cases = [("1", 1, 12037), ("chi3", 3, 12379), ("chi5", 5, 16001),
             ("chi5^2", 5, 16001), ("chi13", 13, 12037),
             ("chi15.0", 15, 12037), ("chi15.0*chi15.1^2", 15, 12037),
             ("chi16.0", 16, 16001), ("chi16.0*chi16.1", 16, 16001)]
    for expr, N, p in cases:
        F = make_field(p, 1)
        chi = parse_char_expr(expr, N, F)
        name = char_name(chi)
        assert name is not None
        assert parse_char_expr(name, N, F) == chi


def test_frobenius_conjugate_and_orbits():
    F = make_field(12037, 4)
    chars = enumerate_chars(5, F)  # order-4 characters; 4 | 12037 - 1
    for chi in chars:
        conj = chi.frobenius_conjugate()
        for a in (2, 3):
            assert char_eval(conj, a) == char_eval(chi, a) ** F.p
        orbit = galois_orbit(chi)
        assert len(orbit) >= 1
        assert stabilizer_of(chi) == len(orbit)
    triv = trivial_char(5, F)
    assert stabilizer_of(triv) == 1


def test_trivial_char_values():
    F = make_field(12037, 1)
    chi = trivial_char(6, F)
    assert chi.is_trivial
    assert char_eval(chi, 5) == F.one
    with pytest.raises(ValueError):
        char_eval(chi, 2)  # not a unit mod 6
