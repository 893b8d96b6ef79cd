"""Joint eigenspace engine on planted instances."""

import random

import pytest

from galoisfinder.characters import trivial_char
from galoisfinder.eigen import (EigenvalueOutsideField, OperatorFamily,
                                check_commuting, galois_orbits,
                                joint_eigenspaces)
from galoisfinder.fields import FieldElement, make_field
from galoisfinder.linalg import identity, mat_mul, mat_vec, rank, solve

P = 12037


def rand_invertible(F, n, rng):
    while True:
        M = [[F(rng.randrange(F.p)) for _ in range(n)] for _ in range(n)]
        if rank(F, M) == n:
            return M


def mat_inverse(F, M):
    n = len(M)
    cols = []
    for j in range(n):
        e = [F.one if i == j else F.zero for i in range(n)]
        cols.append(solve(F, M, e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def planted_family(F, diags, rng):
    """Commuting matrices sharing the eigenbasis P^-1: columns of P^-1."""
    n = len(diags[0])
    Pm = rand_invertible(F, n, rng)
    Pinv = mat_inverse(F, Pm)
    mats = []
    for d in diags:
        D = [[d[i] if i == j else F.zero for j in range(n)] for i in range(n)]
        mats.append(mat_mul(F, Pinv, mat_mul(F, D, Pm)))
    labels = tuple((ell, 1) for ell in (2, 3, 5, 7)[:len(diags)])
    return OperatorFamily(labels, tuple(tuple(tuple(r) for r in m) for m in mats), F)


def planted_instance(F, n, nops, rng):
    diags = [[F(rng.randrange(1, F.p)) for _ in range(n)] for _ in range(nops)]
    fam = planted_family(F, diags, rng)
    systems = {}
    for i in range(n):
        key = tuple((lab, diags[j][i]) for j, lab in enumerate(fam.labels))
        systems[key] = systems.get(key, 0) + 1
    return fam, systems


@pytest.mark.parametrize("r", [1, 2])
def test_planted_diagonals_recovered(r):
    F = make_field(P, r)
    rng = random.Random(100 + r)
    for trial in range(6):
        n = rng.randrange(2, 12)
        nops = rng.randrange(2, 5)
        fam, want = planted_instance(F, n, nops, rng)
        assert check_commuting(fam) == []
        spaces, semisimple = joint_eigenspaces(fam)
        assert semisimple
        got = {s.eigensystem: s.hecke_mult for s in spaces}
        assert got == want
        # eigenvectors actually are joint eigenvectors
        for s in spaces:
            for v in s.basis:
                for lab, mat in zip(fam.labels, fam.matrices):
                    assert mat_vec(F, [list(r_) for r_ in mat], list(v)) == \
                        [s.value(lab) * x for x in v]


def test_jordan_block_not_semisimple():
    F = make_field(P, 1)
    lam = F(9)
    J = ((lam, F.one), (F.zero, lam))
    fam = OperatorFamily(((2, 1),), (J,), F)
    spaces, semisimple = joint_eigenspaces(fam)
    assert not semisimple
    assert len(spaces) == 1
    assert not spaces[0].semisimple_here


def test_eigenvalue_outside_field():
    F = make_field(P, 1)
    # companion matrix of the degree-2 field modulus: irreducible over GF(p)
    mod = make_field(P, 2).modulus
    M = ((F.zero, F(-mod[0])), (F.one, F(-mod[1])))
    fam = OperatorFamily(((2, 1),), (M,), F)
    with pytest.raises(EigenvalueOutsideField) as exc:
        joint_eigenspaces(fam)
    assert 2 in exc.value.degrees


def test_non_commuting_detected():
    F = make_field(P, 1)
    A = ((F.zero, F.one), (F.zero, F.zero))
    B = ((F.one, F.zero), (F.zero, F(2)))
    fam = OperatorFamily(((2, 1), (3, 1)), (A, B), F)
    assert check_commuting(fam) == [((2, 1), (3, 1))]


def test_galois_orbit_grouping():
    F = make_field(P, 2)
    rng = random.Random(42)
    # plant a conjugate pair: eigenvalues a and a^p of the frobenius orbit
    a = None
    while a is None:
        cand = FieldElement(F, (rng.randrange(P), rng.randrange(1, P)))
        if cand ** P != cand:
            a = cand
    diag = [a, a ** P, F(5)]
    fam = planted_family(F, [diag], rng)
    spaces, _ = joint_eigenspaces(fam)
    eta = trivial_char(1, F)
    orbits = galois_orbits(spaces, eta, F)
    assert sorted(o.galois_mult for o in orbits) == [1, 2]
    pair = [o for o in orbits if o.galois_mult == 2][0]
    assert len(pair.members) == 2
