"""Joint eigenspace decomposition of commuting operators over GF(p^r).

The space is refined one operator at a time: restrict, take the
characteristic polynomial, find its roots in the field, and split into
kernels.  Semisimplicity is verified along the way rather than assumed; when
an eigenvalue lives outside the field the diagnostic names the irreducible
factor degrees so the caller knows how much to enlarge r.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from . import linalg
from .characters import DirichletChar, stabilizer_of
from .fields import (ExtField, FieldElement, _fp_compose_mod, _fp_gcd, _fp_divmod,
                     _fp_monic, _fp_sub, _fp_trim, _frobenius_power_mod,
                     roots_in_field)

Label = tuple[int, int]


@dataclass(frozen=True)
class OperatorFamily:
    labels: tuple[Label, ...]
    matrices: tuple
    field: ExtField

    def __post_init__(self):
        if len(self.labels) != len(self.matrices):
            raise ValueError("one matrix per label required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        d = len(self.matrices[0]) if self.matrices else 0
        for m in self.matrices:
            if len(m) != d or any(len(row) != d for row in m):
                raise ValueError("all matrices must be square of a common size")

    @property
    def dim(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0


@dataclass(frozen=True)
class JointEigenspace:
    eigensystem: tuple[tuple[Label, FieldElement], ...]
    basis: tuple
    semisimple_here: bool = True

    @property
    def hecke_mult(self) -> int:
        return len(self.basis)

    def value(self, label: Label) -> FieldElement:
        return dict(self.eigensystem)[label]

    def sort_key(self):
        return tuple((lab, v.coeffs) for lab, v in self.eigensystem)


class EigenvalueOutsideField(ValueError):
    """Charpoly has an irreducible factor of degree > 1 over the field."""

    def __init__(self, degrees: list[int]):
        self.degrees = sorted(degrees)
        super().__init__(
            "eigenvalue outside the field; enlarge r by the irreducible factor "
            f"degrees {self.degrees}")


def check_commuting(family: OperatorFamily) -> list[tuple[Label, Label]]:
    bad = []
    F = family.field
    n = len(family.matrices)
    for i in range(n):
        for j in range(i + 1, n):
            ab = linalg.mat_mul(F, family.matrices[i], family.matrices[j])
            ba = linalg.mat_mul(F, family.matrices[j], family.matrices[i])
            if ab != ba:
                bad.append((family.labels[i], family.labels[j]))
    return bad


def _irreducible_factor_degrees(F: ExtField, f) -> list[int]:
    """Degrees of the irreducible factors of a squarefree monic f over F,
    by distinct-degree factorization."""
    raw = [c.coeffs for c in f]
    g = _fp_monic(F, _fp_trim(list(raw)))
    degrees = []
    i = 0
    xq1 = None
    xqi = [F.rzero, F.rone]
    while len(g) - 1 > 0:
        i += 1
        if 2 * i > len(g) - 1:
            degrees.append(len(g) - 1)
            break
        if xq1 is None:
            xq1 = _frobenius_power_mod(F, g, F.r)
        # coefficients lie in GF(q), so x^(q^(i+1)) = x^(q^i) composed with x^q
        xqi = _fp_compose_mod(F, xqi, xq1, g)
        h = _fp_gcd(F, _fp_sub(F, xqi, [F.rzero, F.rone]), g)
        if len(h) - 1 > 0:
            degrees.extend([i] * ((len(h) - 1) // i))
            g = _fp_divmod(F, g, h)[0]
            if len(g) - 1 == 0:
                break
            xq1 = _fp_divmod(F, xq1, g)[1]
            xqi = _fp_divmod(F, xqi, g)[1]
    return degrees


def joint_eigenspaces(family: OperatorFamily, allow_non_semisimple: bool = True):
    """Decompose into joint eigenspaces.

    Returns (spaces, semisimple).  Non-semisimple inputs yield generalized
    eigenspace dimensions with semisimple=False instead of aborting.
    """
    bad = check_commuting(family)
    if bad:
        raise ValueError(f"operators do not commute: {bad}")
    F = family.field
    d = family.dim
    # each work item: (values so far, basis vectors, still-semisimple flag)
    spaces = [((), [_unit_vector(F, d, i) for i in range(d)], True)]
    for label, T in zip(family.labels, family.matrices):
        new_spaces = []
        for values, basis, ok in spaces:
            M = linalg.restrict_operator(F, T, basis)
            k = len(basis)
            cp = linalg.charpoly(F, M)
            roots = roots_in_field(F, cp)
            if len(roots) < k:
                sf = _squarefree_part(F, cp)
                degs = [dg for dg in _irreducible_factor_degrees(F, sf) if dg > 1]
                raise EigenvalueOutsideField(degs)
            mults: dict[tuple, int] = {}
            for rt in roots:
                mults[rt.coeffs] = mults.get(rt.coeffs, 0) + 1
            eig_dim_total = 0
            pieces = []
            for rt_coeffs, mult in sorted(mults.items()):
                a = FieldElement(F, rt_coeffs)
                shifted = linalg.mat_add_scalar_diag(F, M, -a)
                ker = linalg.kernel(F, shifted)
                eig_dim_total += len(ker)
                if len(ker) < mult:
                    # generalized eigenspace to keep the refinement spanning
                    power = shifted
                    for _ in range(mult - 1):
                        power = linalg.mat_mul(F, power, shifted)
                    ker = linalg.kernel(F, power)
                    piece_ok = False
                else:
                    piece_ok = True
                vecs = [_combine(F, basis, coords) for coords in ker]
                pieces.append((a, vecs, piece_ok))
            step_ok = eig_dim_total == k
            for a, vecs, piece_ok in pieces:
                new_spaces.append((values + ((label, a),), vecs, ok and step_ok and piece_ok))
        spaces = new_spaces
    semisimple = all(ok for _, _, ok in spaces)
    out = [JointEigenspace(values, tuple(tuple(v) for v in basis), ok)
           for values, basis, ok in spaces]
    out.sort(key=lambda s: s.sort_key())
    return out, semisimple


def _squarefree_part(F: ExtField, cp):
    raw = _fp_trim([c.coeffs for c in cp])
    f = _fp_monic(F, raw)
    deriv = _fp_trim([F.raw_mul(f[i], F((i)).coeffs) for i in range(1, len(f))])
    sf = _fp_divmod(F, f, _fp_gcd(F, f, deriv))[0]
    return [FieldElement(F, c) for c in sf]


def _unit_vector(F: ExtField, d: int, i: int):
    v = [F.zero] * d
    v[i] = F.one
    return v


def _combine(F: ExtField, basis, coords):
    out = [F.zero] * len(basis[0])
    for c, vec in zip(coords, basis):
        if c:
            for i, x in enumerate(vec):
                if x:
                    out[i] = out[i] + c * x
    return out


@dataclass(frozen=True)
class GaloisOrbit:
    representative: tuple[tuple[Label, FieldElement], ...]
    members: tuple[JointEigenspace, ...]
    galois_mult: int


def _conjugate_system(F: ExtField, system, power: int):
    return tuple((lab, FieldElement(F, F.raw_frobenius(v.coeffs, power)))
                 for lab, v in system)


def orbit_of_system(F: ExtField, system, eta: DirichletChar) -> list[tuple]:
    """Orbit of an eigensystem under G_eta (stabilizer of eta in Gal(F/F_p))."""
    step = stabilizer_of(eta)
    orbit = [tuple(system)]
    cur = _conjugate_system(F, system, step)
    while cur != tuple(system):
        orbit.append(cur)
        cur = _conjugate_system(F, cur, step)
    return orbit


def galois_orbits(spaces, eta: DirichletChar, field: ExtField) -> list[GaloisOrbit]:
    """Group eigenspaces whose eigensystems are G_eta-conjugate.

    galois_mult is the full orbit size of the eigensystem, whether or not all
    conjugates appear among the supplied spaces.
    """
    remaining = list(spaces)
    orbits = []
    while remaining:
        head = remaining[0]
        orbit_systems = orbit_of_system(field, head.eigensystem, eta)
        orbit_set = set(orbit_systems)
        members = [s for s in remaining if s.eigensystem in orbit_set]
        remaining = [s for s in remaining if s.eigensystem not in orbit_set]
        rep = min(orbit_systems, key=lambda sys_: tuple((lab, v.coeffs) for lab, v in sys_))
        orbits.append(GaloisOrbit(rep, tuple(members), len(orbit_systems)))
    orbits.sort(key=lambda o: tuple((lab, v.coeffs) for lab, v in o.representative))
    return orbits
