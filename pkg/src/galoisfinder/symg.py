"""The twisted coefficient module Sym^g(F^4)_eta.

Vectors are coefficient lists over the graded-lex monomial basis of
homogeneous degree-g polynomials in four variables.  A semigroup matrix s
acts on the right (substitution of linear forms) twisted by eta(s_44).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

from .characters import DirichletChar, char_eval
from .fields import ExtField, FieldElement


@lru_cache(maxsize=None)
def monomial_basis(g: int) -> tuple[tuple[int, int, int, int], ...]:
    """Exponent 4-tuples summing to g, in graded-lex order (lex here, since
    all tuples share the same degree)."""
    if g < 0:
        raise ValueError("degree must be nonnegative")
    tuples = []
    for e1 in range(g, -1, -1):
        for e2 in range(g - e1, -1, -1):
            for e3 in range(g - e1 - e2, -1, -1):
                tuples.append((e1, e2, e3, g - e1 - e2 - e3))
    return tuple(tuples)


def dimension(g: int) -> int:
    if g < 0:
        raise ValueError("degree must be nonnegative")
    return comb(g + 3, 3)


@dataclass(frozen=True)
class SymGModule:
    g: int
    eta: DirichletChar
    field: ExtField

    @property
    def basis(self) -> tuple[tuple[int, int, int, int], ...]:
        return monomial_basis(self.g)

    @property
    def dim(self) -> int:
        return dimension(self.g)

    def zero_vector(self) -> list[FieldElement]:
        return [self.field.zero] * self.dim


def _int_det4(s) -> int:
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    total = 0
    for j in range(4):
        minor = [[s[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * s[0][j] * det3(minor)
    return total


def check_semigroup_matrix(s, p: int, N: int) -> None:
    """Membership conditions for S_{pN}; raises naming the failed one."""
    det = _int_det4(s)
    if det <= 0:
        raise ValueError(f"matrix determinant {det} is not positive")
    if gcd(det, p * N) != 1:
        raise ValueError(f"matrix determinant {det} shares a factor with pN={p * N}")
    for j in range(3):
        if s[3][j] % N != 0:
            raise ValueError(
                f"bottom row not congruent to (0,0,0,*) mod {N}: entry {j} is {s[3][j]}")


def act(s, v, module: SymGModule):
    """Right action of an integer S_{pN} matrix on a coefficient vector.

    Each variable x_j is replaced by the linear form sum_i s[i][j] x_i, the
    polynomial is expanded on the monomial basis, and the result is scaled by
    eta(s_44).  Satisfies act(t, act(s, v)) = act(s t, v).
    """
    F = module.field
    check_semigroup_matrix(s, F.p, module.eta.N)
    basis = module.basis
    index = _basis_index(module.g)
    if len(v) != len(basis):
        raise ValueError("coefficient vector length mismatch")
    # linear forms as dicts monomial-exponent-tuple -> field coeff
    # x_j -> sum_i s[j][i] x_i, which makes act(t, act(s, v)) = act(s t, v)
    forms = []
    for j in range(4):
        form = {}
        for i in range(4):
            c = s[j][i] % F.p
            if c:
                e = [0, 0, 0, 0]
                e[i] = 1
                form[tuple(e)] = F(c)
        forms.append(form)
    twist = char_eval(module.eta, s[3][3])
    out = [F.zero] * len(basis)
    for bidx, exps in enumerate(basis):
        coeff = v[bidx]
        if not coeff:
            continue
        poly = {(0, 0, 0, 0): coeff * twist}
        for j in range(4):
            for _ in range(exps[j]):
                poly = _poly_mul(F, poly, forms[j])
        for mono, c in poly.items():
            if c:
                out[index[mono]] = out[index[mono]] + c
    return out


@lru_cache(maxsize=None)
def _basis_index(g: int) -> dict[tuple[int, int, int, int], int]:
    return {mono: i for i, mono in enumerate(monomial_basis(g))}


def _poly_mul(F: ExtField, a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3])
            prod = ca * cb
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return out


def serialize_vector(module: SymGModule, v) -> str:
    head = f"g={module.g};{module.field.descriptor()}"
    body = ";".join(c.serialize() for c in v)
    return head + "|" + body
