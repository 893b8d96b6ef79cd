"""Candidate Galois representations and their Frobenius characteristic data.

A representation is a formal sum of constituents: one-dimensional pieces
chi * e^w (e the cyclotomic character, arithmetic normalization e(Frob_l) = l)
and two-dimensional newform pieces chi * e^w * sigma.  Everything the search
needs flows through det(I - rho(Frob_l) X), expanded exactly over the working
field, and the Hecke eigenvalue bridge

    sum_k (-1)^k l^(k(k-1)/2) a(l,k) X^k = det(I - rho(Frob_l) X).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .characters import DirichletChar, char_eval, char_name, parse_char_expr, trivial_char
from .fields import ExtField, FieldElement
from .newforms import ReducedNewform


@dataclass(frozen=True)
class Char1D:
    chi: DirichletChar
    w: int

    dim = 1


@dataclass(frozen=True)
class NewformTwist:
    form: ReducedNewform
    chi: DirichletChar
    w: int

    dim = 2


Constituent = Char1D | NewformTwist


@dataclass(frozen=True)
class RepContext:
    N: int
    g: int
    eta: DirichletChar
    field: ExtField


@dataclass(frozen=True)
class GaloisRep:
    constituents: tuple[Constituent, ...]
    context: RepContext

    def __post_init__(self):
        total = sum(c.dim for c in self.constituents)
        if total != 4:
            raise ValueError(f"constituent dimensions sum to {total}, need 4")
        if sum(1 for c in self.constituents if isinstance(c, NewformTwist)) > 1:
            raise ValueError("at most one newform constituent")

    def sorted_constituents(self):
        chars = sorted((c for c in self.constituents if isinstance(c, Char1D)),
                       key=lambda c: (c.w, c.chi.serialize()))
        forms = [c for c in self.constituents if isinstance(c, NewformTwist)]
        return chars + forms


class HeckeData:
    """Observed eigenvalues a(l,k), keyed by (l,k), over a stated operator set.

    computed is the set of labels actually available; values may cover any
    subset of it.
    """

    __slots__ = ("values", "computed")

    def __init__(self, values, computed=None):
        self.values = dict(values)
        self.computed = frozenset(computed if computed is not None
                                  else self.values)
        missing = set(self.values) - self.computed
        if missing:
            raise ValueError(f"values outside the computed set: {sorted(missing)}")

    @property
    def labels(self):
        return frozenset(self.values)

    def primes(self):
        return sorted({ell for ell, _ in self.values})

    def __eq__(self, other):
        return (isinstance(other, HeckeData)
                and self.values == other.values
                and self.computed == other.computed)

    def __repr__(self):
        return f"<HeckeData {sorted(self.values)}>"


def hecke_data_from_rep(rho: GaloisRep, labels) -> HeckeData:
    """Synthesize the eigenvalue data a representation predicts at labels."""
    values = {}
    by_ell = {}
    for ell, k in sorted(labels):
        if ell not in by_ell:
            by_ell[ell] = hecke_from_rep(rho, ell)
        values[(ell, k)] = by_ell[ell][k]
    return HeckeData(values)


def det_character(rho: GaloisRep) -> DirichletChar:
    """The finite part of det(rho) as a character mod N: the product of the
    character constituents and, for a newform piece, chi^2 times the form's
    nebentype lifted to N."""
    N = rho.context.N
    out = trivial_char(N, rho.context.field)
    for c in rho.constituents:
        out = out * c.chi
        if isinstance(c, NewformTwist):
            out = out * c.chi * c.form.nebentype_mod.lift_to(N)
    return out


def frob_charpoly(c: Constituent, ell: int, ctx: RepContext) -> list[FieldElement]:
    """det(I - c(Frob_ell) X), ascending coefficients."""
    F = ctx.field
    if gcd(ell, ctx.N * F.p) != 1:
        raise ValueError(f"ell={ell} divides pN")
    lw = F(ell) ** c.w
    chi_l = char_eval(c.chi, ell)
    if isinstance(c, Char1D):
        return [F.one, -(chi_l * lw)]
    a_ell = c.form.a_mod[ell]
    eps_l = c.form.nebentype_value(ell)
    k = c.form.record.weight
    lin = chi_l * lw * a_ell
    quad = chi_l * chi_l * lw * lw * eps_l * F(ell) ** (k - 1)
    return [F.one, -lin, quad]


def rep_charpoly(rho: GaloisRep, ell: int) -> list[FieldElement]:
    F = rho.context.field
    out = [F.one]
    for c in rho.constituents:
        poly = frob_charpoly(c, ell, rho.context)
        new = [F.zero] * (len(out) + len(poly) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(poly):
                    if b:
                        new[i + j] = new[i + j] + a * b
        out = new
    return out


def hecke_from_rep(rho: GaloisRep, ell: int) -> tuple[FieldElement, ...]:
    """(a(l,0), ..., a(l,4)) predicted by Eq. (2.1)."""
    F = rho.context.field
    cp = rep_charpoly(rho, ell)
    lf = F(ell)
    out = []
    for k in range(5):
        sign = F.one if k % 2 == 0 else -F.one
        scale = (lf ** (k * (k - 1) // 2)).inverse()
        out.append(sign * cp[k] * scale)
    return tuple(out)


def hodge_tate(rho: GaloisRep) -> list[int]:
    ht = []
    for c in rho.constituents:
        if isinstance(c, Char1D):
            ht.append(c.w)
        else:
            ht.extend([c.w, c.w + c.form.record.weight - 1])
    return sorted(ht)


def ht_check(rho: GaloisRep) -> bool:
    g = rho.context.g
    return hodge_tate(rho) == [0, 1, 2, g + 3]


def det_check(rho: GaloisRep, ell: int) -> bool:
    ctx = rho.context
    F = ctx.field
    cp = rep_charpoly(rho, ell)
    expected = char_eval(ctx.eta, ell) * F(ell) ** (ctx.g + 6)
    return cp[4] == expected


def _char_sign(chi: DirichletChar) -> int:
    return 1 if chi.parity() == "even" else -1


def oddness(rho: GaloisRep) -> list[int]:
    """Eigenvalues of rho at complex conjugation, as a +-1 multiset."""
    out = []
    for c in rho.constituents:
        t = _char_sign(c.chi) * (-1) ** c.w
        if isinstance(c, Char1D):
            out.append(t)
        else:
            out.extend([t, -t])
    return sorted(out)


def odd_check(rho: GaloisRep) -> bool:
    return oddness(rho) == [-1, -1, 1, 1]


def classify_pattern(rho: GaloisRep, g: int | None = None,
                     eta: DirichletChar | None = None) -> str:
    """Structural match against the five observed shapes; "other" otherwise."""
    if g is None:
        g = rho.context.g
    chars = {c for c in rho.constituents if isinstance(c, Char1D)}
    forms = [c for c in rho.constituents if isinstance(c, NewformTwist)]
    def w_multiset(cs):
        return sorted(c.w for c in cs)
    if not forms:
        if w_multiset(chars) != sorted({0, 1, 2, g + 3}):
            return "other"
        by_w = {c.w: c.chi for c in chars}
        triv_1 = by_w[1].is_trivial
        chi02 = [by_w[0], by_w[2]]
        nontriv02 = [x for x in chi02 if not x.is_trivial]
        top = by_w[g + 3]
        if not triv_1 or len(nontriv02) != 1:
            return "other"
        if top.is_trivial:
            return "type1"
        return "type2"
    form = forms[0]
    k = form.form.record.weight
    if not form.chi.is_trivial:
        return "other"
    cw = sorted((c.w, c.chi.is_trivial) for c in chars)
    if form.w == 2 and k == g + 2 and cw == [(0, True), (1, True)]:
        return "type3"
    if form.w == 0 and k == 3 and cw == [(1, True), (g + 3, True)]:
        return "type4"
    if form.w == 1 and k == g + 3:
        ws = sorted(c.w for c in chars)
        if ws != [0, 2]:
            return "other"
        nontriv = [c for c in chars if not c.chi.is_trivial]
        if len(nontriv) == 1:
            return "type5"
    return "other"


def _radical(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            out *= d
            while n % d == 0:
                n //= d
        d += 1
    return out * (n if n > 1 else 1)


# ---------------------------------------------------------------------------
# table-style text form: "chi3*e^0 + e^1 + e^2 + e^4", "e^0 + e^1 + e^2*s[3.8.a.a]"

_TERM_RE = re.compile(
    r"^(?:(?P<chi>[A-Za-z0-9_.^*]+?)\*)?e\^(?P<w>\d+)(?:\*s\[(?P<label>[^\]]+)\])?$")


def rep_to_text(rho: GaloisRep) -> str:
    parts = []
    for c in rho.sorted_constituents():
        name = char_name(c.chi)
        if name is None:
            name = c.chi.serialize()
        prefix = "" if name == "1" else f"{name}*"
        if isinstance(c, Char1D):
            parts.append(f"{prefix}e^{c.w}")
        else:
            parts.append(f"{prefix}e^{c.w}*s[{c.form.record.label}]")
    return " + ".join(parts)


def parse_rep_text(text: str, ctx: RepContext, store) -> GaloisRep:
    """Parse the table text form; newform labels resolve through the store.

    A label may correspond to several reductions (primes over p); the
    lexicographically least reduction stands in as the representative, which
    matches how orbit representatives are reported.
    """
    constituents: list[Constituent] = []
    for term in text.split("+"):
        term = term.strip()
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"cannot parse rep term {term!r}")
        w = int(m.group("w"))
        chi_text = m.group("chi")
        chi = (parse_char_expr(chi_text, ctx.N, ctx.field) if chi_text
               else trivial_char(ctx.N, ctx.field))
        label = m.group("label")
        if label is None:
            constituents.append(Char1D(chi, w))
        else:
            reductions = store.reductions(label, ctx.field)
            if not reductions:
                raise ValueError(f"no reduction of {label} in {ctx.field}")
            constituents.append(NewformTwist(reductions[0], chi, w))
    return GaloisRep(tuple(constituents), ctx)
