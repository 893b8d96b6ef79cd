"""Dirichlet characters (Z/N)^x -> GF(p^r)^x.

Characters are stored by their values on a fixed generator basis of the unit
group.  The canonical basis characters (the ones the result tables are
phrased in) ship as bundled data; each is defined at a native prime and is
carried to another field by mapping its value group onto the canonical
cyclic subgroup of the same order there (the one generated by the smallest
root of the cyclotomic polynomial), which exists whenever the character
order divides p^r - 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from math import gcd, lcm

from .fields import ExtField, FieldElement, make_field, roots_in_field


def _euler_phi(n: int) -> int:
    out = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


def _mult_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    o, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        o += 1
    return o


def _smallest_primitive_root(q: int) -> int:
    """q an odd prime power; brute force is fine at these sizes."""
    phi = _euler_phi(q)
    for g in range(2, q):
        if gcd(g, q) == 1 and _mult_order(g, q) == phi:
            return g
    raise ValueError(f"no primitive root mod {q}")


def _crt_lift(a: int, q: int, n: int) -> int:
    """x with x = a mod q and x = 1 mod n/q."""
    m = n // q
    if m == 1:
        return a % n
    inv = pow(m, -1, q)
    one_part = pow(q, -1, m) * q  # = 1 mod m, 0 mod q
    return (a * m * inv + one_part) % n


@dataclass(frozen=True)
class UnitGroup:
    N: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def exponent(self) -> int:
        return lcm(1, *self.orders)


@lru_cache(maxsize=None)
def unit_group(N: int) -> UnitGroup:
    """CRT generator basis of (Z/N)^x: 2-part first, then odd primes ascending."""
    if N < 1:
        raise ValueError("modulus must be positive")
    gens: list[int] = []
    orders: list[int] = []
    n2 = 1
    m = N
    while m % 2 == 0:
        n2 *= 2
        m //= 2
    if n2 == 4:
        gens.append(_crt_lift(3, 4, N))
        orders.append(2)
    elif n2 >= 8:
        gens.append(_crt_lift(n2 - 1, n2, N))
        orders.append(2)
        gens.append(_crt_lift(5, n2, N))
        orders.append(n2 // 4)
    q = 3
    rest = m
    while rest > 1:
        if rest % q == 0:
            qe = 1
            while rest % q == 0:
                qe *= q
                rest //= q
            g = _smallest_primitive_root(qe)
            gens.append(_crt_lift(g, qe, N))
            orders.append(_euler_phi(qe))
        q += 2
    ug = UnitGroup(N, tuple(gens), tuple(orders))
    assert all(_mult_order(g, N) == o for g, o in zip(gens, orders))
    prod = 1
    for o in orders:
        prod *= o
    assert prod == _euler_phi(N)
    return ug


@lru_cache(maxsize=None)
def _unit_dlogs(N: int) -> dict[int, tuple[int, ...]]:
    """Residue -> exponent tuple over the unit_group(N) generators."""
    ug = unit_group(N)
    table: dict[int, tuple[int, ...]] = {1 % N: (0,) * len(ug.generators)}
    frontier = {1 % N: (0,) * len(ug.generators)}
    # direct enumeration: walk all exponent tuples
    exps = [0] * len(ug.generators)
    table = {}
    while True:
        m = 1
        for g, e in zip(ug.generators, exps):
            m = (m * pow(g, e, N)) % N
        table[m] = tuple(exps)
        i = 0
        while i < len(exps):
            exps[i] += 1
            if exps[i] < ug.orders[i]:
                break
            exps[i] = 0
            i += 1
        else:
            break
        if i == len(exps):
            break
    if not ug.generators:
        table = {1 % N: ()}
    assert len(table) == _euler_phi(N)
    return table


class DirichletChar:
    """A character mod N valued in an ExtField, given on the generator basis."""

    __slots__ = ("N", "field", "values", "_order", "_ser")

    def __init__(self, N: int, field: ExtField, values):
        ug = unit_group(N)
        vals = tuple(field(v) if not isinstance(v, FieldElement) else v for v in values)
        if len(vals) != len(ug.generators):
            raise ValueError(f"expected {len(ug.generators)} generator values for N={N}")
        for v, o in zip(vals, ug.orders):
            if not v:
                raise ValueError("character values must be units")
            if v ** o != field.one:
                raise ValueError("value order does not divide generator order")
        self.N = N
        self.field = field
        self.values = vals
        self._order = None
        self._ser = None

    def __eq__(self, other):
        return (isinstance(other, DirichletChar)
                and (self.N, self.field, self.values) == (other.N, other.field, other.values))

    def __hash__(self):
        return hash((self.N, self.field.p, self.field.r, self.values))

    def __repr__(self):
        return self.serialize()

    def __call__(self, m: int) -> FieldElement:
        return char_eval(self, m)

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if self.N != other.N or self.field is not other.field:
            raise ValueError("characters must share modulus and field")
        return DirichletChar(self.N, self.field,
                             [a * b for a, b in zip(self.values, other.values)])

    def __pow__(self, k: int) -> "DirichletChar":
        return DirichletChar(self.N, self.field,
                             [v ** (k % o) for v, o in zip(self.values, unit_group(self.N).orders)])

    @property
    def is_trivial(self) -> bool:
        return all(v == self.field.one for v in self.values)

    def order(self) -> int:
        if self._order is None:
            o = 1
            # ord(v_i) divides the generator order o_i, so scan its divisors
            # rather than factoring the full multiplicative group order
            for v, oi in zip(self.values, unit_group(self.N).orders):
                ov = next(d for d in _divisors(oi) if v ** d == self.field.one)
                o = lcm(o, ov)
            self._order = o
        return self._order

    def parity(self) -> str:
        if self.N <= 2:
            return "even"
        return "even" if char_eval(self, self.N - 1) == self.field.one else "odd"

    def conductor(self) -> int:
        for M in sorted(_divisors(self.N)):
            if self._factors_through(M):
                return M
        raise AssertionError("unreachable: factors through N")

    def _factors_through(self, M: int) -> bool:
        if self.N % M != 0:
            return False
        for m in range(1, self.N + 1):
            if gcd(m, self.N) == 1 and m % M == 1 % M:
                if char_eval(self, m) != self.field.one:
                    return False
        return True

    def restrict_to(self, M: int) -> "DirichletChar":
        """The character mod M inducing this one; conductor must divide M | N."""
        if M % self.conductor() != 0 or self.N % M != 0:
            raise ValueError("target modulus must sit between conductor and modulus")
        ug = unit_group(M)
        vals = []
        for g in ug.generators:
            m = g
            while gcd(m, self.N) != 1:
                m += M
            vals.append(char_eval(self, m))
        return DirichletChar(M, self.field, vals)

    def lift_to(self, M: int) -> "DirichletChar":
        """The character mod M (a multiple of N) with the same coprime values."""
        if M % self.N != 0:
            raise ValueError("can only lift to a multiple of the modulus")
        ug = unit_group(M)
        return DirichletChar(M, self.field, [char_eval(self, g) for g in ug.generators])

    def frobenius_conjugate(self, power: int = 1) -> "DirichletChar":
        F = self.field
        return DirichletChar(self.N, F,
                             [FieldElement(F, F.raw_frobenius(v.coeffs, power)) for v in self.values])

    def serialize(self) -> str:
        if self._ser is None:
            ug = unit_group(self.N)
            inner = ",".join(f"{g}->{v.serialize()}"
                             for g, v in zip(ug.generators, self.values))
            self._ser = f"chi[{self.N};{inner}]"
        return self._ser


def parse_char(text: str, field: ExtField) -> DirichletChar:
    """Inverse of DirichletChar.serialize.

    Entries look like "g->c0,c1,...": values may contain commas when r > 1,
    so the split keys off the "->" markers.
    """
    if not text.startswith("chi[") or not text.endswith("]"):
        raise ValueError(f"bad character serialization: {text!r}")
    body = text[4:-1]
    npart, _, rest = body.partition(";")
    N = int(npart)
    vals = []
    if rest:
        parts = rest.split("->")
        gens = [int(parts[0])]
        texts = []
        for chunk in parts[1:-1]:
            vtext, _, nextg = chunk.rpartition(",")
            texts.append(vtext)
            gens.append(int(nextg))
        texts.append(parts[-1])
        if tuple(gens) != unit_group(N).generators:
            raise ValueError(f"generator list mismatch for modulus {N}")
        vals = [field.parse_element(t) for t in texts]
    return DirichletChar(N, field, vals)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def char_eval(chi: DirichletChar, m: int) -> FieldElement:
    N = chi.N
    if N == 1:
        return chi.field.one
    m = m % N
    if gcd(m, N) != 1:
        raise ValueError(f"character argument {m} not coprime to modulus {N}")
    exps = _unit_dlogs(N)[m]
    out = chi.field.one
    for v, e in zip(chi.values, exps):
        if e:
            out = out * v ** e
    return out


def trivial_char(N: int, field: ExtField) -> DirichletChar:
    return DirichletChar(N, field, [1] * len(unit_group(N).generators))


# ---------------------------------------------------------------------------
# bundled canonical basis


@lru_cache(maxsize=None)
def _basis_table() -> dict[str, dict]:
    text = resources.files("galoisfinder.data").joinpath("basis_characters.json").read_text()
    data = json.loads(text)
    return {row["name"]: row for row in data["rows"]}


def basis_row(name: str) -> dict:
    table = _basis_table()
    if name not in table:
        raise KeyError(f"unknown basis character {name}")
    return table[name]


def basis_names(N: int) -> list[str]:
    return [name for name, row in _basis_table().items() if row["modulus"] == N]


def _cyclotomic(m: int) -> list[int]:
    """Coefficients of the m-th cyclotomic polynomial, ascending degree."""
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d:
            continue
        div = _cyclotomic(d)
        quo = [0] * (len(poly) - len(div) + 1)
        rem = list(poly)
        for i in range(len(quo) - 1, -1, -1):
            c = rem[i + len(div) - 1]
            quo[i] = c
            if c:
                for j, b in enumerate(div):
                    rem[i + j] -= c * b
        poly = quo
    return poly


@lru_cache(maxsize=None)
def root_of_unity(field: ExtField, m: int) -> FieldElement:
    """The canonical primitive m-th root of unity: the smallest root of the
    m-th cyclotomic polynomial in the field."""
    if m == 1:
        return field.one
    roots = roots_in_field(field, [field(c) for c in _cyclotomic(m)])
    if not roots:
        raise ValueError(
            f"no primitive {m}-th root of unity in GF({field.p}^{field.r})")
    return roots[0]


def realize_basis(name: str, field: ExtField, power: int = 1) -> DirichletChar:
    """The named basis character (or a power of it) over the given field.

    Native-prime values carry over directly; over any other field the cyclic
    value group maps onto the canonical subgroup of the same order, which
    requires the character order to divide p^r - 1.
    """
    row = basis_row(name)
    N = row["modulus"]
    native_p = row["p"]
    vals = [pow(v % native_p, power, native_p) for v in row["values"]]
    if field.p == native_p:
        return DirichletChar(N, field, vals)
    m = row["order"]
    zn = pow(_smallest_primitive_root(native_p), (native_p - 1) // m, native_p)
    dlog = {pow(zn, j, native_p): j for j in range(m)}
    zt = root_of_unity(field, m)
    return DirichletChar(N, field, [zt ** dlog[v] for v in vals])


def basis_chars(N: int, field: ExtField) -> list[DirichletChar]:
    """The bundled basis characters of modulus N, realized over field."""
    return [realize_basis(name, field) for name in basis_names(N)]


def check_basis_row(name: str) -> tuple[int, str]:
    """(order, parity) of a basis character over its native prime field."""
    row = basis_row(name)
    chi = realize_basis(name, make_field(row["p"], 1))
    return chi.order(), chi.parity()


# ---------------------------------------------------------------------------
# enumeration and naming


def _foreign_generator_roots(N: int, field: ExtField) -> list[FieldElement]:
    """A primitive o_i-th root of unity in the field per unit-group generator."""
    return [root_of_unity(field, o) for o in unit_group(N).orders]


def enumerate_chars(N: int, field: ExtField) -> list[DirichletChar]:
    """Every character of modulus N over the field, exactly once.

    At a native prime the group is generated by the bundled basis characters,
    so names stay aligned with the tables; otherwise a deterministic set of
    roots of unity stands in.
    """
    ug = unit_group(N)
    exponent = ug.exponent
    if exponent > 1 and pow(field.p, field.r, exponent) != 1 % exponent:
        raise ValueError(
            f"exponent of (Z/{N})^x is {exponent}, which does not divide "
            f"p^r - 1 for p={field.p}, r={field.r}")
    gens: list[DirichletChar] = []
    orders: list[int] = []
    try:
        for name in basis_names(N):
            gens.append(realize_basis(name, field))
        orders = [basis_row(name)["order"] for name in basis_names(N)]
    except ValueError:
        roots = _foreign_generator_roots(N, field)
        gens = []
        for i, root in enumerate(roots):
            vals = [field.one] * len(ug.generators)
            vals[i] = root
            gens.append(DirichletChar(N, field, vals))
        orders = list(ug.orders)
    out = []
    exps = [0] * len(gens)
    while True:
        chi = trivial_char(N, field)
        for g, e in zip(gens, exps):
            if e:
                chi = chi * g ** e
        out.append(chi)
        i = 0
        while i < len(exps):
            exps[i] += 1
            if exps[i] < orders[i]:
                break
            exps[i] = 0
            i += 1
        else:
            break
    if not gens:
        out = [trivial_char(N, field)]
    assert len(set(out)) == len(out) == _euler_phi(N)
    return out


def char_name(chi: DirichletChar) -> str | None:
    """Table-style name ("1", "chi5^3", "chi12.0*chi12.1") when expressible."""
    N = chi.N
    if chi.is_trivial:
        return "1"
    names = basis_names(N)
    combos = [(None, trivial_char(N, chi.field), [])]
    # small group: walk products of realizable basis powers
    pools = []
    for name in names:
        row = basis_row(name)
        pool = []
        for k in range(row["order"]):
            try:
                pool.append((k, realize_basis(name, chi.field, k) if k else trivial_char(N, chi.field)))
            except ValueError:
                continue
        pools.append((name, pool))
    def walk(i, acc, label_parts):
        if i == len(pools):
            if acc == chi:
                return list(label_parts)
            return None
        name, pool = pools[i]
        for k, part in pool:
            piece = [] if k == 0 else [(name, k)]
            got = walk(i + 1, acc * part, label_parts + piece)
            if got is not None:
                return got
        return None
    parts = walk(0, trivial_char(N, chi.field), [])
    if parts is None:
        return None
    return "*".join(f"{n}^{k}" if k > 1 else n for n, k in parts)


def parse_char_expr(expr: str, N: int, field: ExtField) -> DirichletChar:
    """Resolve a product expression like "chi15.0*chi15.1^2" mod N over field."""
    expr = expr.strip()
    if expr in ("1", "triv", "trivial", ""):
        return trivial_char(N, field)
    chi = trivial_char(N, field)
    for token in expr.split("*"):
        token = token.strip()
        if token == "1":
            continue
        if "^" in token:
            base, _, kpart = token.partition("^")
            k = int(kpart)
        else:
            base, k = token, 1
        factor = realize_basis(base.strip(), field, k)
        chi = chi * factor.lift_to(N)
    return chi


def galois_orbit(chi: DirichletChar) -> list[DirichletChar]:
    """Orbit of chi under value-wise Frobenius (chi -> chi^p)."""
    orbit = [chi]
    cur = chi.frobenius_conjugate()
    while cur != chi:
        orbit.append(cur)
        cur = cur.frobenius_conjugate()
    return orbit


def stabilizer_of(eta: DirichletChar) -> int:
    """Exponent j such that sigma^j generates the stabilizer of eta in Gal(F/F_p)."""
    return len(galois_orbit(eta))
