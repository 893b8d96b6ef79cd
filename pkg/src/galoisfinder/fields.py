"""Exact arithmetic in GF(p^r) towers.

Fields are constructed deterministically: for a given (p, r) the defining
modulus is either looked up in the bundled Conway table or, failing that,
chosen as the lexicographically smallest monic irreducible of degree r
(coefficients compared low-degree-first).  Elements are immutable coefficient
vectors in the power basis, so fields and elements can be shared freely.

Root-finding never scans the field: we take gcd with x^(p^r) - x and then
split the product of linear factors with randomized trace maps, which works
even for fields like GF(16001^60).
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Conway polynomials would give compatible embeddings for free, but no
# published table covers five-digit primes at these degrees.  The hook stays
# so a table can be dropped in; keys are (p, r), values ascending coeff lists.
CONWAY_TABLE: dict[tuple[int, int], tuple[int, ...]] = {}


def is_prime(n: int) -> bool:
    """Trial division; the primes in play have at most five digits."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p on plain int lists (ascending degree)

def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    c = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    return _pp_trim([int(v) % p for v in c])


def _pp_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - df
            for i in range(df):
                a[shift + i] = (a[shift + i] - lead * f[i]) % p
        a.pop()
    return _pp_trim([v % p for v in a])


def _pp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _pp_trim(list(a)), _pp_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _pp_mod(a, bm, p)
    if a and a[-1] != 1:
        # keep the result monic: downstream reduction assumes monic moduli
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _pp_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append((x - y) % p)
    return _pp_trim(out)


def _pp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    rem = _pp_trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(rem) - db, 0)
    while len(rem) - 1 >= db and rem:
        c = (rem[-1] * inv_lead) % p
        d = len(rem) - 1 - db
        q[d] = c
        for i in range(db + 1):
            rem[d + i] = (rem[d + i] - c * b[i]) % p
        rem = _pp_trim(rem)
    return _pp_trim(q), rem


def _pp_xgcd_modinv(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    """Inverse of a modulo the monic polynomial f, via extended Euclid."""
    r0, r1 = list(f), _pp_trim(list(a))
    t0: list[int] = []
    t1: list[int] = [1]
    while r1:
        q, rem = _pp_divmod(r0, r1, p)
        t2 = _pp_sub(t0, _pp_mul(q, t1, p), p)
        r0, r1 = r1, rem
        t0, t1 = t1, t2
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible")
    inv = pow(r0[0], p - 2, p)
    return _pp_trim([(c * inv) % p for c in t0])


def _pp_powmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    b = _pp_mod(base, f, p)
    while e:
        if e & 1:
            result = _pp_mod(_pp_mul(result, b, p), f, p)
        b = _pp_mod(_pp_mul(b, b, p), f, p)
        e >>= 1
    return result


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    m = mat % p
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r, c]:
                piv = r
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        nz = [r for r in range(rows) if r != rank and m[r, c]]
        if nz:
            m[nz] = (m[nz] - np.outer(m[nz, c], m[rank])) % p
        rank += 1
        if rank == rows:
            break
    return rank


def _is_irreducible(f: list[int], p: int) -> bool:
    """Berlekamp count: squarefree and rank(Q - I) = deg - 1."""
    r = len(f) - 1
    if r == 1:
        return True
    if f[0] == 0:
        return False
    deriv = _pp_trim([(i * f[i]) % p for i in range(1, len(f))])
    if len(_pp_gcd(f, deriv, p)) != 1:
        return False
    xp = _pp_powmod([0, 1], p, f, p)
    rows = []
    cur = [1]
    for _ in range(r):
        rows.append(cur + [0] * (r - len(cur)))
        cur = _pp_mod(_pp_mul(cur, xp, p), f, p)
    q = np.array(rows, dtype=np.int64)
    qi = (q - np.eye(r, dtype=np.int64)) % p
    return _rank_mod_p(qi, p) == r - 1


def _lex_min_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Smallest (c0,...,c_{r-1}) in low-degree-first lex order with
    x^r + c_{r-1}x^{r-1} + ... + c_0 irreducible."""
    if r == 1:
        return (0, 1)
    # c0 = 0 forces a root at 0, so enumeration starts at c0 = 1
    n = p ** (r - 1)
    while True:
        digits = []
        m = n
        for _ in range(r):
            digits.append(m % p)
            m //= p
        digits.reverse()  # big-endian: digits[0] = c0
        f = digits + [1]
        if _is_irreducible(f, p):
            return tuple(f)
        n += 1


class FieldElement:
    """An element of an ExtField, stored as a length-r residue vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: "ExtField", coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self):
        return f"<{','.join(map(str, self.coeffs))} in GF({self.field.p}^{self.field.r})>"

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.r, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other
        if isinstance(other, int):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_sub(o.coeffs, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.raw_mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.raw_neg(self.coeffs))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            return self.inverse() ** (-e)
        result = F.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.field.raw_inv(self.coeffs))

    def multiplicative_order(self) -> int:
        if not self:
            raise ValueError("zero has no multiplicative order")
        n = self.field.p ** self.field.r - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and self ** (order // q) == self.field.one:
                order //= q
        return order

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


class ExtField:
    """GF(p^r) with a fixed monic irreducible modulus (ascending coeffs)."""

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.modulus = modulus
        # reduction table: row k is x^(r+k) mod modulus, k = 0..r-2
        if r > 1:
            rows = []
            cur = [(-c) % p for c in modulus[:r]]  # x^r mod m
            for _ in range(r - 1):
                rows.append(list(cur))
                cur = [0] + cur
                lead = cur.pop()
                if lead:
                    cur = [(cur[i] - lead * modulus[i]) % p for i in range(r)]
            self._red = np.array(rows, dtype=np.int64)  # (r-1) x r
        else:
            self._red = None
        self.rzero = (0,) * r
        self.rone = (1,) + (0,) * (r - 1)
        self.zero = FieldElement(self, self.rzero)
        self.one = FieldElement(self, self.rone)
        self._frob_mat: np.ndarray | None = None
        self._embed_cache: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    # -- raw tuple arithmetic ------------------------------------------------

    def raw_add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def raw_sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def raw_neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def raw_mul(self, a, b):
        p, r = self.p, self.r
        if r == 1:
            return ((a[0] * b[0]) % p,)
        c = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        low = c[:r].copy()
        if len(c) > r:
            high = c[r:]
            low += high @ self._red[: len(high)]
        return tuple(int(v) % p for v in low)

    def raw_inv(self, a):
        if self.r == 1:
            return (pow(a[0], self.p - 2, self.p),)
        inv = _pp_xgcd_modinv(list(a), list(self.modulus), self.p)
        return tuple(inv + [0] * (self.r - len(inv)))

    # -- element construction --------------------------------------------------

    def __call__(self, value) -> FieldElement:
        """Coerce an integer or coefficient sequence into the field."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise ValueError("field mismatch")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.r - 1))
        coeffs = tuple(int(v) % self.p for v in value)
        if len(coeffs) > self.r:
            raise ValueError("coefficient vector too long")
        return FieldElement(self, coeffs + (0,) * (self.r - len(coeffs)))

    def gen(self) -> FieldElement:
        if self.r == 1:
            return self.zero
        return FieldElement(self, (0, 1) + (0,) * (self.r - 2))

    def random_element(self, rng: random.Random) -> FieldElement:
        return FieldElement(self, tuple(rng.randrange(self.p) for _ in range(self.r)))

    def order(self) -> int:
        return self.p ** self.r

    # -- Frobenius ---------------------------------------------------------

    def frobenius_matrix(self) -> np.ndarray:
        """r x r matrix of a -> a^p in the power basis (columns = basis images)."""
        if self._frob_mat is None:
            cols = []
            xp = _pp_powmod([0, 1], self.p, list(self.modulus), self.p)
            cur = [1]
            for _ in range(self.r):
                cols.append(cur + [0] * (self.r - len(cur)))
                cur = _pp_mod(_pp_mul(cur, xp, self.p), list(self.modulus), self.p)
            self._frob_mat = np.array(cols, dtype=np.int64).T % self.p
        return self._frob_mat

    def raw_frobenius(self, a, power: int = 1):
        if self.r == 1:
            return a
        m = self.frobenius_matrix()
        v = np.asarray(a, dtype=np.int64)
        for _ in range(power % self.r):
            v = (m @ v) % self.p
        return tuple(int(x) for x in v)

    # -- serialization -------------------------------------------------------

    def descriptor(self) -> str:
        mod = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.r}):modulus={mod}"

    def parse_element(self, text: str) -> FieldElement:
        parts = [int(t) for t in text.strip().split(",")]
        if len(parts) != self.r:
            raise ValueError(f"expected {self.r} coefficients, got {len(parts)}")
        return self(parts)

    def __repr__(self):
        return f"ExtField({self.p}, {self.r})"

    def __eq__(self, other):
        return (isinstance(other, ExtField)
                and (self.p, self.r, self.modulus) == (other.p, other.r, other.modulus))

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))


@lru_cache(maxsize=None)
def make_field(p: int, r: int) -> ExtField:
    """Construct GF(p^r) with the deterministic modulus choice."""
    if not is_prime(p) or p <= 5:
        raise ValueError(f"p must be a prime > 5, got {p}")
    if r < 1:
        raise ValueError(f"degree must be >= 1, got {r}")
    modulus = CONWAY_TABLE.get((p, r))
    if modulus is None:
        modulus = _lex_min_irreducible(p, r)
    return ExtField(p, r, modulus)


def frobenius(a: FieldElement) -> FieldElement:
    """The p-power map, a generator of Gal(GF(p^r)/GF(p))."""
    return FieldElement(a.field, a.field.raw_frobenius(a.coeffs))


def parse_field(text: str) -> ExtField:
    head, _, modpart = text.partition(":modulus=")
    if not head.startswith("GF(") or not head.endswith(")"):
        raise ValueError(f"bad field descriptor: {text!r}")
    inner = head[3:-1]
    if "^" in inner:
        ps, rs = inner.split("^")
    else:
        ps, rs = inner, "1"
    field = make_field(int(ps), int(rs))
    if modpart:
        coeffs = tuple(int(c) for c in modpart.split(","))
        if coeffs != field.modulus:
            raise ValueError("modulus mismatch with deterministic construction")
    return field


# ---------------------------------------------------------------------------
# polynomials over an ExtField: lists of raw coefficient tuples, ascending


def _fp_trim(a: list) -> list:
    while a and not any(a[-1]):
        a.pop()
    return a


def _fp_mul(F: ExtField, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.rzero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not any(ai):
            continue
        for j, bj in enumerate(b):
            if any(bj):
                out[i + j] = F.raw_add(out[i + j], F.raw_mul(ai, bj))
    return _fp_trim(out)


def _fp_monic(F: ExtField, a: list) -> list:
    if not a:
        return a
    lead = a[-1]
    if lead == F.rone:
        return list(a)
    inv = F.raw_inv(lead)
    return [F.raw_mul(c, inv) for c in a]


def _fp_divmod(F: ExtField, a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    inv = F.raw_inv(b[-1])
    q = [F.rzero] * max(len(a) - db, 0)
    while len(a) - 1 >= db and _fp_trim(a):
        if len(a) - 1 < db:
            break
        c = F.raw_mul(a[-1], inv)
        d = len(a) - 1 - db
        q[d] = c
        for i in range(db + 1):
            a[d + i] = F.raw_sub(a[d + i], F.raw_mul(c, b[i]))
        a.pop()
    return _fp_trim(q), _fp_trim(a)


def _fp_mod(F: ExtField, a: list, b: list) -> list:
    return _fp_divmod(F, a, b)[1]


def _fp_gcd(F: ExtField, a: list, b: list) -> list:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(F, a, _fp_monic(F, b))
    return _fp_monic(F, a)


def _fp_powmod(F: ExtField, base: list, e: int, f: list) -> list:
    result = [F.rone]
    b = _fp_mod(F, base, f)
    while e:
        if e & 1:
            result = _fp_mod(F, _fp_mul(F, result, b), f)
        b = _fp_mod(F, _fp_mul(F, b, b), f)
        e >>= 1
    return result


def _fp_compose_mod(F: ExtField, outer: list, inner: list, f: list) -> list:
    """outer(inner(x)) mod f by Horner."""
    result: list = []
    for c in reversed(outer):
        result = _fp_mod(F, _fp_mul(F, result, inner), f)
        if not result:
            result = [c] if any(c) else []
        else:
            result[0] = F.raw_add(result[0], c)
    return _fp_trim(result)


def _fp_frob_coeffs(F: ExtField, a: list, power: int = 1) -> list:
    return [F.raw_frobenius(c, power) for c in a]


def roots_in_field(F: ExtField, coeffs: Iterable[FieldElement | int]) -> list[FieldElement]:
    """Roots of the polynomial lying in F, with multiplicity."""
    raw = []
    for c in coeffs:
        if isinstance(c, FieldElement):
            if c.field is not F:
                raise ValueError("field mismatch")
            raw.append(c.coeffs)
        else:
            raw.append(F(c).coeffs)
    f = _fp_trim(raw)
    if not f:
        raise ValueError("zero polynomial has no well-defined root set")
    if len(f) == 1:
        return []
    f = _fp_monic(F, f)
    # squarefree part (degrees here are far below p, so f' never vanishes)
    deriv = _fp_trim([_scalar_mul(F, f[i], i) for i in range(1, len(f))])
    if not deriv:
        raise NotImplementedError("degree >= characteristic is out of scope")
    sf = _fp_divmod(F, f, _fp_gcd(F, f, deriv))[0]
    # product of linear factors
    xq = _frobenius_power_mod(F, sf, F.r)
    lin = _fp_gcd(F, _fp_sub(F, xq, [F.rzero, F.rone]), sf)
    roots_raw: list[tuple[int, ...]] = []
    _split_linears(F, lin, roots_raw, random.Random(0x5EED))
    out: list[FieldElement] = []
    for rt in sorted(roots_raw):
        root = FieldElement(F, rt)
        # multiplicity by repeated exact division of the original polynomial
        g = f
        linear = [F.raw_neg(rt), F.rone]
        while True:
            q, rem = _fp_divmod(F, g, linear)
            if rem:
                break
            out.append(root)
            g = q
            if not g:
                break
    return out


def _scalar_mul(F: ExtField, c: tuple, k: int):
    return F.raw_mul(c, ((k % F.p,) + (0,) * (F.r - 1)))


def _fp_add(F: ExtField, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.rzero
        y = b[i] if i < len(b) else F.rzero
        out.append(F.raw_add(x, y))
    return _fp_trim(out)


def _fp_sub(F: ExtField, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.rzero
        y = b[i] if i < len(b) else F.rzero
        out.append(F.raw_sub(x, y))
    return _fp_trim(out)


def _frobenius_power_mod(F: ExtField, f: list, j: int) -> list:
    """x^(p^j) mod f, by composition doubling on Frobenius powers."""
    if len(f) == 2:
        # mod a linear factor every poly is the constant f evaluates to
        c = F.raw_neg(f[0])
        return [F.raw_frobenius(c, j % F.r)] if any(c) else []
    pi = _fp_powmod(F, [F.rzero, F.rone], F.p, f)  # x^(p^1)
    # pi_k holds x^(p^k); double k via pi_{2k} = sigma^k(pi_k) composed with pi_k
    bits = bin(j)[2:]
    result = [F.rzero, F.rone]
    kres = 0
    for bit in bits:
        if kres:
            result = _fp_compose_mod(F, _fp_frob_coeffs(F, result, kres % F.r), result, f)
            kres *= 2
        if bit == "1":
            if kres:
                result = _fp_compose_mod(F, _fp_frob_coeffs(F, result, 1), pi, f)
            else:
                result = list(pi)
            kres += 1
    return result


def _split_linears(F: ExtField, g: list, out: list, rng: random.Random) -> None:
    """g is monic, a product of distinct linear factors; collect its roots."""
    g = _fp_trim(list(g))
    if len(g) <= 1:
        return
    if len(g) == 2:
        out.append(F.raw_neg(g[0]))
        return
    p, r = F.p, F.r
    pig = _fp_powmod(F, [F.rzero, F.rone], p, g)
    while True:
        a = [F.random_element(rng).coeffs, F.random_element(rng).coeffs]
        # absolute trace of a(x) down to F_p, as a polynomial mod g
        t = _fp_trim(list(a))
        term = _fp_trim(list(a))
        for _ in range(r - 1):
            term = _fp_compose_mod(F, _fp_frob_coeffs(F, term, 1), pig, g)
            t = _fp_add(F, t, term)
        if not t:
            continue
        if len(t) == 1:
            continue
        h = _fp_powmod(F, t, (p - 1) // 2, g)
        h0 = list(h) if h else [F.rzero]
        h0[0] = F.raw_sub(h0[0] if h0 else F.rzero, F.rone)
        u = _fp_gcd(F, _fp_trim(h0), g)
        if 0 < len(u) - 1 < len(g) - 1:
            _split_linears(F, u, out, rng)
            _split_linears(F, _fp_divmod(F, g, u)[0], out, rng)
            return


def minimal_polynomial(a: FieldElement) -> list[int]:
    """Minimal polynomial of a over F_p, ascending integer coefficients."""
    F = a.field
    p, r = F.p, F.r
    rows = []
    cur = F.one
    for _ in range(r + 1):
        rows.append(list(cur.coeffs))
        cur = cur * a
    # find the least d with 1, a, ..., a^d dependent, then solve
    for d in range(1, r + 1):
        m = np.array(rows[: d + 1], dtype=np.int64).T % p  # r x (d+1)
        ker = _kernel_mod_p(m, p)
        if ker:
            v = ker[0]
            inv = pow(int(v[d]), p - 2, p)
            return [int(c) * inv % p for c in v]
    raise AssertionError("unreachable: a satisfies its own char poly")


def _kernel_mod_p(mat: np.ndarray, p: int) -> list[list[int]]:
    m = mat.copy() % p
    rows, cols = m.shape
    pivots = []
    rank = 0
    for c in range(cols):
        piv = None
        for rr in range(rank, rows):
            if m[rr, c]:
                piv = rr
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        others = [rr for rr in range(rows) if rr != rank and m[rr, c]]
        if others:
            m[others] = (m[others] - np.outer(m[others, c], m[rank])) % p
        pivots.append(c)
        rank += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-int(m[i, fc])) % p
        basis.append(v)
    return basis


def embed(a: FieldElement, target: ExtField) -> FieldElement:
    """Embed GF(p^s) into GF(p^r) for s | r, deterministically.

    The source generator goes to the lexicographically smallest root of the
    source modulus in the target field.
    """
    source = a.field
    if source is target or source == target:
        return target(a.coeffs)
    if source.p != target.p:
        raise ValueError("different characteristics")
    if target.r % source.r != 0:
        raise ValueError(f"no embedding: {source.r} does not divide {target.r}")
    if source.r == 1:
        return target(a.coeffs[0])
    key = (source.p, source.r)
    cache = target._embed_cache
    if key not in cache:
        cache[key] = [_canonical_generator_image(source, target)]
    gen_image = FieldElement(target, cache[key][0])
    # Horner evaluation of a's coefficient polynomial at the generator image
    acc = target.zero
    for c in reversed(a.coeffs):
        acc = acc * gen_image + target(c)
    return acc


def _matpow_mod(M: np.ndarray, k: int, p: int) -> np.ndarray:
    out = np.eye(len(M), dtype=np.int64)
    B = M % p
    while k:
        if k & 1:
            out = (out @ B) % p
        B = (B @ B) % p
        k >>= 1
    return out


def _canonical_generator_image(source: ExtField, target: ExtField) -> tuple[int, ...]:
    """Coefficients of the image of source's generator in target.

    Among the conjugate roots of the source modulus, the lexicographically
    smallest is taken, so the embedding is deterministic.  The root is built
    through the degree-d subfield (kernel of Frobenius^d - 1) instead of
    root-finding in the big field.
    """
    p, d = source.p, source.r
    M = target.frobenius_matrix()
    sub_basis = _kernel_mod_p((_matpow_mod(M, d, p) - np.eye(target.r, dtype=np.int64)) % p, p)
    assert len(sub_basis) == d
    rng = random.Random(0xE3BED)
    while True:
        combo = [rng.randrange(p) for _ in sub_basis]
        z = target.zero
        for c, vec in zip(combo, sub_basis):
            if c:
                z = z + target([c * int(x) for x in vec])
        v = minimal_polynomial(z)
        if len(v) - 1 == d:
            break
    rho = min(roots_in_field(source, [source(c) for c in v]), key=lambda e: e.coeffs)
    # source.gen() in the power basis of rho, solved over F_p
    cols = []
    cur = source.one
    for _ in range(d):
        cols.append(list(cur.coeffs))
        cur = cur * rho
    mat = np.array(cols, dtype=np.int64).T % p
    gen_coords = _solve_mod_p(mat, [0, 1] + [0] * (d - 2) if d > 1 else [0], p)
    img = target.zero
    zp = target.one
    for c in gen_coords:
        if c:
            img = img + target(c) * zp
        zp = zp * z
    # lex-least conjugate root
    best = img.coeffs
    cur = img
    for _ in range(d - 1):
        cur = frobenius(cur)
        if cur.coeffs < best:
            best = cur.coeffs
    return best


def _solve_mod_p(A: np.ndarray, b, p: int) -> list[int]:
    rows, cols = A.shape
    aug = np.concatenate([A % p, (np.array(b, dtype=np.int64) % p).reshape(-1, 1)], axis=1)
    m, pivots = aug, []
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r, c]:
                piv = r
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        others = [r for r in range(rows) if r != rank and m[r, c]]
        if others:
            m[others] = (m[others] - np.outer(m[others, c], m[rank])) % p
        pivots.append(c)
        rank += 1
    x = [0] * cols
    for i, pc in enumerate(pivots):
        x[pc] = int(m[i, cols])
    for r in range(rank, rows):
        if m[r, cols]:
            raise AssertionError("inconsistent solve")
    return x
