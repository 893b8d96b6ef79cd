"""The unit-group generator convention of the fixture schema.

Fixture records carry nebentype values on a fixed generator basis of
(Z/N)^x: the 2-part generators first (-1 and 5 for 2^a with a >= 3, just 3
for modulus 4), then the smallest primitive root for each odd prime power,
primes ascending, each generator lifted by CRT to be 1 modulo the
complementary factor.  This mirrors the convention documented by the
consuming fixture loader; records emitted here must list values in exactly
this order.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd


def euler_phi(n: int) -> int:
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
    k, x = 1, a % n
    while x != 1 % n:
        x = x * a % n
        k += 1
    return k


def _smallest_primitive_root(q: int) -> int:
    target = euler_phi(q)
    for g in range(2, q):
        if gcd(g, q) == 1 and _mult_order(g, q) == target:
            return g
    raise ValueError(f"no primitive root mod {q}")


def _crt_lift(a: int, q: int, n: int) -> int:
    """The residue mod n that is a mod q and 1 mod n/q."""
    m = n // q
    if m == 1:
        return a % n
    inv = pow(m, -1, q)
    return (1 + m * ((a - 1) * inv % q)) % n


@lru_cache(maxsize=None)
def unit_generators(N: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(generators, orders) of (Z/N)^x in the fixture convention."""
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
            orders.append(euler_phi(qe))
        q += 2
    return tuple(gens), tuple(orders)
