"""GF(2^e) arithmetic and GF(2) polynomial machinery.

Binary polynomials are plain Python ints (bit i = coefficient of x^i), so
the zero polynomial is 0 and every nonzero polynomial is implicitly monic
in its leading bit.  Extension fields use log/antilog tables generated
from a fixed table of primitive polynomials.
"""

from __future__ import annotations

import numpy as np

# Primitive polynomial bitmasks for GF(2^e), e = 1..13, from the standard
# published tables (lowest-weight primitive polynomial per degree).
PRIMITIVE_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int):
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    db = poly_degree(b)
    while poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_lcm(ps) -> int:
    out = 1
    for p in ps:
        if p == 0:
            return 0
        g = poly_gcd(out, p)
        out = poly_mul(poly_divmod(out, g)[0], p)
    return out


def poly_invmod(a: int, mod: int) -> int:
    """Inverse of a modulo mod in GF(2)[x] (requires gcd(a, mod) = 1)."""
    r0, r1 = mod, poly_mod(a, mod)
    t0, t1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 ^ poly_mul(q, t1)
    if r0 != 1:
        raise ValueError("polynomial is not invertible modulo the given modulus")
    return t0


class Field:
    """GF(2^e) with log/antilog tables over the 2^e - 1 nonzero elements.

    ``exp[i]`` is alpha^i for i in [0, 2^e - 2]; ``log[exp[i]] = i`` and
    ``log[0] = -1``.  Elements are ints in [0, 2^e).
    """

    def __init__(self, e: int):
        if e not in PRIMITIVE_POLYS:
            raise ValueError(f"no primitive polynomial on file for GF(2^{e})")
        self.e = e
        self.poly = PRIMITIVE_POLYS[e]
        self.order = (1 << e) - 1
        exp = np.zeros(self.order, dtype=np.int64)
        log = np.full(1 << e, -1, dtype=np.int64)
        x = 1
        for i in range(self.order):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x >> e:
                x ^= self.poly
        self.exp = exp
        self.log = log
        self.self_test()

    def self_test(self) -> None:
        """Check the generator really has order 2^e - 1 and tables invert."""
        if len(set(self.exp.tolist())) != self.order or self.exp[0] != 1:
            raise ValueError(f"GF(2^{self.e}) table generator has short order")
        for i in {0, min(1, self.order - 1), self.order - 1}:
            if self.log[self.exp[i]] != i:
                raise ValueError(f"GF(2^{self.e}) log/antilog tables disagree at {i}")

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.order])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[a]) % self.order])

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k <= 0:
                raise ZeroDivisionError("0 to a non-positive power")
            return 0
        return int(self.exp[(int(self.log[a]) * k) % self.order])

    def eval_poly2(self, p: int, elt: int) -> int:
        """Evaluate a GF(2) polynomial at a field element."""
        acc = 0
        power = 1
        while p:
            if p & 1:
                acc ^= power
            power = self.mul(power, elt)
            p >>= 1
        return acc

    def __repr__(self):
        return f"Field(GF(2^{self.e}))"


def cyclotomic_cosets(n: int, q: int):
    """Partition {0..n-1} into q-cyclotomic cosets mod n (gcd(n, q) = 1)."""
    import math

    if math.gcd(n, q) != 1:
        raise ValueError(f"gcd({n}, {q}) != 1")
    seen = [False] * n
    cosets = []
    for a in range(n):
        if seen[a]:
            continue
        coset = []
        x = a
        while not seen[x]:
            seen[x] = True
            coset.append(x)
            x = (x * q) % n
        cosets.append(sorted(coset))
    return cosets


def minimal_polynomial(f: Field, elt: int) -> int:
    """Minimal polynomial over GF(2) of a nonzero field element.

    Built as the product of (x + c) over the conjugacy class of ``elt``;
    the result always collapses to 0/1 coefficients.
    """
    if elt == 0:
        raise ValueError("zero has no minimal polynomial here")
    conjugates = []
    c = elt
    while c not in conjugates:
        conjugates.append(c)
        c = f.mul(c, c)
    coeffs = [1]  # coefficient list, index = degree
    for r in conjugates:
        nxt = [0] * (len(coeffs) + 1)
        for d, a in enumerate(coeffs):
            nxt[d + 1] ^= a
            nxt[d] ^= f.mul(r, a)
        coeffs = nxt
    p = 0
    for d, a in enumerate(coeffs):
        if a not in (0, 1):
            raise AssertionError("minimal polynomial has non-binary coefficient")
        p |= a << d
    return p
