"""Finite model of the tame quotient of a local field, and the tame symbol.

An element of k^x modulo principal units is a pair (v, u): valuation and
discrete log of the Teichmuller unit part.  Principal units are m-th powers
whenever the residue characteristic does not divide m, so this quotient sees
everything the m-th power tame symbol sees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from .exactalg import CycNum


def _prime_power(q: int) -> Tuple[int, int]:
    if q < 2:
        raise ValueError("q must be a prime power >= 2")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            if q != 1:
                raise ValueError("q must be a prime power")
            return p, k
    raise ValueError("q must be a prime power")


def _poly_mul_mod(a: Tuple[int, ...], b: Tuple[int, ...], f: Tuple[int, ...], p: int):
    # a, b coefficient tuples of length k; f monic of degree k given by its
    # lower coefficients (f = x^k + sum f_i x^i)
    k = len(f)
    conv = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                conv[i + j] = (conv[i + j] + x * y) % p
    for e in range(2 * k - 2, k - 1, -1):
        c = conv[e]
        if c:
            conv[e] = 0
            for i, fi in enumerate(f):
                conv[e - k + i] = (conv[e - k + i] - c * fi) % p
    return tuple(conv[:k])


def _monic_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lower coefficients of the lexicographically smallest monic irreducible
    of degree k over F_p (encoding: c_0 + c_1 p + ...)."""

    def encode(t):
        return tuple((t // p ** i) % p for i in range(k))

    def has_root(f):
        for r in range(p):
            # evaluate x^k + sum f_i x^i at r
            val = pow(r, k, p)
            for i, fi in enumerate(f):
                val = (val + fi * pow(r, i, p)) % p
            if val == 0:
                return True
        return False

    def divisible(f, g_low, d):
        # does the monic g of degree d (low coeffs g_low) divide x^k + f?
        num = list(f) + [0] * (k - len(f)) + [1]
        for e in range(k, d - 1, -1):
            c = num[e] % p
            if c:
                num[e] = 0
                for i, gi in enumerate(g_low):
                    num[e - d + i] = (num[e - d + i] - c * gi) % p
        return not any(x % p for x in num[:d])

    for t in range(p ** k):
        f = encode(t)
        if has_root(f):
            continue
        ok = True
        for d in range(2, k // 2 + 1):
            for s in range(p ** d):
                g_low = tuple((s // p ** i) % p for i in range(d))
                if divisible(f, g_low, d):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise ArithmeticError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def _field_tables(q: int):
    """(p, k, generator encoding, dlog table) for F_q with the smallest
    monic irreducible modulus and the smallest generator in integer encoding."""
    p, k = _prime_power(q)
    if k == 1:
        def mul(a, b):
            return (a * b) % p
        enc_one = 1
        candidates = range(1, q)
    else:
        f = _monic_irreducible(p, k)

        def decode(t):
            return tuple((t // p ** i) % p for i in range(k))

        def encode(c):
            return sum(ci * p ** i for i, ci in enumerate(c))

        def mul(a, b):
            return encode(_poly_mul_mod(decode(a), decode(b), f, p))

        enc_one = 1
        candidates = range(1, q)
    gen = None
    for c in candidates:
        # multiplicative order of c
        acc, order = c, 1
        while acc != enc_one:
            acc = mul(acc, c)
            order += 1
            if order > q - 1:
                raise ArithmeticError("element outside the unit group")
        if order == q - 1:
            gen = c
            break
    dlog: Dict[int, int] = {}
    acc, e = enc_one, 0
    while e < q - 1:
        dlog[acc] = e
        acc = mul(acc, gen)
        e += 1
    return p, k, gen, dlog, mul


@dataclass(frozen=True)
class TameElement:
    """Class of pi^v * g^u in k^x modulo principal units."""
    v: int
    u: int


@dataclass(frozen=True)
class MuElement:
    """Exponent e of the fixed primitive m-th root of unity."""
    e: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.m)

    def __mul__(self, other: "MuElement") -> "MuElement":
        if self.m != other.m:
            raise ValueError("mu-group order mismatch")
        return MuElement(self.e + other.e, self.m)

    def inv(self) -> "MuElement":
        return MuElement(-self.e, self.m)

    def __pow__(self, n: int) -> "MuElement":
        return MuElement(self.e * n, self.m)

    @property
    def is_one(self) -> bool:
        return self.e == 0

    def as_cyc(self, conductor: int) -> CycNum:
        if conductor % self.m:
            raise ValueError("conductor must be a multiple of the mu-group order")
        return CycNum.zeta(conductor, self.e * (conductor // self.m))

    def __str__(self):
        if self.m == 1:
            return "1"
        if self.m == 2:
            return "-1" if self.e else "1"
        return f"zeta_{self.m}^{self.e}"


@dataclass(frozen=True)
class LocalModel:
    q: int
    m: int
    p: int
    g: int          # encoding of the fixed smallest generator of F_q^x
    sigma: int      # dlog of -1 (0 when q is even)

    def element(self, v: int, u: int) -> TameElement:
        return TameElement(v, u % (self.q - 1))

    def dlog(self, value: int) -> int:
        """Discrete log (base g) of a nonzero residue given as an integer.

        Integers embed as constant polynomials, so reduction mod p is the
        right encoding for prime q and prime powers alike.
        """
        _, _, _, table, _ = _field_tables(self.q)
        enc = value % self.p
        if enc == 0:
            raise ValueError("discrete log of zero")
        return table[enc]

    def unit(self, value: int) -> TameElement:
        return TameElement(0, self.dlog(value))

    @property
    def uniformizer(self) -> TameElement:
        return TameElement(1, 0)


def make_local_model(q: int, m: int) -> LocalModel:
    """Fix F_q with its smallest generator; reject m without m-th roots.

    p | m cannot happen once m | q-1 holds, so the tame hypothesis is implied.
    """
    p, _, gen, dlog, _ = _field_tables(q)
    if m < 1 or (q - 1) % m:
        raise ValueError("no primitive m-th root of unity in residue field")
    sigma = (q - 1) // 2 if q % 2 else 0
    # -1 embeds as the constant p-1; its dlog must be (q-1)/2 for odd q
    assert q % 2 == 0 or dlog[p - 1] == sigma
    return LocalModel(q=q, m=m, p=p, g=gen, sigma=sigma)


def tame_symbol(model: LocalModel, x: TameElement, y: TameElement) -> MuElement:
    """m-th power tame symbol of the classes x, y.

    Value is the class of ((-1)^{v(x)v(y)} x^{v(y)} y^{-v(x)} mod p)^{(q-1)/m}
    written as a power of zeta_m = g^{(q-1)/m}; in (v, u) coordinates the
    exponent is sigma*v_x*v_y + u_x*v_y - u_y*v_x mod m.
    """
    e = model.sigma * x.v * y.v + x.u * y.v - y.u * x.v
    return MuElement(e % model.m, model.m)
