"""Tests for the tame-quotient model and the tame symbol.

The oracle here recomputes every symbol by honest residue-field arithmetic
(multiply out the Teichmuller units, raise to (q-1)/m) and compares with the
closed-form exponent used by the package.
"""

from __future__ import annotations

import itertools
import random

import pytest

from artifact.localfield import (
    LocalModel,
    MuElement,
    TameElement,
    _field_tables,
    _monic_irreducible,
    make_local_model,
    tame_symbol,
)

ALL_Q = (5, 7, 9, 11, 13, 25, 49)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _field_pow(mul, base, e, one=1):
    out = one
    while e:
        if e & 1:
            out = mul(out, base)
        base = mul(base, base)
        e >>= 1
    return out


def _symbol_by_residue_arithmetic(q, m, x: TameElement, y: TameElement) -> int:
    """Independent oracle: evaluate ((-1)^(vx vy) x^vy y^-vx)^((q-1)/m) inside
    F_q by table multiplication and read the exponent of zeta_m = g^((q-1)/m)."""
    p, _, g, dlog, mul = _field_tables(q)
    ux = _field_pow(mul, g, x.u % (q - 1))
    uy = _field_pow(mul, g, y.u % (q - 1))
    sign = _field_pow(mul, p - 1, (x.v * y.v) % 2)  # -1 is the constant p-1
    val = mul(sign, _field_pow(mul, ux, y.v % (q - 1)))
    val = mul(val, _field_pow(mul, _field_pow(mul, uy, q - 2), x.v % (q - 1)))
    root = _field_pow(mul, val, (q - 1) // m)
    e = dlog[root]
    assert e % ((q - 1) // m) == 0
    return (e // ((q - 1) // m)) % m


def test_model_construction_examples():
    assert isinstance(make_local_model(5, 2), LocalModel)
    assert isinstance(make_local_model(5, 4), LocalModel)
    with pytest.raises(ValueError, match="no primitive m-th root of unity in residue field"):
        make_local_model(7, 4)


def test_smallest_primitive_roots_and_sigma():
    assert make_local_model(5, 2).g == 2
    assert make_local_model(7, 2).g == 3
    assert make_local_model(11, 2).g == 2
    assert make_local_model(13, 4).g == 2
    for q, sigma in ((5, 2), (9, 4), (13, 6), (25, 12), (49, 24)):
        assert make_local_model(q, 2).sigma == sigma


def test_smallest_irreducible_moduli():
    # lexicographic minimum in the (c0, c1) encoding
    assert _monic_irreducible(3, 2) == (1, 0)   # x^2 + 1
    assert _monic_irreducible(5, 2) == (2, 0)   # x^2 + 2
    assert _monic_irreducible(7, 2) == (1, 0)   # x^2 + 1


def test_pinned_symbol_pi_against_2():
    mod = make_local_model(5, 2)
    s = tame_symbol(mod, mod.uniformizer, mod.unit(2))
    assert s == MuElement(1, 2)
    assert str(s) == "-1"
    # 2 is a quadratic nonresidue mod 5, so this is forced


def test_unit_unit_triviality_exhaustive():
    for q in ALL_Q:
        for m in _divisors(q - 1):
            mod = make_local_model(q, m)
            for ux, uy in itertools.product(range(m), repeat=2):
                s = tame_symbol(mod, TameElement(0, ux), TameElement(0, uy))
                assert s.is_one


def test_antisymmetry_small_exhaustive():
    for q in (5, 9, 13):
        for m in _divisors(q - 1):
            mod = make_local_model(q, m)
            for vx, ux, vy, uy in itertools.product(range(m), repeat=4):
                x, y = TameElement(vx, ux), TameElement(vy, uy)
                assert (tame_symbol(mod, x, y) * tame_symbol(mod, y, x)).is_one


def test_bimultiplicativity_small_exhaustive():
    for q, m in ((5, 2), (5, 4), (9, 2), (13, 2), (13, 4)):
        mod = make_local_model(q, m)
        cls = list(itertools.product(range(m), repeat=2))
        for (v1, u1), (v2, u2), (v3, u3) in itertools.product(cls, repeat=3):
            x, xp, y = TameElement(v1, u1), TameElement(v2, u2), TameElement(v3, u3)
            prod = TameElement(v1 + v2, u1 + u2)
            assert tame_symbol(mod, prod, y) == tame_symbol(mod, x, y) * tame_symbol(mod, xp, y)


def test_mth_powers_pair_trivially():
    for q in (5, 13, 25):
        for m in _divisors(q - 1):
            mod = make_local_model(q, m)
            rng = random.Random(q * 100 + m)
            for _ in range(25):
                x = TameElement(rng.randrange(-6, 7), rng.randrange(q - 1))
                y = TameElement(rng.randrange(-6, 7), rng.randrange(q - 1))
                xm = TameElement(m * x.v, m * x.u)
                assert tame_symbol(mod, xm, y).is_one


def test_x_against_minus_x_is_one():
    for q in (5, 11, 49):
        for m in _divisors(q - 1):
            mod = make_local_model(q, m)
            rng = random.Random(q + m)
            for _ in range(20):
                x = TameElement(rng.randrange(-5, 6), rng.randrange(q - 1))
                minus_x = TameElement(x.v, x.u + mod.sigma)
                assert tame_symbol(mod, x, minus_x).is_one


def test_closed_form_matches_residue_arithmetic_oracle():
    for q in ALL_Q:
        for m in _divisors(q - 1):
            mod = make_local_model(q, m)
            rng = random.Random(1009 * q + m)
            pairs = [((rng.randrange(-2 * m, 2 * m + 1), rng.randrange(q - 1)),
                      (rng.randrange(-2 * m, 2 * m + 1), rng.randrange(q - 1)))
                     for _ in range(12)]
            # negative valuations enter through the descent to classes mod m
            for (vx, ux), (vy, uy) in pairs:
                x, y = TameElement(vx % m if m else 0, ux), TameElement(vy % m, uy)
                got = tame_symbol(mod, x, y)
                want = _symbol_by_residue_arithmetic(q, m, x, y)
                assert got == MuElement(want, m), (q, m, x, y)


def test_symbol_descends_to_classes_mod_m():
    # adding m to a valuation or q-1 to a dlog does not change the symbol
    for q, m in ((5, 4), (13, 4), (25, 8)):
        mod = make_local_model(q, m)
        rng = random.Random(31 * q + m)
        for _ in range(30):
            x = TameElement(rng.randrange(8), rng.randrange(q - 1))
            y = TameElement(rng.randrange(8), rng.randrange(q - 1))
            xs = TameElement(x.v + m, x.u + (q - 1))
            assert tame_symbol(mod, x, y) == tame_symbol(mod, xs, y)
            ys = TameElement(y.v - m, y.u)
            assert tame_symbol(mod, x, y) == tame_symbol(mod, x, ys)


def test_mu_element_behavior():
    a = MuElement(3, 4)
    assert a * a.inv() == MuElement(0, 4)
    assert (a ** 2) == MuElement(2, 4)
    assert str(MuElement(1, 4)) == "zeta_4^1"
    assert a.as_cyc(8) == a.as_cyc(4).embed(8)
    with pytest.raises(ValueError):
        a * MuElement(1, 2)
    with pytest.raises(ValueError):
        a.as_cyc(6)


def test_dlog_of_zero_rejected():
    mod = make_local_model(5, 2)
    with pytest.raises(ValueError):
        mod.dlog(5)
