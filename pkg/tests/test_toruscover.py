"""Tests for finite torus models, centers, isotropic subgroups, tameness.

Two independent routes guard the enumeration: maximal isotropics found by the
span-growing search are compared against closures of small generator subsets
(an oracle that never recurses), and each reported subgroup must equal its own
perp under a direct pairing scan.
"""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.localfield import LocalModel, make_local_model
from artifact.toruscover import (
    SubgroupDesc,
    TorusSpec,
    build_finite_model,
    canonical_tame_subgroup,
    check_symplectic,
    commutator_pairing,
    compute_center,
    enumerate_maximal_isotropics,
    is_tame,
    is_torsion_class,
    subgroup_elements,
    subgroup_from_generators,
)


def _m2():
    return build_finite_model(TorusSpec.local(make_local_model(5, 2), [[1]]))


def _m4(q=5):
    return build_finite_model(TorusSpec.local(make_local_model(q, 4), [[2]]))


def _n2_mod2():
    return build_finite_model(TorusSpec.local(make_local_model(5, 2), [[0, 1], [1, 0]]))


def _n2_mod4():
    return build_finite_model(TorusSpec.local(make_local_model(5, 4), [[2, 1], [1, 2]]))


def _lattice():
    return build_finite_model(TorusSpec.lattice(2, 2, [[0, 1], [-1, 0]]))


def _zero_matrix():
    return build_finite_model(TorusSpec.local(make_local_model(5, 2), [[0]]))


def _local_corpus():
    return [_m2(), _m4(), _m4(13), _n2_mod2(), _n2_mod4(), _zero_matrix()]


def test_build_orders():
    assert _m2().order == 4
    assert _m4().order == 16
    assert _lattice().order == 4
    assert _n2_mod2().order == 16
    assert _n2_mod4().order == 256


def test_non_alternating_rejected_with_witness():
    with pytest.raises(ValueError) as exc:
        build_finite_model(TorusSpec.local(make_local_model(5, 4), [[1]]))
    assert "not alternating" in str(exc.value)
    assert "t = (1, 0)" in str(exc.value)

    # asymmetric mod 4 -> rejected with a mixed valuation/unit witness ...
    with pytest.raises(ValueError) as exc:
        build_finite_model(TorusSpec.local(make_local_model(5, 4), [[0, 1], [3, 0]]))
    assert "t = (1, 0, 0, 1)" in str(exc.value)
    # ... but the same matrix is symmetric mod 2, so it builds there
    assert build_finite_model(
        TorusSpec.local(make_local_model(5, 2), [[0, 1], [3, 0]])).order == 16


def test_non_alternating_lattice_rejections():
    with pytest.raises(ValueError, match=r"J = -J\^T"):
        build_finite_model(TorusSpec.lattice(2, 4, [[0, 1], [1, 0]]))
    with pytest.raises(ValueError) as exc:
        build_finite_model(TorusSpec.lattice(2, 4, [[2, 1], [-1, 2]]))
    assert "t = (1, 0)" in str(exc.value)
    # mod 2 the standard form is its own negative transpose
    assert build_finite_model(TorusSpec.lattice(2, 2, [[0, 1], [1, 0]])).order == 4


def test_doubled_sign_condition_on_inconsistent_model():
    # A hand-built model with m not dividing q-1 evades make_local_model's
    # checks; the alternating test must still catch 2*sigma*M(i,j) != 0.
    fake = LocalModel(q=5, m=3, p=5, g=2, sigma=1)
    with pytest.raises(ValueError) as exc:
        build_finite_model(TorusSpec.local(fake, [[0, 1], [1, 0]]))
    assert "t = (1, 1, 0, 0)" in str(exc.value)


def test_spec_shape_validation():
    with pytest.raises(ValueError, match="square integer matrix"):
        TorusSpec.local(make_local_model(5, 2), [[1, 0]])
    with pytest.raises(ValueError, match="rank x rank"):
        TorusSpec.lattice(3, 2, [[0, 1], [-1, 0]])
    with pytest.raises(ValueError, match="positive integer"):
        TorusSpec.lattice(2, 0, [[0, 1], [-1, 0]])
    model = _m2()
    with pytest.raises(ValueError, match="2 coordinates"):
        model.element((1, 2, 3))
    assert model.element((3, -1)) == (1, 1)


def test_rank_one_mod2_pairing_table():
    # (a, b) is the class of pi^a u^b; the pairing must be (-1)^(ad+bc)
    model = _m2()
    for a, b, c, d in itertools.product(range(2), repeat=4):
        assert model.pairing_exponent((a, b), (c, d)) == (a * d + b * c) % 2


def test_commutator_equals_symbol_product():
    for model in (_m2(), _m4(), _m4(13), _n2_mod2()):
        for t in model.elements():
            for u in model.elements():
                assert commutator_pairing(model, t, u) == model.pairing(t, u)
    big = _n2_mod4()
    rng = random.Random(11)
    elems = list(big.elements())
    for _ in range(1500):
        t, u = rng.choice(elems), rng.choice(elems)
        assert commutator_pairing(big, t, u) == big.pairing(t, u)
    latt = _lattice()
    for t in latt.elements():
        for u in latt.elements():
            assert commutator_pairing(latt, t, u) == latt.pairing(t, u)


def test_pairing_is_alternating_and_bimultiplicative():
    for model in _local_corpus() + [_lattice()]:
        elems = list(model.elements())
        for t in elems:
            assert model.pairing_exponent(t, t) == 0
        rng = random.Random(5)
        for _ in range(400):
            t, u, w = (rng.choice(elems) for _ in range(3))
            left = model.pairing_exponent(model.add(t, u), w)
            split = model.pairing_exponent(t, w) + model.pairing_exponent(u, w)
            assert left == split % model.modulus
            anti = model.pairing_exponent(w, t) + model.pairing_exponent(t, w)
            assert anti % model.modulus == 0


def test_zero_matrix_is_totally_degenerate():
    model = _zero_matrix()
    for t in model.elements():
        for u in model.elements():
            assert model.pairing(t, u).is_one
    center = compute_center(model)
    assert center.order == model.order
    report = check_symplectic(model)
    assert report == {"alternating": True, "nondegenerate_on_quotient": True,
                      "index": 1, "index_is_square": True}
    subs = enumerate_maximal_isotropics(model)
    assert len(subs) == 1 and subs[0].order == model.order


def test_center_examples():
    m4 = _m4()
    z = compute_center(m4)
    assert z.order == 4 and m4.order // z.order == 4
    assert subgroup_elements(m4, z) == {(0, 0), (0, 2), (2, 0), (2, 2)}
    assert z.generators == ((0, 2), (2, 0))
    m2 = _m2()
    z2 = compute_center(m2)
    assert z2.order == 1 and z2.generators == ()
    assert m2.order // z2.order == 4


def test_symplectic_reports():
    expected = {"alternating": True, "nondegenerate_on_quotient": True,
                "index": 4, "index_is_square": True}
    assert check_symplectic(_m2()) == expected
    assert check_symplectic(_lattice()) == expected
    assert check_symplectic(_n2_mod4())["index"] == 256


def test_isotropic_counts():
    assert len(enumerate_maximal_isotropics(_m2())) == 3
    assert len(enumerate_maximal_isotropics(_m4())) == 3
    assert len(enumerate_maximal_isotropics(_lattice())) == 3
    assert len(enumerate_maximal_isotropics(_n2_mod2())) == 15
    assert len(enumerate_maximal_isotropics(_n2_mod4())) == 151


def test_isotropic_enumeration_is_deterministic():
    model = _n2_mod2()
    first = enumerate_maximal_isotropics(model)
    second = enumerate_maximal_isotropics(model)
    assert first == second
    assert first == sorted(first, key=lambda d: d.generators)


def _subset_closure_isotropics(model):
    """Oracle: every subgroup is the closure of at most four elements here,
    so closures of small subsets find all maximal isotropics."""
    elems = list(model.elements())
    central = subgroup_elements(model, compute_center(model))
    index = model.order // len(central)
    seen = set()
    for k in range(0, 5):
        for gens in itertools.combinations(elems, k):
            span = {model.zero()}
            for g in gens:
                multiples, cur = [], model.zero()
                while True:
                    multiples.append(cur)
                    cur = model.add(cur, g)
                    if cur == model.zero():
                        break
                span = {model.add(s, p) for s in span for p in multiples}
            seen.add(frozenset(span))
    return {
        s for s in seen
        if central <= s and (len(s) // len(central)) ** 2 == index
        and all(model.pairing_exponent(t, u) == 0 for t in s for u in s)
    }


def test_enumeration_matches_subset_closure_oracle():
    for model in (_m2(), _m4(), _lattice(), _zero_matrix(), _n2_mod2()):
        expected = _subset_closure_isotropics(model)
        found = {subgroup_elements(model, d) for d in enumerate_maximal_isotropics(model)}
        assert found == expected


def test_enumerated_subgroups_are_self_perp():
    for model in (_m4(), _n2_mod2(), _n2_mod4()):
        elems = list(model.elements())
        for desc in enumerate_maximal_isotropics(model):
            members = subgroup_elements(model, desc)
            perp = {t for t in elems
                    if all(model.pairing_exponent(t, u) == 0 for u in members)}
            assert perp == members


def test_randomized_growth_finds_only_enumerated_subgroups():
    model = _n2_mod4()
    target = {subgroup_elements(model, d) for d in enumerate_maximal_isotropics(model)}
    elems = list(model.elements())
    rng = random.Random(7)
    for _ in range(200):
        order = elems[:]
        rng.shuffle(order)
        span = frozenset({model.zero()})
        for x in order:
            if x in span or any(model.pairing_exponent(x, u) for u in span):
                continue
            multiples, cur = [], model.zero()
            while True:
                multiples.append(cur)
                cur = model.add(cur, x)
                if cur == model.zero():
                    break
            span = frozenset(model.add(s, p) for s in span for p in multiples)
            if len(span) ** 2 == model.order:
                break
        assert span in target


def test_tame_flags_rank_one():
    m2 = _m2()
    flags = {d.generators: is_tame(m2, d) for d in enumerate_maximal_isotropics(m2)}
    assert flags == {((0, 1),): True, ((1, 0),): False, ((1, 1),): False}

    m4 = _m4()
    subs = enumerate_maximal_isotropics(m4)
    assert [is_tame(m4, d) for d in subs] == [True, False, False]
    # the unramified-twist subgroup {(a, 2b)}: maximal isotropic but not tame
    skew = subgroup_from_generators(m4, [(1, 0), (0, 2)])
    assert skew.order == 8 and skew.contains_center
    assert not is_tame(m4, skew)


def test_lattice_has_no_tame_subgroup():
    latt = _lattice()
    subs = enumerate_maximal_isotropics(latt)
    assert len(subs) == 3
    assert not any(is_tame(latt, d) for d in subs)
    with pytest.raises(ValueError, match="no canonical tame subgroup in lattice mode"):
        canonical_tame_subgroup(latt)


def test_is_tame_rejects_bad_subgroups():
    m2 = _m2()
    with pytest.raises(ValueError, match="not isotropic"):
        is_tame(m2, subgroup_from_generators(m2, [(1, 1), (1, 0)]))
    with pytest.raises(ValueError, match="not maximal isotropic"):
        is_tame(m2, subgroup_from_generators(m2, []))
    m4 = _m4()
    with pytest.raises(ValueError, match="does not contain the center"):
        is_tame(m4, subgroup_from_generators(m4, [(1, 0)]))


def test_canonical_tame_subgroup_examples():
    m2 = _m2()
    a2 = canonical_tame_subgroup(m2)
    assert subgroup_elements(m2, a2) == {(0, 0), (0, 1)}
    assert m2.order // a2.order == 2

    m4 = _m4()
    a4 = canonical_tame_subgroup(m4)
    assert a4.order == 8 and m4.order // a4.order == 2
    assert subgroup_elements(m4, a4) == {(a, b) for a in (0, 2) for b in range(4)}

    assert _n2_mod2().order // canonical_tame_subgroup(_n2_mod2()).order == 4
    assert _n2_mod4().order // canonical_tame_subgroup(_n2_mod4()).order == 16


def test_canonical_subgroup_is_enumerated_and_tame():
    for model in _local_corpus():
        canonical = canonical_tame_subgroup(model)
        members = subgroup_elements(model, canonical)
        assert is_tame(model, canonical)
        listed = {subgroup_elements(model, d) for d in enumerate_maximal_isotropics(model)}
        assert members in listed


def test_square_index_and_lagrange_properties():
    for model in _local_corpus() + [_lattice()]:
        center = compute_center(model)
        central = subgroup_elements(model, center)
        index = model.order // center.order
        assert int(index ** 0.5) ** 2 == index
        for desc in enumerate_maximal_isotropics(model):
            members = subgroup_elements(model, desc)
            assert len(members) // len(central) == model.order // len(members)
        for t in model.elements():
            assert model.scale(model.modulus, t) in central


def test_torsion_class_predicate():
    m4 = _m4()
    assert is_torsion_class(m4, (0, 3))
    assert not is_torsion_class(m4, (2, 0))
    latt = _lattice()
    assert is_torsion_class(latt, (0, 0))
    assert not is_torsion_class(latt, (0, 1))


def test_descriptor_validation():
    m2 = _m2()
    with pytest.raises(ValueError, match="span 2 elements"):
        subgroup_elements(m2, SubgroupDesc(generators=((0, 1),), contains_center=False, order=3))
    desc = subgroup_from_generators(m2, [(0, 1)])
    assert desc.order == 2 and desc.contains_center  # the center is trivial here


def test_enumeration_bound():
    big = build_finite_model(TorusSpec.lattice(2, 128, [[0, 1], [-1, 0]]))
    with pytest.raises(ValueError, match="enumeration bound exceeded"):
        enumerate_maximal_isotropics(big)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.sampled_from([2, 3, 4, 6]), st.data())
def test_lattice_commutator_forms_build_and_alternate(n, m, data):
    upper = [[data.draw(st.integers(-5, 5)) for _ in range(n)] for _ in range(n)]
    form = [[upper[i][j] - upper[j][i] for j in range(n)] for i in range(n)]
    model = build_finite_model(TorusSpec.lattice(n, m, form))
    elems = list(model.elements())
    for t in elems:
        assert model.pairing(t, t).is_one
    rng = random.Random(m * 100 + n)
    for _ in range(100):
        t, u = rng.choice(elems), rng.choice(elems)
        assert commutator_pairing(model, t, u) == model.pairing(t, u)
        total = model.pairing_exponent(t, u) + model.pairing_exponent(u, t)
        assert total % m == 0
