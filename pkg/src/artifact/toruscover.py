"""Finite quotient models of torus covers and their commutator pairings.

A cover of a split torus by roots of unity is controlled by a bilinear
commutator pairing.  Everything the pairing sees survives in a finite
quotient: in local mode T/T^m with coordinates (valuation class, unit class)
per rank, in lattice mode (Z/m)^n with an explicit integer form.  This module
computes the pairing, its radical (the center), the induced symplectic form,
the maximal isotropic subgroups, and the tame ones among them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import isqrt
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from .localfield import LocalModel, MuElement, TameElement, tame_symbol

Element = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

# Largest center index [T:Z] accepted by the isotropic-subgroup enumeration.
ENUMERATION_BOUND = 4096


def _as_matrix(rows: Sequence[Sequence[int]], what: str) -> Matrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(out)
    if n == 0 or any(len(row) != n for row in out):
        raise ValueError(f"{what} must be a nonempty square integer matrix")
    return out


@dataclass(frozen=True)
class TorusSpec:
    """Input data for a finite torus model.

    Local mode pairs a residue-field model with a matrix of commutator
    exponents; lattice mode gives the pairing form directly.  The matrix is
    taken as-is -- whether the induced pairing is alternating is checked at
    build time, not assumed.
    """

    mode: str
    rank: int
    modulus: int
    local_model: Optional[LocalModel] = None
    exponents: Optional[Matrix] = None
    form: Optional[Matrix] = None

    @classmethod
    def local(cls, model: LocalModel, exponents: Sequence[Sequence[int]]) -> "TorusSpec":
        mat = _as_matrix(exponents, "commutator exponent matrix")
        return cls(mode="local", rank=len(mat), modulus=model.m,
                   local_model=model, exponents=mat)

    @classmethod
    def lattice(cls, rank: int, modulus: int, form: Sequence[Sequence[int]]) -> "TorusSpec":
        mat = _as_matrix(form, "lattice pairing form")
        if len(mat) != rank:
            raise ValueError("lattice pairing form must be rank x rank")
        if modulus < 1:
            raise ValueError("modulus must be a positive integer")
        return cls(mode="lattice", rank=rank, modulus=modulus, form=mat)


@dataclass(frozen=True)
class SubgroupDesc:
    """A subgroup given by generators, with its order precomputed."""

    generators: Tuple[Element, ...]
    contains_center: bool
    order: int


def _pairing_exponent(spec: TorusSpec, t: Element, u: Element) -> int:
    """Exponent of zeta_m in the pairing of t and u (closed formula).

    Local mode expands the tame symbols: each (t_i, u_j) contributes
    M(i,j) * (sigma*a_i*c_j + b_i*c_j - a_i*d_j) with (a, b) the valuation and
    unit coordinates.  Lattice mode is t^T J u.
    """
    m = spec.modulus
    n = spec.rank
    if spec.mode == "lattice":
        assert spec.form is not None
        total = 0
        for i in range(n):
            if t[i]:
                row = spec.form[i]
                total += t[i] * sum(row[j] * u[j] for j in range(n))
        return total % m
    assert spec.exponents is not None and spec.local_model is not None
    sigma = spec.local_model.sigma
    total = 0
    for i in range(n):
        a, b = t[i], t[n + i]
        for j in range(n):
            c, d = u[j], u[n + j]
            coeff = spec.exponents[i][j]
            if coeff:
                total += coeff * (sigma * a * c + b * c - a * d)
    return total % m


def _alternating_witness(spec: TorusSpec) -> Optional[Element]:
    """An element t with [t, t] != 1, or None when the pairing is alternating.

    In local mode [t, t] vanishes identically iff M is symmetric mod m with
    sigma*M(i,i) = 0 and 2*sigma*M(i,j) = 0 mod m; each failure yields an
    explicit witness.  In lattice mode (J antisymmetric mod m) the diagonal
    must vanish mod m.
    """
    m = spec.modulus
    n = spec.rank
    dim = 2 * n if spec.mode == "local" else n
    witness: Optional[List[int]] = None
    if spec.mode == "lattice":
        assert spec.form is not None
        for i in range(n):
            if spec.form[i][i] % m:
                witness = [0] * dim
                witness[i] = 1
                break
    else:
        assert spec.exponents is not None and spec.local_model is not None
        mat = spec.exponents
        sigma = spec.local_model.sigma
        for i in range(n):
            if sigma * mat[i][i] % m:
                witness = [0] * dim
                witness[i] = 1
                break
        if witness is None:
            for i in range(n):
                for j in range(n):
                    if i != j and (mat[i][j] - mat[j][i]) % m:
                        witness = [0] * dim
                        witness[i] = 1
                        witness[n + j] = 1
                        break
                if witness is not None:
                    break
        if witness is None:
            for i in range(n):
                for j in range(i + 1, n):
                    if 2 * sigma * mat[i][j] % m:
                        witness = [0] * dim
                        witness[i] = 1
                        witness[j] = 1
                        break
                if witness is not None:
                    break
    if witness is None:
        return None
    t = tuple(witness)
    assert _pairing_exponent(spec, t, t) != 0
    return t


class FiniteTorus:
    """T/T^m (local) or (Z/m)^n (lattice) with the descended pairing.

    Elements are coordinate tuples mod m: local mode uses length 2n in the
    order (a_1..a_n, b_1..b_n) = (valuation classes, unit classes); lattice
    mode uses length n.  The group law is componentwise addition.  Instances
    are immutable after build; the pairing cache only memoizes pure values.
    """

    def __init__(self, spec: TorusSpec):
        self.spec = spec
        self.mode = spec.mode
        self.rank = spec.rank
        self.modulus = spec.modulus
        self.dim = 2 * spec.rank if spec.mode == "local" else spec.rank
        self.order = spec.modulus ** self.dim
        self._pair_cache: Dict[Tuple[Element, Element], int] = {}

    def __repr__(self) -> str:
        return f"FiniteTorus(mode={self.mode!r}, rank={self.rank}, m={self.modulus}, order={self.order})"

    def zero(self) -> Element:
        return (0,) * self.dim

    def element(self, coords: Sequence[int]) -> Element:
        if len(coords) != self.dim:
            raise ValueError(f"element must have {self.dim} coordinates")
        return tuple(int(c) % self.modulus for c in coords)

    def add(self, t: Element, u: Element) -> Element:
        m = self.modulus
        return tuple((a + b) % m for a, b in zip(t, u))

    def neg(self, t: Element) -> Element:
        m = self.modulus
        return tuple(-a % m for a in t)

    def scale(self, k: int, t: Element) -> Element:
        m = self.modulus
        return tuple(k * a % m for a in t)

    def basis(self) -> Tuple[Element, ...]:
        out = []
        for i in range(self.dim):
            v = [0] * self.dim
            v[i] = 1
            out.append(tuple(v))
        return tuple(out)

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order."""
        return itertools.product(range(self.modulus), repeat=self.dim)

    def pairing_exponent(self, t: Element, u: Element) -> int:
        key = (t, u)
        cached = self._pair_cache.get(key)
        if cached is None:
            cached = _pairing_exponent(self.spec, t, u)
            self._pair_cache[key] = cached
        return cached

    def pairing(self, t: Element, u: Element) -> MuElement:
        return MuElement(self.pairing_exponent(t, u), self.modulus)


def _local_representatives(model: FiniteTorus, t: Element,
                           shift_v: int, shift_u: int) -> List[TameElement]:
    n = model.rank
    return [TameElement(t[i] + shift_v, t[n + i] + shift_u) for i in range(n)]


def _symbol_product(model: FiniteTorus, xs: List[TameElement], ys: List[TameElement]) -> MuElement:
    spec = model.spec
    assert spec.exponents is not None and spec.local_model is not None
    out = MuElement(0, model.modulus)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            coeff = spec.exponents[i][j]
            if coeff:
                out = out * tame_symbol(spec.local_model, x, y) ** coeff
    return out


def _verify_pairing_descends(model: FiniteTorus) -> None:
    """Check on all generator pairs that the pairing ignores the choice of
    representative (shifting valuations or unit logs by m, i.e. multiplying
    by m-th powers)."""
    m = model.modulus
    shifts = ((0, 0), (m, 0), (0, m), (m, m))
    if model.mode == "local":
        for g in model.basis():
            for h in model.basis():
                base = model.pairing(g, h)
                for sv, su in shifts:
                    xs = _local_representatives(model, g, sv, su)
                    ys = _local_representatives(model, h, sv, su)
                    value = _symbol_product(model, xs, ys)
                    if value != base:
                        raise RuntimeError(
                            f"pairing failed to descend: generators {g}, {h}, shift {(sv, su)}")
    else:
        assert model.spec.form is not None
        form = model.spec.form
        n = model.rank
        for g in model.basis():
            for h in model.basis():
                base = model.pairing_exponent(g, h)
                for sv, _ in shifts:
                    gg = [g[i] + sv for i in range(n)]
                    hh = [h[i] + sv for i in range(n)]
                    value = sum(gg[i] * form[i][j] * hh[j] for i in range(n) for j in range(n))
                    if value % m != base:
                        raise RuntimeError(
                            f"pairing failed to descend: generators {g}, {h}, shift {sv}")


def build_finite_model(spec: TorusSpec) -> FiniteTorus:
    """Build the finite quotient model, rejecting non-alternating pairings.

    The offending element is named exactly when [t, t] != 1 for some t; in
    lattice mode the antisymmetry of the form mod m is a precondition of its
    own and is reported separately.
    """
    if spec.mode not in ("local", "lattice"):
        raise ValueError(f"unknown torus mode {spec.mode!r}")
    if spec.mode == "lattice":
        assert spec.form is not None
        m = spec.modulus
        for i in range(spec.rank):
            for j in range(spec.rank):
                if (spec.form[i][j] + spec.form[j][i]) % m:
                    raise ValueError("lattice pairing form must satisfy J = -J^T (mod m)")
    witness = _alternating_witness(spec)
    if witness is not None:
        raise ValueError(
            f"induced pairing is not alternating: [t, t] != 1 for t = {witness}")
    model = FiniteTorus(spec)
    _verify_pairing_descends(model)
    return model


def commutator_pairing(model: FiniteTorus, t: Element, u: Element) -> MuElement:
    """Commutator of lifts of t and u, as a root of unity.

    Local mode multiplies out the tame symbols (t_i, u_j) with the exponent
    matrix entry M(i,j) on each; lattice mode returns zeta^(t^T J u).  The
    closed formula used by FiniteTorus.pairing must agree; the symbol route
    here is kept separate so the two can be compared.
    """
    t = model.element(t)
    u = model.element(u)
    if model.mode == "lattice":
        return model.pairing(t, u)
    xs = _local_representatives(model, t, 0, 0)
    ys = _local_representatives(model, u, 0, 0)
    return _symbol_product(model, xs, ys)


def _closure(model: FiniteTorus, generators: Sequence[Element]) -> FrozenSet[Element]:
    span: Set[Element] = {model.zero()}
    for g in generators:
        multiples = []
        cur = model.zero()
        while True:
            multiples.append(cur)
            cur = model.add(cur, g)
            if cur == model.zero():
                break
        span = {model.add(s, p) for s in span for p in multiples}
    return frozenset(span)


def _greedy_generators(model: FiniteTorus, members: FrozenSet[Element]) -> Tuple[Element, ...]:
    """Deterministic generating set: sweep members in lex order, keeping each
    element not already spanned."""
    gens: List[Element] = []
    span: FrozenSet[Element] = frozenset({model.zero()})
    for t in sorted(members):
        if t not in span:
            gens.append(t)
            span = _closure(model, gens)
            if len(span) == len(members):
                break
    return tuple(gens)


def subgroup_elements(model: FiniteTorus, desc: SubgroupDesc) -> FrozenSet[Element]:
    """All elements spanned by the descriptor's generators."""
    members = _closure(model, [model.element(g) for g in desc.generators])
    if desc.order != len(members):
        raise ValueError(
            f"subgroup descriptor reports order {desc.order} but generators span {len(members)} elements")
    return members


def subgroup_from_generators(model: FiniteTorus, generators: Sequence[Sequence[int]]) -> SubgroupDesc:
    """Descriptor with honestly computed order and center-containment flag."""
    gens = tuple(model.element(g) for g in generators)
    members = _closure(model, gens)
    central = _center_elements(model)
    return SubgroupDesc(generators=gens, contains_center=central <= members,
                        order=len(members))


def _center_elements(model: FiniteTorus) -> FrozenSet[Element]:
    # Pairing against the standard generators suffices: the pairing is
    # bimultiplicative, so vanishing on a generating set is vanishing on all.
    basis = model.basis()
    return frozenset(t for t in model.elements()
                     if all(model.pairing_exponent(t, g) == 0 for g in basis))


def compute_center(model: FiniteTorus) -> SubgroupDesc:
    """Radical of the pairing, i.e. the image of the center of the cover.

    The index [T:Z] is a perfect square for every alternating pairing; that
    invariant is asserted here on every call.
    """
    members = _center_elements(model)
    order = len(members)
    index = model.order // order
    assert isqrt(index) ** 2 == index, "center index must be a perfect square"
    return SubgroupDesc(generators=_greedy_generators(model, members),
                        contains_center=True, order=order)


def check_symplectic(model: FiniteTorus) -> Dict[str, object]:
    """Report on the form induced on T/Z: alternating, nondegenerate,
    square index."""
    center = compute_center(model)
    central = subgroup_elements(model, center)
    index = model.order // center.order
    basis = model.basis()
    nondegenerate = all(
        any(model.pairing_exponent(t, g) for g in basis)
        for t in model.elements() if t not in central)
    return {
        "alternating": _alternating_witness(model.spec) is None,
        "nondegenerate_on_quotient": nondegenerate,
        "index": index,
        "index_is_square": isqrt(index) ** 2 == index,
    }


def _quotient_tables(model: FiniteTorus, central: FrozenSet[Element]):
    """Lex-least coset representatives for T/Z, with addition and pairing
    tables on representative indices."""
    rep_index: Dict[Element, int] = {}
    reps: List[Element] = []
    coset_of: List[List[Element]] = []
    assigned: Dict[Element, int] = {}
    for t in model.elements():
        if t in assigned:
            continue
        idx = len(reps)
        coset = [model.add(t, z) for z in central]
        for x in coset:
            assigned[x] = idx
        reps.append(t)
        rep_index[t] = idx
        coset_of.append(coset)
    count = len(reps)
    add = [[assigned[model.add(reps[i], reps[j])] for j in range(count)]
           for i in range(count)]
    pair = [[model.pairing_exponent(reps[i], reps[j]) for j in range(count)]
            for i in range(count)]
    return reps, coset_of, add, pair


def enumerate_maximal_isotropics(model: FiniteTorus) -> List[SubgroupDesc]:
    """All subgroups A with Z <= A, pairing trivial on A, and |A/Z|^2 = [T:Z].

    Works in the quotient T/Z by growing isotropic spans one representative
    at a time, memoizing each span so every subgroup is expanded once.  The
    result is sorted lexicographically on generator encodings.
    """
    center = compute_center(model)
    central = subgroup_elements(model, center)
    index = model.order // center.order
    if index > ENUMERATION_BOUND:
        raise ValueError(
            f"enumeration bound exceeded: [T:Z] = {index} > {ENUMERATION_BOUND}")
    target = isqrt(index)
    reps, coset_of, add, pair = _quotient_tables(model, central)
    count = len(reps)

    def span_with(span: FrozenSet[int], x: int) -> FrozenSet[int]:
        multiples = [0]
        cur = x
        while cur != 0:
            multiples.append(cur)
            cur = add[cur][x]
        return frozenset(add[s][p] for s in span for p in multiples)

    found: List[FrozenSet[int]] = []
    seen: Set[FrozenSet[int]] = set()

    def extend(span: FrozenSet[int], perp: Tuple[int, ...]) -> None:
        if len(span) == target:
            found.append(span)
            return
        for x in perp:
            if x in span:
                continue
            grown = span_with(span, x)
            if len(grown) > target or grown in seen:
                continue
            seen.add(grown)
            extend(grown, tuple(y for y in perp if pair[x][y] == 0))

    base = frozenset({0})
    seen.add(base)
    extend(base, tuple(range(count)))

    out: List[SubgroupDesc] = []
    for span in found:
        members = frozenset(x for i in span for x in coset_of[i])
        out.append(SubgroupDesc(generators=_greedy_generators(model, members),
                                contains_center=True, order=len(members)))
    out.sort(key=lambda d: d.generators)
    return out


def is_torsion_class(model: FiniteTorus, t: Element) -> bool:
    """Whether t is the class of a torsion element of the underlying torus.

    Local mode: torsion units are the Teichmuller roots of unity, so torsion
    classes are those with every valuation coordinate zero.  Lattice mode:
    the lattice is torsion-free, so only the zero class qualifies.
    """
    if model.mode == "lattice":
        return all(c == 0 for c in t)
    return all(c == 0 for c in t[: model.rank])


def is_tame(model: FiniteTorus, desc: SubgroupDesc) -> bool:
    """Whether Z * A_tors = A for the maximal isotropic subgroup A.

    Raises if A is not isotropic, does not contain the center, or is not
    maximal among isotropic subgroups (|A/Z|^2 = [T:Z] fails).
    """
    members = subgroup_elements(model, desc)
    for t in sorted(members):
        for u in sorted(members):
            if model.pairing_exponent(t, u):
                raise ValueError(
                    f"subgroup is not isotropic: [t, u] != 1 for t = {t}, u = {u}")
    center = compute_center(model)
    central = subgroup_elements(model, center)
    if not central <= members:
        raise ValueError("subgroup is not maximal isotropic: it does not contain the center")
    index = model.order // center.order
    if (len(members) // len(central)) ** 2 != index:
        raise ValueError(
            f"subgroup is not maximal isotropic: |A/Z|^2 = {(len(members) // len(central)) ** 2} != [T:Z] = {index}")
    torsion = [t for t in members if is_torsion_class(model, t)]
    generated = frozenset(model.add(z, t) for z in central for t in torsion)
    return generated == members


def canonical_tame_subgroup(model: FiniteTorus) -> SubgroupDesc:
    """Z times the valuation-zero classes; the distinguished tame subgroup.

    Verified isotropic, maximal, and tame before returning.  Only local
    models have one: lattice tori have no torsion to supply it.
    """
    if model.mode != "local":
        raise ValueError("no canonical tame subgroup in lattice mode")
    central = _center_elements(model)
    n = model.rank
    torsion = [t for t in model.elements() if all(t[i] == 0 for i in range(n))]
    members = frozenset(model.add(z, t) for z in central for t in torsion)
    desc = SubgroupDesc(generators=_greedy_generators(model, members),
                        contains_center=True, order=len(members))
    if not is_tame(model, desc):
        raise RuntimeError("canonical subgroup failed its tameness verification")
    return desc
