"""Central extensions of finite torus models and their representations.

A cover is an extension of a finite torus model T by the cyclic group mu_m,
described by an explicit bilinear 2-cocycle beta: elements are pairs
(t, zeta) with the multiplication (t, z)(u, w) = (t + u, z + w + beta(t, u)).
The commutator [ (t,0), (u,0) ] then lands in mu_m with exponent
beta(t, u) - beta(u, t), and build_cover checks exhaustively that this agrees
with the model's commutator pairing.

On top of the group arithmetic the module provides: characters of the center
and their extensions to maximal isotropic subgroups (exact values as rational
exponents, i.e. chi(g) = e^(2*pi*i*r) is stored as the fraction r), induced
representations as generalized permutation matrices over cyclotomic fields,
a Stone-von-Neumann uniqueness check with an independent twisted group
algebra oracle, structure reports for that algebra, a descent equivalence for
tame isotropic subgroups, and central character supports of representations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt, lcm
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exactalg import CycMatrix, CycNum, algebra_radical, intertwiner_space
from .toruscover import (
    Element,
    FiniteTorus,
    Matrix,
    SubgroupDesc,
    canonical_tame_subgroup,
    compute_center,
    enumerate_maximal_isotropics,
    is_tame,
    is_torsion_class,
    subgroup_elements,
)

CoverElement = Tuple[Element, int]

_ZERO = Fraction(0)

# Above this dimension the twisted-algebra radical is computed by the
# structural trace-form argument instead of a dense Gram elimination.
_DENSE_RADICAL_BOUND = 64

# Dimension up to which isomorphism of inductions is certified through the
# full intertwiner-space solver; larger inductions use the averaged
# intertwiner, which is built in closed form and then verified.
_SOLVER_DIM_BOUND = 8


# ---------------------------------------------------------------------------
# roots of unity as exact exponents
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def root_of_unity(conductor: int, exponent: Fraction) -> CycNum:
    """The cyclotomic number e^(2*pi*i*exponent) at the given conductor.

    Works whenever the value lies in the field: the exponent denominator d
    must divide the conductor, except that for odd conductors N a factor 2 is
    also allowed because -zeta_N generates the 2N-th roots of unity.
    """
    f = Fraction(exponent) % 1
    d = f.denominator
    if conductor % d == 0:
        return CycNum.zeta(conductor, f.numerator * (conductor // d))
    if conductor % 2 == 1 and d % 2 == 0 and conductor % (d // 2) == 0:
        half = d // 2
        shift = (f.numerator - half) // 2  # exact: numerator and d/2 are odd
        return -CycNum.zeta(conductor, shift * (conductor // half))
    raise ValueError(
        f"e^(2*pi*i*{f}) does not lie in the cyclotomic field of conductor {conductor}")


def minimal_conductor(exponents) -> int:
    """Smallest conductor whose cyclotomic field contains all the values.

    The naive choice is the lcm N0 of the denominators; when N0 == 2 mod 4
    the odd half N0/2 already works (its field contains -1 and all the other
    required roots), and that is what gets returned.  In particular a set of
    values in {1, -1} yields conductor 1, i.e. plain rationals.
    """
    n0 = 1
    for f in exponents:
        n0 = lcm(n0, (Fraction(f) % 1).denominator)
    if n0 % 4 == 2:
        return n0 // 2
    return n0


# ---------------------------------------------------------------------------
# cocycles and covers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CocycleSpec:
    """A bilinear 2-cocycle on a finite torus model.

    convention:
      * "unit_val"  (local mode)  beta(t, u) = sum_ij C(i,j) b_i(t) c_j(u)
        plus the correction sum_{i<j} sigma*M(i,j) a_i(t) a_j(u), where
        (a, b) are the valuation/unit coordinates and M is the model's
        commutator exponent matrix.  The default takes C = M.
      * "symbol"    (local mode)  beta(t, u) = sum_ij C(i,j) e(t_i, u_j)
        with e the symbol exponent sigma*a*c + b*c - a*d; compatible exactly
        when C + C^T = M mod m.
      * "lattice"   beta(t, u) = t^T U u.
    """

    convention: str
    matrix: Matrix


def _as_int_matrix(rows: Sequence[Sequence[int]], size: int, what: str) -> Matrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if len(mat) != size or any(len(row) != size for row in mat):
        raise ValueError(f"{what} must be {size} x {size}")
    return mat


def default_cocycle(model: FiniteTorus) -> CocycleSpec:
    """The standard cocycle for a model: C = M locally, U = upper part of J."""
    if model.mode == "local":
        return CocycleSpec("unit_val", model.spec.exponents)
    form = model.spec.form
    n = model.rank
    upper = tuple(tuple(form[i][j] if i < j else 0 for j in range(n)) for i in range(n))
    return CocycleSpec("lattice", upper)


def _cocycle_form(model: FiniteTorus, cocycle: CocycleSpec) -> Matrix:
    """Assemble beta as a single dim x dim bilinear form P, beta = t^T P u."""
    m = model.modulus
    n = model.rank
    conv = cocycle.convention
    if conv == "lattice":
        if model.mode != "lattice":
            raise ValueError("cocycle convention 'lattice' requires a lattice-mode model")
        u = _as_int_matrix(cocycle.matrix, n, "cocycle matrix")
        return tuple(tuple(x % m for x in row) for row in u)
    if conv not in ("unit_val", "symbol"):
        raise ValueError(f"unknown cocycle convention: {conv!r}")
    if model.mode != "local":
        raise ValueError(f"cocycle convention {conv!r} requires a local-mode model")
    c = _as_int_matrix(cocycle.matrix, n, "cocycle matrix")
    sigma = model.spec.local_model.sigma
    exps = model.spec.exponents
    p = [[0] * model.dim for _ in range(model.dim)]
    if conv == "unit_val":
        for i in range(n):
            for j in range(n):
                p[n + i][j] = c[i][j] % m
                if i < j:
                    p[i][j] = (sigma * exps[i][j]) % m
    else:  # symbol
        for i in range(n):
            for j in range(n):
                p[i][j] = (sigma * c[i][j]) % m
                p[n + i][j] = c[i][j] % m
                p[i][n + j] = (p[i][n + j] - c[i][j]) % m
    return tuple(tuple(row) for row in p)


class Cover:
    """The central extension of a finite torus model determined by a cocycle.

    Elements are pairs (t, zeta) with t a model element and zeta an integer
    mod m; mu_m sits inside as the pairs (0, zeta) and is central because
    beta ignores the zeta components.  Use build_cover to construct one with
    the compatibility checks run.
    """

    def __init__(self, base: FiniteTorus, cocycle: CocycleSpec):
        self.base = base
        self.cocycle = cocycle
        self.m = base.modulus
        self.order = self.m * base.order
        self._form = _cocycle_form(base, cocycle)
        self._center: Optional[Tuple[CoverElement, ...]] = None

    def __repr__(self) -> str:
        return (f"Cover(order={self.order}, base={self.base!r}, "
                f"convention={self.cocycle.convention!r})")

    def beta(self, t: Element, u: Element) -> int:
        total = 0
        form = self._form
        for i, ti in enumerate(t):
            if ti:
                row = form[i]
                total += ti * sum(row[j] * uj for j, uj in enumerate(u) if uj)
        return total % self.m

    def identity(self) -> CoverElement:
        return (self.base.zero(), 0)

    def mu(self, power: int = 1) -> CoverElement:
        return (self.base.zero(), power % self.m)

    def lift(self, t: Element) -> CoverElement:
        return (t, 0)

    def mul(self, x: CoverElement, y: CoverElement) -> CoverElement:
        t, z = x
        u, w = y
        return (self.base.add(t, u), (z + w + self.beta(t, u)) % self.m)

    def inv(self, x: CoverElement) -> CoverElement:
        t, z = x
        nt = self.base.neg(t)
        return (nt, (-z - self.beta(t, nt)) % self.m)

    def power(self, x: CoverElement, k: int) -> CoverElement:
        if k < 0:
            return self.power(self.inv(x), -k)
        t, z = x
        # beta is bilinear, so (t, z)^k = (k t, k z + C(k,2) beta(t, t)).
        return (self.base.scale(k, t),
                (k * z + (k * (k - 1) // 2) * self.beta(t, t)) % self.m)

    def commutator_exponent(self, t: Element, u: Element) -> int:
        return (self.beta(t, u) - self.beta(u, t)) % self.m

    def elements(self) -> Iterator[CoverElement]:
        return ((t, z) for t in self.base.elements() for z in range(self.m))

    def generators(self) -> Tuple[CoverElement, ...]:
        """mu generator first, then the lifts of the standard basis."""
        return (self.mu(1),) + tuple(self.lift(e) for e in self.base.basis())

    def center_elements(self) -> Tuple[CoverElement, ...]:
        """The full preimage of the model's center, sorted."""
        if self._center is None:
            zmem = subgroup_elements(self.base, compute_center(self.base))
            self._center = tuple(sorted((z, j) for z in zmem for j in range(self.m)))
        return self._center


def build_cover(model: FiniteTorus, cocycle: Optional[CocycleSpec] = None) -> Cover:
    """Construct the cover and check the cocycle against the pairing.

    The check is exhaustive: for every pair (t, u) of model elements the
    commutator exponent beta(t,u) - beta(u,t) must equal the pairing
    exponent.  Since beta is bilinear by construction it automatically
    satisfies the 2-cocycle identity; an explicit associativity check runs on
    all triples for small models and on seeded samples otherwise.
    """
    if cocycle is None:
        cocycle = default_cocycle(model)
    cover = Cover(model, cocycle)
    elems = list(model.elements())
    for t in elems:
        for u in elems:
            if cover.commutator_exponent(t, u) != model.pairing_exponent(t, u):
                raise ValueError(
                    "cocycle is incompatible with the commutator pairing "
                    f"at (t, u) = ({t}, {u})")
    if model.order <= 64:
        triples = itertools.product(elems, repeat=3)
    else:
        rng = random.Random(20412)
        triples = (tuple(rng.choice(elems) for _ in range(3)) for _ in range(500))
    for t, u, w in triples:
        lhs = (cover.beta(u, w) + cover.beta(t, model.add(u, w))) % cover.m
        rhs = (cover.beta(t, u) + cover.beta(model.add(t, u), w)) % cover.m
        if lhs != rhs:  # unreachable for a bilinear form; kept as a guard
            raise ValueError(f"cocycle identity fails at ({t}, {u}, {w})")
    return cover


# ---------------------------------------------------------------------------
# characters of abelian subgroups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralChar:
    """A character of the center of a cover, as a full table of exponents.

    domain is the sorted tuple of cover elements; exponents[i] is the
    fraction r with value e^(2*pi*i*r) at domain[i].
    """

    domain: Tuple[CoverElement, ...]
    exponents: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.exponents):
            raise ValueError("domain and exponents must have equal length")
        normalized = tuple(Fraction(f) % 1 for f in self.exponents)
        object.__setattr__(self, "exponents", normalized)
        object.__setattr__(self, "_table", dict(zip(self.domain, normalized)))

    def value_exponent(self, g: CoverElement) -> Fraction:
        try:
            return self._table[g]
        except KeyError:
            raise ValueError(f"element {g} is not in the character's domain") from None

    def value(self, g: CoverElement, conductor: int) -> CycNum:
        return root_of_unity(conductor, self.value_exponent(g))

    def mu_modulus(self) -> int:
        zero = self.domain[0][0]
        return sum(1 for g in self.domain if g[0] == zero)

    def mu_exponent(self) -> Fraction:
        """Exponent of the value on the distinguished mu generator (0, 1)."""
        zero = self.domain[0][0]
        return self.value_exponent((zero, 1))

    def is_injective(self) -> bool:
        return self.mu_exponent().denominator == self.mu_modulus()

    def minimal_conductor(self) -> int:
        return minimal_conductor(self.exponents)


@dataclass(frozen=True)
class CharExtension(CentralChar):
    """A character of a lifted maximal isotropic subgroup extending a CentralChar."""

    base: CentralChar


def _char_tables(cover: Cover,
                 members: Sequence[CoverElement],
                 seed: Mapping[CoverElement, Fraction]) -> List[Dict[CoverElement, Fraction]]:
    """All characters of the abelian subgroup `members` extending `seed`.

    Chain construction: walking the members in sorted order, each element g
    not yet in the domain has a relative order r (least r with g^r inside),
    contributing r branches (v(g^r) + s) / r; the domain then grows by the
    translates h g^k.  Tables come back sorted by their value tuples.
    """
    tables: List[Dict[CoverElement, Fraction]] = [dict(seed)]
    tables[0].setdefault(cover.identity(), _ZERO)
    for g in members:
        if g in tables[0]:
            continue
        powers = [cover.identity(), g]
        while powers[-1] not in tables[0]:
            powers.append(cover.mul(powers[-1], g))
        r = len(powers) - 1
        grown: List[Dict[CoverElement, Fraction]] = []
        for tab in tables:
            anchor = tab[powers[-1]]
            items = list(tab.items())
            for s in range(r):
                val = ((anchor + s) / r) % 1
                ext = dict(tab)
                for k in range(1, r):
                    gk = powers[k]
                    shift = (k * val) % 1
                    for h, vh in items:
                        ext[cover.mul(h, gk)] = (vh + shift) % 1
                grown.append(ext)
        tables = grown
    order = sorted(tables[0])
    tables.sort(key=lambda tab: tuple(tab[g] for g in order))
    return tables


def central_characters(cover: Cover,
                       mu_exponent: Optional[int] = None,
                       injective_only: bool = False) -> Tuple[CentralChar, ...]:
    """Characters of the center of the cover, optionally filtered.

    mu_exponent fixes the value on (0, 1) to be zeta_m^mu_exponent;
    injective_only keeps the characters that are faithful on mu_m.
    """
    members = cover.center_elements()
    tables = _char_tables(cover, members, {cover.identity(): _ZERO})
    assert len(tables) == len(members), "character count must equal the group order"
    chars = [CentralChar(members, tuple(tab[g] for g in members)) for tab in tables]
    if mu_exponent is not None:
        want = Fraction(mu_exponent, cover.m) % 1
        chars = [c for c in chars if c.mu_exponent() == want]
    if injective_only:
        chars = [c for c in chars if c.is_injective()]
    return tuple(chars)


def _require_maximal_isotropic(model: FiniteTorus,
                               desc: SubgroupDesc) -> Tuple[FrozenSet[Element], FrozenSet[Element]]:
    members = subgroup_elements(model, desc)
    for t in members:
        for u in members:
            if model.pairing_exponent(t, u):
                raise ValueError(
                    f"subgroup is not isotropic: [t, u] != 1 for t = {t}, u = {u}")
    center = subgroup_elements(model, compute_center(model))
    if not center <= members:
        raise ValueError(
            "subgroup is not maximal isotropic: it does not contain the center")
    ratio = (len(members) // len(center)) ** 2
    quot = model.order // len(center)
    if ratio != quot:
        raise ValueError(
            f"subgroup is not maximal isotropic: |A/Z|^2 = {ratio} != [T:Z] = {quot}")
    return members, center


def _coset_reps(model: FiniteTorus,
                members: FrozenSet[Element]) -> Tuple[List[Element], Dict[Element, Tuple[int, Element]]]:
    """Lex-least coset representatives of T/members and the decomposition map.

    memo[t] = (j, a) with t = reps[j] + a and a in the subgroup.
    """
    memo: Dict[Element, Tuple[int, Element]] = {}
    reps: List[Element] = []
    for t in model.elements():
        if t in memo:
            continue
        j = len(reps)
        reps.append(t)
        for a in members:
            memo[model.add(t, a)] = (j, a)
    return reps, memo


def _validate_central_char(cover: Cover, chi: CentralChar) -> None:
    if chi.domain != cover.center_elements():
        raise ValueError("chi is not defined on the center of this cover")
    for g in chi.domain:
        for h in chi.domain:
            expect = (chi.value_exponent(g) + chi.value_exponent(h)) % 1
            if chi.value_exponent(cover.mul(g, h)) != expect:
                raise ValueError("chi is not a character of the center")


def extensions_of_central_char(cover: Cover,
                               desc: SubgroupDesc,
                               chi: CentralChar) -> Tuple[CharExtension, ...]:
    """All characters of the lifted subgroup A~ that restrict to chi.

    A must be maximal isotropic, so that A~ is abelian.  The count always
    equals [T:A], and the conjugation action of T/A on the result is checked
    to be free and transitive before returning.
    """
    model = cover.base
    _validate_central_char(cover, chi)
    members, _center = _require_maximal_isotropic(model, desc)
    m = cover.m
    lifted = tuple(sorted((a, j) for a in members for j in range(m)))
    seed = {g: chi.value_exponent(g) for g in chi.domain}
    tables = _char_tables(cover, lifted, seed)
    exts = tuple(CharExtension(lifted, tuple(tab[g] for g in lifted), chi)
                 for tab in tables)
    index = model.order // len(members)
    if len(exts) != index:
        raise RuntimeError(
            f"expected {index} extensions of chi to the subgroup, found {len(exts)}")

    # torsor check: conjugating by a coset representative t shifts each value
    # by the commutator character a -> zeta^B(a, t), computed in the cover.
    reps, _memo = _coset_reps(model, members)
    eps = chi.mu_exponent()
    lookup = {ext.exponents: k for k, ext in enumerate(exts)}
    sorted_a = [g[0] for g in lifted]
    orbit = {0}
    for t in reps[1:]:
        tl = cover.lift(t)
        tinv = cover.inv(tl)
        shifts = {}
        for a in members:
            conj = cover.mul(cover.mul(tinv, (a, 0)), tl)
            assert conj[0] == a
            shifts[a] = (eps * conj[1]) % 1
        perm = []
        for ext in exts:
            conj_vals = tuple((ext.exponents[i] + shifts[sorted_a[i]]) % 1
                              for i in range(len(lifted)))
            k = lookup.get(conj_vals)
            if k is None:
                raise RuntimeError("conjugation left the set of extensions")
            perm.append(k)
        if any(perm[i] == i for i in range(len(exts))):
            raise RuntimeError("conjugation action on extensions is not free")
        orbit.add(perm[0])
    if orbit != set(range(len(exts))):
        raise RuntimeError("conjugation action on extensions is not transitive")
    return exts


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rep:
    """A representation of a cover by matrices over a cyclotomic field.

    generators follows the Cover.generators() order: the mu generator first,
    then the lifts of the standard basis of the base model.  Arbitrary
    elements are evaluated by rep_evaluate.
    """

    generators: Tuple[CoverElement, ...]
    matrices: Tuple[CycMatrix, ...]
    dimension: int
    conductor: int

    def __post_init__(self):
        if len(self.generators) != len(self.matrices):
            raise ValueError("need one matrix per generator")
        for mat in self.matrices:
            if mat.nrows != self.dimension or mat.ncols != self.dimension:
                raise ValueError("representation matrices must be square of the stated dimension")


def _mat_pow(mat: CycMatrix, k: int, conductor: int) -> CycMatrix:
    out = CycMatrix.identity(conductor, mat.nrows)
    for _ in range(k):
        out = out * mat
    return out


def rep_evaluate(cover: Cover, rep: Rep, g: CoverElement) -> CycMatrix:
    """Value of the representation at an arbitrary cover element.

    g is decomposed as a word in the fixed generators: the product of basis
    lifts with g's base exponents, times the mu power making the zeta
    component match.
    """
    t, z = g
    word = cover.identity()
    mat = CycMatrix.identity(rep.conductor, rep.dimension)
    for k, gen in enumerate(rep.generators[1:]):
        e = t[k] % cover.m
        if e:
            word = cover.mul(word, cover.power(gen, e))
            mat = mat * _mat_pow(rep.matrices[k + 1], e, rep.conductor)
    assert word[0] == t
    shift = (z - word[1]) % cover.m
    if shift:
        mat = mat * _mat_pow(rep.matrices[0], shift, rep.conductor)
    return mat


def rep_direct_sum(*reps: Rep) -> Rep:
    if not reps:
        raise ValueError("need at least one summand")
    gens = reps[0].generators
    if any(r.generators != gens for r in reps):
        raise ValueError("summands must share their generator list")
    conductor = 1
    for r in reps:
        conductor = lcm(conductor, r.conductor)
    dim = sum(r.dimension for r in reps)
    zero = CycNum.from_rational(0, conductor)
    mats = []
    for k in range(len(gens)):
        rows = [[zero] * dim for _ in range(dim)]
        offset = 0
        for r in reps:
            block = r.matrices[k].embed(conductor)
            for i in range(r.dimension):
                for j in range(r.dimension):
                    rows[offset + i][offset + j] = block.at(i, j)
            offset += r.dimension
        mats.append(CycMatrix(conductor, rows))
    return Rep(gens, tuple(mats), dim, conductor)


def rep_mu_exponent(cover: Cover, rep: Rep) -> Fraction:
    """Read off the exponent by which mu acts (the matrix must be scalar)."""
    mu_mat = rep.matrices[0]
    for j in range(cover.m):
        val = root_of_unity(rep.conductor, Fraction(j, cover.m))
        scalar = val * CycMatrix.identity(rep.conductor, rep.dimension)
        if mu_mat == scalar:
            return Fraction(j, cover.m) % 1
    raise ValueError("mu does not act by an m-th root of unity times the identity")


def verify_rep(cover: Cover, rep: Rep, samples: int = 25) -> None:
    """Check the defining relations of the cover on the matrices.

    Relations checked: mu acts by a scalar root of unity; generator
    commutators match the cocycle's commutator exponents; m-th powers of the
    generators match their cover values; and seeded random products
    multiply correctly.  Raises ValueError naming the first failure.
    """
    n = rep.conductor
    eps = rep_mu_exponent(cover, rep)
    gens = rep.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = cover.mul(cover.mul(gens[i], gens[j]),
                          cover.inv(cover.mul(gens[j], gens[i])))
            assert c[0] == cover.base.zero()
            lhs = rep.matrices[i] * rep.matrices[j]
            rhs = root_of_unity(n, (eps * c[1]) % 1) * (rep.matrices[j] * rep.matrices[i])
            if lhs != rhs:
                raise ValueError(f"commutator relation fails for generators {i} and {j}")
    for i, g in enumerate(gens):
        p = cover.power(g, cover.m)
        assert p[0] == cover.base.zero()
        lhs = _mat_pow(rep.matrices[i], cover.m, n)
        rhs = root_of_unity(n, (eps * p[1]) % 1) * CycMatrix.identity(n, rep.dimension)
        if lhs != rhs:
            raise ValueError(f"order relation fails for generator {i}")
    rng = random.Random(11213)
    elems = [(t, z) for t in cover.base.elements() for z in range(cover.m)]
    for _ in range(samples):
        g = rng.choice(elems)
        h = rng.choice(elems)
        lhs = rep_evaluate(cover, rep, g) * rep_evaluate(cover, rep, h)
        rhs = rep_evaluate(cover, rep, cover.mul(g, h))
        if lhs != rhs:
            raise ValueError(f"multiplicativity fails at ({g}, {h})")


def induce_vchi(cover: Cover,
                desc: SubgroupDesc,
                psi: CharExtension,
                conductor: Optional[int] = None) -> Rep:
    """Induce the character psi of A~ up to the cover.

    The basis is indexed by the lex-least coset representatives t_i of T/A,
    lifted with zeta = 0; each generator acts as a generalized permutation
    matrix with entries psi(t_j~^-1 g t_i~).  The dimension is [T:A].
    """
    model = cover.base
    members = subgroup_elements(model, desc)
    if {g[0] for g in psi.domain} != members:
        raise ValueError("psi is not defined on the lift of the given subgroup")
    n = conductor if conductor is not None else minimal_conductor(psi.exponents)
    reps, memo = _coset_reps(model, members)
    d = len(reps)
    lifts = [cover.lift(t) for t in reps]
    inv_lifts = [cover.inv(tl) for tl in lifts]
    zero = CycNum.from_rational(0, n)
    mats = []
    for g in cover.generators():
        rows = [[zero] * d for _ in range(d)]
        for i in range(d):
            x = cover.mul(g, lifts[i])
            j, _a = memo[x[0]]
            h = cover.mul(inv_lifts[j], x)
            rows[j][i] = root_of_unity(n, psi.value_exponent(h))
        mats.append(CycMatrix(n, rows))
    return Rep(cover.generators(), tuple(mats), d, n)


def regular_epsilon_rep(cover: Cover,
                        mu_exponent: int,
                        conductor: Optional[int] = None) -> Rep:
    """The component of the left regular representation where mu acts by
    zeta_m^mu_exponent.  Basis vectors are indexed by base elements."""
    eps = Fraction(mu_exponent, cover.m) % 1
    n = conductor if conductor is not None else minimal_conductor([eps])
    elems = list(cover.base.elements())
    index = {t: k for k, t in enumerate(elems)}
    dim = len(elems)
    zero = CycNum.from_rational(0, n)
    mats = []
    for g in cover.generators():
        rows = [[zero] * dim for _ in range(dim)]
        for col, t in enumerate(elems):
            x = cover.mul(g, (t, 0))
            rows[index[x[0]]][col] = root_of_unity(n, (eps * x[1]) % 1)
        mats.append(CycMatrix(n, rows))
    return Rep(cover.generators(), tuple(mats), dim, n)


# ---------------------------------------------------------------------------
# the twisted group algebra of a central character
# ---------------------------------------------------------------------------

class _TwistedAlgebra:
    """The chi-component of the cover's group algebra, basis a_t for t in T/Z.

    Products are a_t a_u = (phase) a_v with v the representative of t + u;
    the phase collects the cocycle value and chi on the central part split
    off during reduction.  Vectors are sparse dicts index -> CycNum.
    """

    def __init__(self, cover: Cover, chi: CentralChar, conductor: int):
        self.cover = cover
        self.chi = chi
        self.n = conductor
        model = cover.base
        self.model = model
        zmem = subgroup_elements(model, compute_center(model))
        self.reps, self.memo = _coset_reps(model, zmem)
        self.dim = len(self.reps)
        self.eps = chi.mu_exponent()
        assert self.reps[0] == model.zero()
        self._pair: Dict[Tuple[int, int], Tuple[int, Fraction]] = {}

    def reduce(self, g: CoverElement) -> Tuple[int, Fraction]:
        """Write a_g = e^(2*pi*i*f) a_reps[k] and return (k, f)."""
        t, z = g
        k, a = self.memo[t]
        shift = z - self.cover.beta(a, self.reps[k])
        f = (self.chi.value_exponent((a, 0)) + self.eps * shift) % 1
        return k, f

    def pair(self, i: int, j: int) -> Tuple[int, Fraction]:
        key = (i, j)
        got = self._pair.get(key)
        if got is None:
            got = self.reduce(self.cover.mul((self.reps[i], 0), (self.reps[j], 0)))
            self._pair[key] = got
        return got

    def coset_index(self, t: Element) -> int:
        return self.memo[t][0]

    def unit(self) -> Dict[int, CycNum]:
        return {0: CycNum.from_rational(1, self.n)}

    def basis_vec(self, i: int) -> Dict[int, CycNum]:
        return {i: CycNum.from_rational(1, self.n)}

    def product(self, x: Dict[int, CycNum], y: Dict[int, CycNum]) -> Dict[int, CycNum]:
        out: Dict[int, CycNum] = {}
        for i, ci in x.items():
            for j, cj in y.items():
                k, f = self.pair(i, j)
                term = ci * cj * root_of_unity(self.n, f)
                cur = out.get(k)
                out[k] = term if cur is None else cur + term
        return {k: v for k, v in out.items() if not v.is_zero}

    def scale(self, c: CycNum, x: Dict[int, CycNum]) -> Dict[int, CycNum]:
        return {k: c * v for k, v in x.items() if not (c * v).is_zero}

    def add(self, x: Dict[int, CycNum], y: Dict[int, CycNum]) -> Dict[int, CycNum]:
        out = dict(x)
        for k, v in y.items():
            cur = out.get(k)
            s = v if cur is None else cur + v
            if s.is_zero:
                out.pop(k, None)
            else:
                out[k] = s
        return out

    def sub(self, x: Dict[int, CycNum], y: Dict[int, CycNum]) -> Dict[int, CycNum]:
        return self.add(x, {k: -v for k, v in y.items()})

    def is_idempotent(self, e: Dict[int, CycNum]) -> bool:
        return self.product(e, e) == e

    def module_rank(self, e: Dict[int, CycNum]) -> int:
        """dim of the left module A e, as the trace of right multiplication.

        Right multiplication by an idempotent is a projection onto A e, and
        its trace picks out dim times the coefficient of the unit.
        """
        c = e.get(0)
        if c is None:
            return 0
        if not c.is_rational:
            raise RuntimeError("projection trace is not rational")
        val = c.rational_value() * self.dim
        if val.denominator != 1:
            raise RuntimeError("projection trace is not an integer")
        return int(val)

    def module_trace(self, e: Dict[int, CycNum], i: int) -> CycNum:
        """Trace of left multiplication by a_{reps[i]} on the module A e."""
        total = CycNum.from_rational(0, self.n)
        w0 = self.coset_index(self.model.neg(self.reps[i]))
        c = e.get(w0)
        if c is None:
            return total
        for u in range(self.dim):
            k1, f1 = self.pair(i, u)
            k2, f2 = self.pair(k1, w0)
            if k2 != u:
                continue
            total = total + c * root_of_unity(self.n, (f1 + f2) % 1)
        return total


def _twisted_radical_dim(alg: _TwistedAlgebra) -> int:
    """Dimension of the trace-form radical of the twisted algebra.

    Small algebras go through the generic Gram elimination.  Large ones use
    the structure of the trace form: tr(a_i a_j) is nonzero exactly when
    r_i + r_j is central, where it equals dim times a root of unity, so the
    Gram matrix is a generalized permutation matrix of full rank; the
    permutation property is verified element by element.
    """
    if alg.dim <= _DENSE_RADICAL_BOUND:
        sc = {}
        for i in range(alg.dim):
            for j in range(alg.dim):
                k, f = alg.pair(i, j)
                sc[(i, j)] = {k: root_of_unity(alg.n, f)}
        return algebra_radical(sc, alg.dim, alg.n)
    seen = set()
    for i in range(alg.dim):
        j = alg.coset_index(alg.model.neg(alg.reps[i]))
        k, _f = alg.pair(i, j)
        if k != 0 or j in seen:
            raise RuntimeError("trace form lost its permutation structure")
        seen.add(j)
    return 0


def _twisted_center_dim(alg: _TwistedAlgebra) -> int:
    """Dimension of the center: count basis classes pairing trivially.

    Conjugation by a_u fixes each basis line a_r up to the scalar with
    exponent eps * B(u, r), so an element is central iff every basis class
    in its support pairs trivially against all of T under eps.
    """
    model = alg.model
    count = 0
    for r in alg.reps:
        if all((alg.eps * model.pairing_exponent(u, r)) % 1 == 0
               for u in model.basis()):
            count += 1
    return count


def _root_exponent_candidates(conductor: int) -> List[Fraction]:
    out = [Fraction(j, conductor) % 1 for j in range(conductor)]
    if conductor % 2 == 1:
        out += [Fraction(2 * j + 1, 2 * conductor) % 1 for j in range(conductor)]
    seen = set()
    uniq = []
    for f in out:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    return uniq


def _scalar_candidates(conductor: int) -> List[CycNum]:
    vals = [root_of_unity(conductor, f) for f in _root_exponent_candidates(conductor)]
    for r in (0, 2, -2, Fraction(1, 2), Fraction(-1, 2), 3, -3):
        vals.append(CycNum.from_rational(r, conductor))
    return vals


def _poly_eval(alg: _TwistedAlgebra, coeffs: Sequence[CycNum],
               w: Dict[int, CycNum], unit: Dict[int, CycNum]) -> Dict[int, CycNum]:
    """Evaluate a polynomial at w, with `unit` playing the role of 1."""
    acc: Dict[int, CycNum] = {}
    for c in reversed(coeffs):
        acc = alg.product(acc, w)
        if not c.is_zero:
            acc = alg.add(acc, alg.scale(c, unit))
    return acc


def _corner_min_poly(alg: _TwistedAlgebra, e: Dict[int, CycNum],
                     w: Dict[int, CycNum]) -> List[CycNum]:
    """Monic minimal polynomial of w inside the corner e A e (unit = e)."""
    powers = [e, w]
    while True:
        support = sorted(set().union(*(p.keys() for p in powers)))
        zero = CycNum.from_rational(0, alg.n)
        cols = [[p.get(s, zero) for s in support] for p in powers]
        lhs = CycMatrix(alg.n, [[cols[c][r] for c in range(len(powers) - 1)]
                                for r in range(len(support))])
        rhs = CycMatrix(alg.n, [[cols[-1][r]] for r in range(len(support))])
        sol = lhs.solve(rhs)
        if sol is not None:
            k = len(powers) - 1
            coeffs = [-sol.at(s, 0) for s in range(k)] + [CycNum.from_rational(1, alg.n)]
            return coeffs
        powers.append(alg.product(powers[-1], w))
        if len(powers) > alg.dim + 1:
            raise RuntimeError("minimal polynomial search exceeded the dimension")


def _corner_split(alg: _TwistedAlgebra, e: Dict[int, CycNum],
                  cand: Dict[int, CycNum]) -> Optional[List[Dict[int, CycNum]]]:
    """Try to split the corner e A e along the element e cand e.

    Finds the minimal polynomial, scans for roots among roots of unity and
    small rationals, builds the spectral projectors g(w)/g(root) for the
    simple roots found, and keeps only splits where every piece verifies as
    an idempotent.  Returns the pieces, or None when no certified split
    exists along this candidate.
    """
    w = alg.product(alg.product(e, cand), e)
    if not w:
        return None
    f = _corner_min_poly(alg, e, w)
    if len(f) <= 2:
        return None  # w is a scalar multiple of e; nothing to split
    one = CycNum.from_rational(1, alg.n)
    zero = CycNum.from_rational(0, alg.n)
    pieces: List[Dict[int, CycNum]] = []
    remaining = list(f)
    for val in _scalar_candidates(alg.n):
        if len(remaining) <= 1:
            break
        # Horner evaluation of the deflated polynomial at the candidate.
        acc = zero
        for c in reversed(remaining):
            acc = acc * val + c
        if not acc.is_zero:
            continue
        remaining = _poly_div_linear(remaining, val, alg.n)
        # projector onto the val-eigenspace: g(w) / g(val) with g the full
        # minimal polynomial deflated at val once.
        g = _poly_div_linear(f, val, alg.n)
        gval = zero
        for c in reversed(g):
            gval = gval * val + c
        if gval.is_zero:
            continue  # repeated root; no simple spectral projector
        proj = alg.scale(gval.inv(), _poly_eval(alg, g, w, e))
        if proj and alg.is_idempotent(proj):
            pieces.append(proj)
    if not pieces:
        return None
    rest = e
    for p in pieces:
        rest = alg.sub(rest, p)
    parts = list(pieces)
    if rest:
        if not alg.is_idempotent(rest):
            return None
        parts.append(rest)
    if len(parts) < 2:
        return None
    for a in range(len(parts)):
        for b in range(len(parts)):
            if a != b and alg.product(parts[a], parts[b]):
                return None
    return parts


def _poly_div_linear(f: Sequence[CycNum], val: CycNum, conductor: int) -> List[CycNum]:
    """Quotient of f by (x - val); f(val) must be 0."""
    out = [CycNum.from_rational(0, conductor)] * (len(f) - 1)
    carry = CycNum.from_rational(0, conductor)
    for idx in range(len(f) - 1, 0, -1):
        carry = f[idx] + carry * val
        out[idx - 1] = carry
    return out


def _primitive_idempotents(alg: _TwistedAlgebra,
                           commuting: Sequence[int],
                           d_target: int) -> List[Dict[int, CycNum]]:
    """Refine the unit into orthogonal idempotents by spectral splitting.

    First pass: the pairwise-commuting basis elements indexed by `commuting`
    (classes of a maximal isotropic), whose joint spectral decomposition
    reaches the character idempotents when the algebra splits.  Second pass:
    every basis element is tried against each corner of module rank above
    d_target.  Ranks exactly d_target are final: in a non-split algebra of
    dimension d^2 every module has dimension a multiple of (index)*d, so a
    rank equal to d certifies primitivity.
    """
    idems = [alg.unit()]
    for i in commuting:
        cand = alg.basis_vec(i)
        grown: List[Dict[int, CycNum]] = []
        for e in idems:
            pieces = _corner_split(alg, e, cand)
            grown.extend(pieces if pieces else [e])
        idems = grown
    changed = True
    while changed:
        changed = False
        grown = []
        for e in idems:
            if alg.module_rank(e) <= d_target:
                grown.append(e)
                continue
            split = None
            for i in range(alg.dim):
                split = _corner_split(alg, e, alg.basis_vec(i))
                if split:
                    break
            if split:
                changed = True
                grown.extend(split)
            else:
                grown.append(e)
        idems = grown
    return idems


def _isotropic_class_indices(alg: _TwistedAlgebra, model: FiniteTorus) -> List[int]:
    """Basis indices of a maximal isotropic subgroup, used as the commuting
    family seeding the idempotent refinement."""
    if model.mode == "local":
        desc = canonical_tame_subgroup(model)
    else:
        desc = enumerate_maximal_isotropics(model)[0]
    members = subgroup_elements(model, desc)
    return [k for k, r in enumerate(alg.reps) if r in members]


def _oracle_decomposition(alg: _TwistedAlgebra, d_target: int) -> Dict[str, object]:
    """Exhaustive decomposition of the regular module of the twisted algebra.

    Returns the number of isomorphism classes of simple modules (counted by
    comparing trace characters), their dimensions, and the idempotent count.
    """
    commuting = _isotropic_class_indices(alg, alg.model)
    idems = _primitive_idempotents(alg, commuting, d_target)
    ranks = [alg.module_rank(e) for e in idems]
    if sum(ranks) != alg.dim:
        raise RuntimeError("idempotent ranks do not add up to the dimension")
    keys = []
    for e in idems:
        keys.append(tuple(alg.module_trace(e, i) for i in range(alg.dim)))
    classes: Dict[tuple, List[int]] = {}
    for key, rank in zip(keys, ranks):
        classes.setdefault(key, []).append(rank)
    dims = sorted({rank for group in classes.values() for rank in group})
    return {
        "class_count": len(classes),
        "module_dims": dims,
        "idempotent_count": len(idems),
        "ranks": sorted(ranks),
    }


def achi_report(cover: Cover,
                chi: CentralChar,
                conductor: Optional[int] = None) -> Dict[str, object]:
    """Structure report for the chi-component of the cover's group algebra.

    Keys: dimension ([T:Z], always a perfect square d^2), radical_dim,
    center_dim, splits (whether a rank-d idempotent exists over the given
    coefficient field), conductor.  The default conductor is the smallest
    one containing the values of chi; raising it can make a non-split
    algebra split.
    """
    _validate_central_char(cover, chi)
    n = conductor if conductor is not None else minimal_conductor(chi.exponents)
    alg = _TwistedAlgebra(cover, chi, n)
    d = isqrt(alg.dim)
    assert d * d == alg.dim
    radical = _twisted_radical_dim(alg)
    center = _twisted_center_dim(alg)
    commuting = _isotropic_class_indices(alg, alg.model)
    idems = _primitive_idempotents(alg, commuting, d)
    splits = any(alg.module_rank(e) == d for e in idems)
    return {
        "dimension": alg.dim,
        "radical_dim": radical,
        "center_dim": center,
        "splits": splits,
        "conductor": n,
    }


# ---------------------------------------------------------------------------
# Stone-von-Neumann verification
# ---------------------------------------------------------------------------

def _sparse_columns(mat: CycMatrix) -> List[Tuple[int, CycNum]]:
    """Column structure of a generalized permutation matrix."""
    cols = []
    for j in range(mat.ncols):
        entry = None
        for i in range(mat.nrows):
            v = mat.at(i, j)
            if not v.is_zero:
                if entry is not None:
                    raise ValueError("matrix is not a generalized permutation matrix")
                entry = (i, v)
        if entry is None:
            raise ValueError("matrix has an empty column")
        cols.append(entry)
    return cols


def _canonical_intertwiner(cover: Cover,
                           src_members: FrozenSet[Element], src_psi: CharExtension,
                           dst_members: FrozenSet[Element], dst_psi: CharExtension,
                           conductor: int,
                           shift: Optional[Element] = None) -> CycMatrix:
    """An averaged intertwiner from Ind(src_psi) to Ind(dst_psi).

    In the function model J(f)(x) = sum over a in A_dst of
    dst_psi(a~) f(x a~ s~) with s~ the lift of the shift; every shift gives
    an equivariant map, but the average can vanish (it always does between
    two distinct characters of the same subgroup), so callers scan shifts
    until the map is invertible.  Expanding against the coset bases gives a
    matrix whose (j, i) entry sums dst_psi(a~) src_psi(h~)^-1 over the a
    with t_j + a + s falling in the coset of t_i, where h~ = t_i~^-1 t_j~ a~ s~.
    """
    model = cover.base
    src_reps, src_memo = _coset_reps(model, src_members)
    dst_reps, _dst_memo = _coset_reps(model, dst_members)
    d = len(src_reps)
    zero = CycNum.from_rational(0, conductor)
    rows = [[zero] * d for _ in range(d)]
    src_inv = [cover.inv(cover.lift(t)) for t in src_reps]
    s_lift = cover.lift(shift) if shift is not None else cover.identity()
    for j, tj in enumerate(dst_reps):
        tjl = cover.lift(tj)
        for a in dst_members:
            y = cover.mul(cover.mul(tjl, (a, 0)), s_lift)
            i, _rem = src_memo[y[0]]
            h = cover.mul(src_inv[i], y)
            f = (dst_psi.value_exponent((a, 0)) - src_psi.value_exponent(h)) % 1
            rows[j][i] = rows[j][i] + root_of_unity(conductor, f)
    return CycMatrix(conductor, rows)


def _intertwines(j_mat: CycMatrix,
                 src_cols: Sequence[List[Tuple[int, CycNum]]],
                 dst_cols: Sequence[List[Tuple[int, CycNum]]]) -> bool:
    """Check J rho_src(g) == rho_dst(g) J for every generator, using the
    generalized permutation structure of the generator matrices."""
    d = j_mat.nrows
    zero = CycNum.from_rational(0, j_mat.conductor)
    for src, dst in zip(src_cols, dst_cols):
        # column i of J rho_src(g) is s * J[:, r] where rho_src(g) has its
        # only column-i entry s at row r; column i of rho_dst(g) J routes
        # row p of J[:, i] to row dst[p].
        for i in range(d):
            r, s = src[i]
            left_col = [j_mat.at(q, r) * s for q in range(d)]
            acc = [zero] * d
            for p in range(d):
                v = j_mat.at(p, i)
                if not v.is_zero:
                    rp, sp = dst[p]
                    acc[rp] = acc[rp] + sp * v
            if any(left_col[q] != acc[q] for q in range(d)):
                return False
    return True


def verify_svn(cover: Cover,
               chi: CentralChar,
               conductor: Optional[int] = None) -> Dict[str, object]:
    """Uniqueness of the irreducible with central character chi, verified twice.

    Route one: induce every extension of chi over every maximal isotropic
    subgroup and certify all inductions pairwise isomorphic via explicit
    intertwiners (solver for small dimensions, averaged intertwiner with
    verification above that).  Route two, independent: decompose the regular
    module of the chi-twisted group algebra exhaustively and count the
    isomorphism classes of simple modules.  The report also checks the
    extension counts |I_chi| = [T:A] and the dimension identity
    (module dim) = d * e.
    """
    model = cover.base
    _validate_central_char(cover, chi)
    isos = enumerate_maximal_isotropics(model)
    data = []
    exponents = list(chi.exponents)
    for desc in isos:
        exts = extensions_of_central_char(cover, desc, chi)
        members = subgroup_elements(model, desc)
        data.append((desc, members, exts))
        exponents.extend(f for ext in exts for f in ext.exponents)
    n = conductor if conductor is not None else minimal_conductor(exponents)

    counts_ok = all(len(exts) == model.order // len(members)
                    for _desc, members, exts in data)
    d = None
    ref = None
    pairwise = True
    witness = None
    fallbacks = 0
    total = 0
    hom_dims_one = True
    for desc, members, exts in data:
        for psi in exts:
            rep = induce_vchi(cover, desc, psi, conductor=n)
            total += 1
            if d is None:
                d = rep.dimension
            elif rep.dimension != d:
                pairwise = False
                witness = (desc.generators, "dimension mismatch")
                continue
            if ref is None:
                ref = (members, psi, rep, [_sparse_columns(mat) for mat in rep.matrices])
                continue
            ref_members, ref_psi, ref_rep, ref_cols = ref
            if d <= _SOLVER_DIM_BOUND:
                basis = intertwiner_space(list(ref_rep.matrices), list(rep.matrices))
                if len(basis) != 1:
                    hom_dims_one = False
                ok = any(b.rank() == d for b in basis)
            else:
                cols = [_sparse_columns(mat) for mat in rep.matrices]
                src_reps, _m = _coset_reps(model, members)
                ok = False
                for shift in src_reps:
                    jm = _canonical_intertwiner(cover, members, psi,
                                                ref_members, ref_psi, n,
                                                shift=shift)
                    if jm.rank() == d:
                        ok = _intertwines(jm, cols, ref_cols)
                        break
                if not ok:
                    fallbacks += 1
                    basis = intertwiner_space(list(ref_rep.matrices), list(rep.matrices))
                    if len(basis) != 1:
                        hom_dims_one = False
                    ok = any(b.rank() == d for b in basis)
            if not ok:
                pairwise = False
                witness = (desc.generators, tuple(psi.exponents))
    assert d is not None

    alg = _TwistedAlgebra(cover, chi, n)
    radical = _twisted_radical_dim(alg)
    center = _twisted_center_dim(alg)
    oracle = _oracle_decomposition(alg, d)
    module_dims = oracle["module_dims"]
    dims_consistent = len(module_dims) == 1
    module_dim = module_dims[0] if dims_consistent else None
    schur = module_dim // d if (dims_consistent and module_dim % d == 0) else None

    report = {
        "induced_dimension": d,
        "isotropic_count": len(isos),
        "induction_count": total,
        "extension_counts_ok": counts_ok,
        "pairwise_isomorphic": pairwise,
        "hom_spaces_one_dimensional": hom_dims_one,
        "intertwiner_fallbacks": fallbacks,
        "algebra_dimension": alg.dim,
        "algebra_dimension_ok": alg.dim == d * d,
        "radical_dim": radical,
        "center_dim": center,
        "oracle_class_count": oracle["class_count"],
        "oracle_module_dim": module_dim,
        "schur_scale": schur,
        "dimension_identity_ok": schur is not None and module_dim == d * schur,
        "conductor": n,
    }
    report["ok"] = bool(
        counts_ok and pairwise and hom_dims_one
        and radical == 0 and center == 1
        and oracle["class_count"] == 1
        and report["algebra_dimension_ok"]
        and report["dimension_identity_ok"])
    if witness is not None:
        report["failure_witness"] = witness
    return report


def counting_identity(cover: Cover, mu_exponent: int) -> Dict[str, object]:
    """For a faithful mu-character: (number of central chi) * d^2 = |T|.

    d is the common induced dimension [T:A]; the identity reflects the fact
    that the chi-components exhaust the epsilon-part of the group algebra.
    """
    model = cover.base
    chars = central_characters(cover, mu_exponent=mu_exponent)
    if not chars or not chars[0].is_injective():
        raise ValueError("mu_exponent must define a faithful character of mu")
    zmem = subgroup_elements(model, compute_center(model))
    d2 = model.order // len(zmem)
    return {
        "char_count": len(chars),
        "squared_dimension": d2,
        "total": len(chars) * d2,
        "group_order": model.order,
        "ok": len(chars) * d2 == model.order,
    }


# ---------------------------------------------------------------------------
# tame descent
# ---------------------------------------------------------------------------

def _torsion_lift(cover: Cover, members: FrozenSet[Element]) -> Tuple[CoverElement, ...]:
    model = cover.base
    return tuple(sorted((t, j) for t in members if is_torsion_class(model, t)
                        for j in range(cover.m)))


def default_section(cover: Cover, desc: SubgroupDesc) -> Dict[tuple, tuple]:
    """The lex-least section for a tame subgroup A.

    A section assigns to each character theta of the torsion part of the
    center an extension to the torsion part of A~.  Keys are theta's value
    tuples over the sorted center-torsion domain; values are the extension's
    value tuples over the sorted A-torsion domain.  The default picks, for
    every theta, the extension that is smallest in lexicographic order.
    """
    model = cover.base
    if not is_tame(model, desc):
        raise ValueError("subgroup is not tame: Z * A_tors != A")
    members = subgroup_elements(model, desc)
    center = subgroup_elements(model, compute_center(model))
    ztors = _torsion_lift(cover, center)
    ators = _torsion_lift(cover, members)
    thetas = _char_tables(cover, ztors, {cover.identity(): _ZERO})
    section = {}
    for theta in thetas:
        exts = _char_tables(cover, ators, {g: theta[g] for g in ztors})
        best = exts[0]
        section[tuple(theta[g] for g in ztors)] = tuple(best[g] for g in ators)
    return section


def _section_lookup(cover: Cover, desc: SubgroupDesc,
                    section: Mapping[tuple, tuple]):
    """Domains and a checked lookup for a user-supplied or default section."""
    model = cover.base
    members = subgroup_elements(model, desc)
    center = subgroup_elements(model, compute_center(model))
    ztors = _torsion_lift(cover, center)
    ators = _torsion_lift(cover, members)
    zpos = {g: k for k, g in enumerate(ztors)}

    def lookup(theta_key: tuple) -> Dict[CoverElement, Fraction]:
        try:
            values = section[theta_key]
        except KeyError:
            raise ValueError("section does not assign an extension to this "
                             "torsion character") from None
        table = dict(zip(ators, (Fraction(v) % 1 for v in values)))
        for g in ztors:
            if table[g] != theta_key[zpos[g]]:
                raise ValueError("section value does not extend its torsion character")
        for g in ators:
            for h in ators:
                if (table[g] + table[h]) % 1 != table[cover.mul(g, h)]:
                    raise ValueError("section value is not a character")
        return table

    return members, center, ztors, ators, lookup


def _descent_extension(cover: Cover, desc: SubgroupDesc,
                       chi: CentralChar,
                       section: Mapping[tuple, tuple]) -> CharExtension:
    """The extension of chi to A~ carved out by the section.

    Tameness writes every a~ in A~ as z~ tau with tau in the torsion part;
    the value is chi(z~) times the section extension at tau, independent of
    the chosen factorization.
    """
    model = cover.base
    members, center, ztors, ators, lookup = _section_lookup(cover, desc, section)
    theta_key = tuple(chi.value_exponent(g) for g in ztors)
    tors_table = lookup(theta_key)
    lifted = tuple(sorted((a, j) for a in members for j in range(cover.m)))
    values = []
    for g in lifted:
        for tau in ators:
            cand = cover.mul(g, cover.inv(tau))
            if cand[0] in center:
                values.append((chi.value_exponent(cand) + tors_table[tau]) % 1)
                break
        else:
            raise ValueError("subgroup is not tame: Z * A_tors != A")
    psi = CharExtension(lifted, tuple(values), chi)
    for g in lifted[:16]:
        for h in lifted[:16]:
            expect = (psi.value_exponent(g) + psi.value_exponent(h)) % 1
            assert psi.value_exponent(cover.mul(g, h)) == expect
    return psi


def _column_basis(mat: CycMatrix) -> List[CycMatrix]:
    """Greedy basis of the column space (deterministic, left to right)."""
    basis: List[CycMatrix] = []
    rank = 0
    rows_acc: List[List[CycNum]] = [[] for _ in range(mat.nrows)]
    for j in range(mat.ncols):
        col = [mat.at(i, j) for i in range(mat.nrows)]
        trial = CycMatrix(mat.conductor,
                          [rows_acc[i] + [col[i]] for i in range(mat.nrows)])
        r = trial.rank()
        if r > rank:
            rank = r
            for i in range(mat.nrows):
                rows_acc[i].append(col[i])
            basis.append(CycMatrix(mat.conductor, [[c] for c in col]))
    return basis


def _restricted_action(b: CycMatrix, action: CycMatrix) -> CycMatrix:
    """Matrix of `action` on the column span of b, solving b X = action b."""
    rhs = action * b
    sol = b.solve(rhs)
    if sol is None:
        raise RuntimeError("subspace is not invariant under the action")
    return sol


def _g_functor(cover: Cover, desc: SubgroupDesc,
               section: Mapping[tuple, tuple],
               w: Rep, conductor: int) -> List[Tuple[CentralChar, CycMatrix]]:
    """Descent of a cover representation along a tame subgroup.

    Projects W onto the isotypic parts of the section's characters of the
    A-torsion subgroup, then splits the (commuting) action of the center on
    that space into central characters.  Returns (character, column) pairs,
    the columns giving a basis of the descended space inside W.
    """
    model = cover.base
    members, center, ztors, ators, lookup = _section_lookup(cover, desc, section)
    eps = rep_mu_exponent(cover, w)
    tors_base = sorted({g[0] for g in ators})
    kk = len(tors_base)

    thetas = _char_tables(cover, ztors, {cover.identity(): _ZERO})
    candidates = [c for c in central_characters(cover)
                  if c.mu_exponent() == eps]
    zmem = sorted(center)

    out: List[Tuple[CentralChar, CycMatrix]] = []
    wmats = {t: rep_evaluate(cover, w, (t, 0)).embed(conductor) for t in tors_base}
    inv_k = CycNum.from_rational(Fraction(1, kk), conductor)
    for theta in thetas:
        if theta[(model.zero(), 1)] != eps:
            continue
        table = lookup(tuple(theta[g] for g in ztors))
        proj = CycMatrix.zeros(conductor, w.dimension, w.dimension)
        for s in tors_base:
            coeff = root_of_unity(conductor, (-table[(s, 0)]) % 1)
            proj = proj + coeff * wmats[s]
        proj = inv_k * proj
        assert proj * proj == proj
        basis_cols = _column_basis(proj)
        if not basis_cols:
            continue
        b = CycMatrix(conductor, [[c.at(i, 0) for c in basis_cols]
                                  for i in range(w.dimension)])
        zact = {}
        for z in zmem:
            zact[z] = _restricted_action(b, rep_evaluate(cover, w, (z, 0)).embed(conductor))
        k_theta = b.ncols
        found = 0
        inv_z = CycNum.from_rational(Fraction(1, len(zmem)), conductor)
        for chi in candidates:
            if any(chi.value_exponent(g) != theta[g] for g in ztors):
                continue
            q = CycMatrix.zeros(conductor, k_theta, k_theta)
            for z in zmem:
                coeff = root_of_unity(conductor, (-chi.value_exponent((z, 0))) % 1)
                q = q + coeff * zact[z]
            q = inv_z * q
            for col in _column_basis(q):
                out.append((chi, b * col))
                found += 1
        if found != k_theta:
            raise RuntimeError("center action did not decompose into characters")
    return out


def tame_roundtrip(cover: Cover, desc: SubgroupDesc,
                   section: Optional[Mapping[tuple, tuple]] = None,
                   w: Optional[Rep] = None,
                   conductor: Optional[int] = None) -> Dict[str, object]:
    """Round-trip verification of the descent equivalence for a tame A.

    Unit direction: for every faithful central character chi, inducing the
    section's extension and descending again must return exactly chi, with
    the explicit unit v -> f_v (the basis vector of the identity coset)
    spanning the descended line.  Counit direction (when a representation W
    is given): the natural map f -> sum_i t_i f(t_i^-1) from the induction
    of the descent back to W is checked to be an invertible intertwiner.
    """
    model = cover.base
    if not is_tame(model, desc):
        raise ValueError("subgroup is not tame: Z * A_tors != A")
    if section is None:
        section = default_section(cover, desc)

    chars = central_characters(cover, injective_only=True)
    exps = [f for c in chars for f in c.exponents]
    n = minimal_conductor(exps + [Fraction(v) % 1 for vals in section.values() for v in vals])
    if w is not None:
        n = lcm(n, w.conductor)
    if conductor is not None:
        n = lcm(n, conductor)

    unit_failures = []
    for chi in chars:
        psi = _descent_extension(cover, desc, chi, section)
        rep = induce_vchi(cover, desc, psi, conductor=n)
        pairs = _g_functor(cover, desc, section, rep, n)
        ok = len(pairs) == 1 and pairs[0][0] == chi
        if ok:
            unit_col = pairs[0][1]
            # the explicit unit: the basis vector of the identity coset
            eta = CycMatrix(n, [[CycNum.from_rational(1 if i == 0 else 0, n)]
                                for i in range(rep.dimension)])
            both = CycMatrix(n, [[unit_col.at(i, 0), eta.at(i, 0)]
                                 for i in range(rep.dimension)])
            ok = both.rank() == 1
        if not ok:
            unit_failures.append(chi.exponents)

    report: Dict[str, object] = {
        "unit_ok": not unit_failures,
        "unit_cases": len(chars),
        "conductor": n,
    }
    if unit_failures:
        report["unit_failures"] = tuple(unit_failures)

    if w is None:
        report["counit_ok"] = None
        return report
    if w.dimension == 0:
        report["counit_ok"] = True
        report["g_dimension"] = 0
        return report

    members = subgroup_elements(model, desc)
    reps, _memo = _coset_reps(model, members)
    d = len(reps)
    pairs = _g_functor(cover, desc, section, w, n)
    report["g_dimension"] = len(pairs)
    if len(pairs) * d != w.dimension:
        report["counit_ok"] = False
        return report

    inds = []
    psis = []
    for chi, _col in pairs:
        psi = _descent_extension(cover, desc, chi, section)
        psis.append(psi)
        inds.append(induce_vchi(cover, desc, psi, conductor=n))
    fgw = rep_direct_sum(*inds)
    # evaluation counit: the basis function of the i-th coset in the block of
    # (chi, b) goes to rho_W(t_i~) b, which is equivariant because the line
    # spanned by b carries the character the block was induced from.
    wmat_at = {t: rep_evaluate(cover, w, cover.lift(t)).embed(n) for t in reps}
    cols: List[List[CycNum]] = []
    for _chi, bcol in pairs:
        for t in reps:
            col = wmat_at[t] * bcol
            cols.append([col.at(r, 0) for r in range(w.dimension)])
    counit = CycMatrix(n, [[cols[c][r] for c in range(len(cols))]
                           for r in range(w.dimension)])
    ok = counit.rank() == w.dimension
    if ok:
        for k in range(len(cover.generators())):
            lhs = counit * fgw.matrices[k].embed(n)
            rhs = w.matrices[k].embed(n) * counit
            if lhs != rhs:
                ok = False
                break
    report["counit_ok"] = ok
    return report


# ---------------------------------------------------------------------------
# central character support
# ---------------------------------------------------------------------------

def rep_support(cover: Cover, w: Rep) -> FrozenSet[CentralChar]:
    """Central characters appearing in W, computed by two routes.

    Route one finds the chi for which the averaged central projector has
    positive rank; route two searches for a nonzero intertwiner from the
    induced model V_chi into W.  The two sets must agree.
    """
    model = cover.base
    eps = rep_mu_exponent(cover, w)
    candidates = [c for c in central_characters(cover) if c.mu_exponent() == eps]
    zmem = sorted(subgroup_elements(model, compute_center(model)))
    n = w.conductor
    for c in candidates:
        n = lcm(n, c.minimal_conductor())
    zmats = {z: rep_evaluate(cover, w, (z, 0)).embed(n) for z in zmem}
    inv_z = CycNum.from_rational(Fraction(1, len(zmem)), n)

    eigen_route = set()
    for chi in candidates:
        proj = CycMatrix.zeros(n, w.dimension, w.dimension)
        for z in zmem:
            coeff = root_of_unity(n, (-chi.value_exponent((z, 0))) % 1)
            proj = proj + coeff * zmats[z]
        proj = inv_z * proj
        if proj.rank() > 0:
            eigen_route.add(chi)

    if model.mode == "local":
        desc = canonical_tame_subgroup(model)
    else:
        desc = enumerate_maximal_isotropics(model)[0]
    hom_route = set()
    wmats = [mat.embed(n) for mat in w.matrices]
    for chi in candidates:
        psi = extensions_of_central_char(cover, desc, chi)[0]
        vrep = induce_vchi(cover, desc, psi, conductor=n)
        basis = intertwiner_space(wmats, list(vrep.matrices))
        if basis:
            hom_route.add(chi)

    if eigen_route != hom_route:
        raise RuntimeError("eigenvector support and Hom support disagree")
    return frozenset(eigen_route)
