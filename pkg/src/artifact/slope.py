"""Root-datum bookkeeping and the non-critical-slope test, in exact rationals.

A datum records two character lattices: the full one X of rank
``rank_full`` (weights of the ambient torus) and the restricted one Y of
rank ``rank_split`` (characters of the split part of the center), linked by
an integer restriction matrix.  Positive roots live in X and come paired
with integer coroots; a distinguished subset of them restricts to the
simple roots of the relative root system in Y, and the restricted roots
carry multiplicities.

Slopes are rational vectors in Y-coordinates.  The central computation is
the criticality test: reflect the shifted weight by each simple root,
restrict, add the half-sum of restricted roots and the slope of the smooth
part, and ask whether the result lies in the nonnegative rational cone
spanned by the restricted simple roots.  Cone membership is decided by
Fourier-Motzkin elimination, so every verdict is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def _as_vector(values: Sequence, length: int, what: str) -> Vector:
    vec = tuple(Fraction(x) for x in values)
    if len(vec) != length:
        raise ValueError(f"{what} must have length {length}, got {len(vec)}")
    return vec


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class RootDatum:
    """Lattice data for the criticality test.

    positive_roots pairs each root in X with its integer coroot (as a vector
    in the dual basis); simple_pairs lists (index into positive_roots,
    restricted simple root in Y); restricted_roots lists (root in Y,
    multiplicity).  Validation enforces root/coroot pairing 2 and that each
    listed simple root is the restriction of its partner.
    """

    rank_full: int
    rank_split: int
    restriction: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Tuple[Vector, Vector], ...]
    simple_pairs: Tuple[Tuple[int, Vector], ...]
    restricted_roots: Tuple[Tuple[Vector, int], ...]

    def __post_init__(self):
        res = tuple(tuple(int(x) for x in row) for row in self.restriction)
        if len(res) != self.rank_split or any(len(r) != self.rank_full for r in res):
            raise ValueError(
                f"restriction matrix must be {self.rank_split} x {self.rank_full}")
        object.__setattr__(self, "restriction", res)
        roots = []
        for root, coroot in self.positive_roots:
            rv = _as_vector(root, self.rank_full, "positive root")
            cv = _as_vector(coroot, self.rank_full, "coroot")
            if _dot(rv, cv) != 2:
                raise ValueError(
                    f"root/coroot pairing must equal 2, got {_dot(rv, cv)} "
                    f"for root {rv}")
            roots.append((rv, cv))
        object.__setattr__(self, "positive_roots", tuple(roots))
        pairs = []
        for idx, alpha in self.simple_pairs:
            if not 0 <= idx < len(roots):
                raise ValueError(f"simple pair index {idx} out of range")
            av = _as_vector(alpha, self.rank_split, "restricted simple root")
            if restrict(self, roots[idx][0]) != av:
                raise ValueError(
                    f"restricted simple root {av} is not the restriction of "
                    f"positive root {roots[idx][0]}")
            pairs.append((int(idx), av))
        object.__setattr__(self, "simple_pairs", tuple(pairs))
        rr = []
        for alpha, mult in self.restricted_roots:
            av = _as_vector(alpha, self.rank_split, "restricted root")
            if int(mult) < 1:
                raise ValueError("restricted root multiplicity must be >= 1")
            rr.append((av, int(mult)))
        object.__setattr__(self, "restricted_roots", tuple(rr))


@dataclass(frozen=True)
class SlopeVector:
    """A rational vector in the restricted character lattice's coordinates."""

    coefficients: Vector

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(Fraction(x) for x in self.coefficients))

    def __add__(self, other: "SlopeVector") -> "SlopeVector":
        if len(self.coefficients) != len(other.coefficients):
            raise ValueError("slope vectors have different lengths")
        return SlopeVector(tuple(a + b for a, b in
                                 zip(self.coefficients, other.coefficients)))


@dataclass(frozen=True)
class WeightChar:
    """A character datum: an integral highest weight in X together with the
    slope of its locally constant part."""

    weight: Tuple[int, ...]
    theta_slope: SlopeVector

    def __post_init__(self):
        object.__setattr__(self, "weight",
                           tuple(int(x) for x in self.weight))


def restrict(datum: RootDatum, vec: Sequence) -> Vector:
    """Apply the restriction matrix to a vector in the full lattice."""
    v = _as_vector(vec, datum.rank_full, "vector")
    return tuple(_dot(row, v) for row in datum.restriction)


def reflect(datum: RootDatum, root_index: int, vec: Sequence) -> Vector:
    """Reflection in the root/coroot pair: v - <v, coroot> root."""
    root, coroot = datum.positive_roots[root_index]
    v = _as_vector(vec, datum.rank_full, "vector")
    c = _dot(v, coroot)
    return tuple(x - c * r for x, r in zip(v, root))


def slope_of_character(ord_values: Sequence, datum: RootDatum) -> SlopeVector:
    """Package valuations on the cocharacter basis as a slope vector.

    The bases are dual, so the functional's coordinates are exactly the
    given valuations; slopes of products add componentwise.
    """
    return SlopeVector(_as_vector(ord_values, datum.rank_split, "ord values"))


def compute_rho(datum: RootDatum) -> Tuple[SlopeVector, Vector]:
    """Half-sums: rho in Y over restricted roots with multiplicity, and the
    half-sum of the positive roots in X.  The two must be compatible under
    restriction."""
    rho = [Fraction(0)] * datum.rank_split
    for alpha, mult in datum.restricted_roots:
        for i, x in enumerate(alpha):
            rho[i] += Fraction(mult, 2) * x
    rho_full = [Fraction(0)] * datum.rank_full
    for root, _coroot in datum.positive_roots:
        for i, x in enumerate(root):
            rho_full[i] += x / 2
    if restrict(datum, rho_full) != tuple(rho):
        raise ValueError(
            "datum inconsistency: the restricted half-sum of positive roots "
            "does not match the weighted half-sum of restricted roots")
    return SlopeVector(tuple(rho)), tuple(rho_full)


def _normalize_inequality(coeffs: Vector, const: Fraction):
    """Scale an inequality (coeffs . c + const >= 0) to a canonical form."""
    scale = None
    for x in coeffs + (const,):
        if x != 0:
            scale = abs(x)
            break
    if scale is None:
        return None  # 0 >= 0, trivially true
    return (tuple(x / scale for x in coeffs), const / scale)


def cone_member(v: SlopeVector, datum: RootDatum) -> bool:
    """Is v a nonnegative rational combination of the restricted simple roots?

    Feasibility of the exact linear system is decided by Fourier-Motzkin
    elimination over the coefficient variables, in index order; no floating
    point and no pivot heuristics are involved.
    """
    target = _as_vector(v.coefficients, datum.rank_split, "slope vector")
    gens = [alpha for _idx, alpha in datum.simple_pairs]
    s = len(gens)
    if s == 0:
        return all(x == 0 for x in target)
    ineqs = []
    for r in range(datum.rank_split):
        row = tuple(g[r] for g in gens)
        ineqs.append((row, -target[r]))
        ineqs.append((tuple(-x for x in row), target[r]))
    for i in range(s):
        unit = tuple(Fraction(1 if j == i else 0) for j in range(s))
        ineqs.append((unit, Fraction(0)))
    for var in range(s):
        pos, neg, rest = [], [], []
        for coeffs, const in ineqs:
            a = coeffs[var]
            if a > 0:
                pos.append((coeffs, const))
            elif a < 0:
                neg.append((coeffs, const))
            else:
                rest.append((coeffs, const))
        combined = set()
        for item in rest:
            norm = _normalize_inequality(*item)
            if norm is not None:
                combined.add(norm)
        for pc, pk in pos:
            for nc, nk in neg:
                a, b = pc[var], -nc[var]
                coeffs = tuple(b * pc[j] + a * nc[j] for j in range(s))
                norm = _normalize_inequality(coeffs, b * pk + a * nk)
                if norm is not None:
                    combined.add(norm)
        ineqs = sorted(combined)
    return all(const >= 0 for _coeffs, const in ineqs)


def is_noncritical(datum: RootDatum, w: WeightChar) -> Dict[str, object]:
    """The criticality test for a weight-and-slope character.

    For each simple pair, reflect weight + rho_full by the paired root,
    restrict, add rho and the smooth slope, and test membership in the
    nonnegative cone on restricted simple roots.  The character is
    non-critical when every simple root keeps the element out of the cone;
    failing roots are returned as witnesses.
    """
    rho, rho_full = compute_rho(datum)
    shifted = tuple(Fraction(x) + r for x, r in zip(
        _as_vector(w.weight, datum.rank_full, "weight"), rho_full))
    witnesses: List[Vector] = []
    for idx, _alpha in datum.simple_pairs:
        root, coroot = datum.positive_roots[idx]
        c = _dot(shifted, coroot)
        reflected = tuple(x - c * r for x, r in zip(shifted, root))
        element = tuple(a + b + t for a, b, t in zip(
            restrict(datum, reflected), rho.coefficients,
            w.theta_slope.coefficients))
        if cone_member(SlopeVector(element), datum):
            witnesses.append(root)
    return {"noncritical": not witnesses, "witnesses": witnesses}


def slope_lemma_check(datum: RootDatum, slope_vec: SlopeVector,
                      semigroup_gens: Sequence[Sequence]) -> Dict[str, bool]:
    """Compare boundedness on a semigroup with cone membership.

    boundedEverywhere evaluates the slope functional on every generator and
    requires a nonnegative value; inCone is the Fourier-Motzkin verdict.
    When the generators are exactly dual to the cone the two must agree,
    which is what `agree` reports.
    """
    coeffs = _as_vector(slope_vec.coefficients, datum.rank_split, "slope vector")
    bounded = all(
        _dot(coeffs, _as_vector(g, datum.rank_split, "semigroup generator")) >= 0
        for g in semigroup_gens)
    in_cone = cone_member(slope_vec, datum)
    return {
        "boundedEverywhere": bounded,
        "inCone": in_cone,
        "agree": bounded == in_cone,
    }


def cone_member_by_subsets(v: SlopeVector, datum: RootDatum) -> bool:
    """Independent cone-membership oracle via generator subsets.

    A vector lies in the cone iff it is a nonnegative combination of some
    linearly independent subset of the generators, so try every subset and
    solve the square system by exact Gaussian elimination.  Exponential in
    the generator count; intended for cross-checking on small data.
    """
    target = _as_vector(v.coefficients, datum.rank_split, "slope vector")
    gens = [alpha for _idx, alpha in datum.simple_pairs]
    if all(x == 0 for x in target):
        return True
    for size in range(1, min(len(gens), datum.rank_split) + 1):
        for subset in itertools.combinations(range(len(gens)), size):
            sol = _solve_nonneg([gens[i] for i in subset], target)
            if sol is not None:
                return True
    return False


def _solve_nonneg(columns: List[Vector], target: Vector):
    """Solve sum c_i columns[i] = target exactly; return c if unique and
    componentwise nonnegative, else None."""
    rows = len(target)
    s = len(columns)
    aug = [[columns[j][r] for j in range(s)] + [target[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(s):
        pivot = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pivot is None:
            return None  # dependent subset; a smaller one will cover it
        aug[r], aug[pivot] = aug[pivot], aug[r]
        scale = aug[r][c]
        aug[r] = [x / scale for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][s] != 0:
            return None
    sol = [Fraction(0)] * s
    for row_idx, c in enumerate(pivots):
        sol[c] = aug[row_idx][s]
    if any(x < 0 for x in sol):
        return None
    return tuple(sol)
