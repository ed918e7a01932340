"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_N).

No floating point anywhere.  Rationals are `fractions.Fraction`; a cyclotomic
number is its coefficient vector modulo the N-th cyclotomic polynomial, so the
representation is canonical and equality/hash are coefficientwise.  Matrix
routines run exact Gaussian elimination with a deterministic pivot rule
(first nonzero entry in column order): identical inputs give identical
outputs, always.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' into a Fraction (whitespace tolerated)."""
    return Fraction(text.strip().replace(" ", ""))


def format_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


# ---------------------------------------------------------------------------
# cyclotomic polynomials
# ---------------------------------------------------------------------------

def _poly_divexact(num: list, den: Sequence[int]) -> list:
    # exact division of integer polynomials, monic divisor; coefficients low first
    num = list(num)
    deg_d = len(den) - 1
    out = [0] * (len(num) - deg_d)
    for k in range(len(num) - 1, deg_d - 1, -1):
        c = num[k]
        out[k - deg_d] = c
        if c:
            for i, d in enumerate(den):
                num[k - deg_d + i] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of Phi_n, constant term first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_vectors(n: int) -> tuple:
    """x^e mod Phi_n for e = 0..n-1, as tuples of Fractions (low degree first)."""
    deg = euler_phi(n)
    phi = cyclotomic_polynomial(n)
    # x^deg = -(lower part of Phi_n)
    fold = tuple(Fraction(-c) for c in phi[:deg])
    vecs = []
    cur = [_ONE] + [_ZERO] * (deg - 1)
    for _ in range(n):
        vecs.append(tuple(cur))
        top = cur[-1]
        cur = [_ZERO] + cur[:-1]
        if top:
            cur = [c + top * f for c, f in zip(cur, fold)]
    return tuple(vecs)


def _poly_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list, b: list):
    a = list(a)
    q = [_ZERO] * max(1, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - 1, len(b) - 2, -1):
        c = a[k] * inv_lead
        if c:
            q[k - len(b) + 1] = c
            for i, bc in enumerate(b):
                a[k - len(b) + 1 + i] -= c * bc
    return _poly_trim(q), _poly_trim(a)


def _poly_xgcd(a: list, b: list):
    # returns (g, s, t) with s*a + t*b = g, over Fraction polynomials
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    s0, s1 = [_ONE], []
    t0, t1 = [], [_ONE]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1))
    return r0, s0, t0


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: list, b: list) -> list:
    out = list(a) + [_ZERO] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


# ---------------------------------------------------------------------------
# cyclotomic numbers
# ---------------------------------------------------------------------------

class CycNum:
    """Element of Q(zeta_N), stored as phi(N) Fraction coefficients.

    The basis is 1, zeta, ..., zeta^(phi(N)-1) with zeta = e^(2 pi i / N);
    vectors are reduced mod Phi_N on construction, so equal values have equal
    representations.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable):
        deg = euler_phi(conductor)
        cs = tuple(c if isinstance(c, Fraction) else Fraction(c) for c in coeffs)
        if len(cs) != deg:
            raise ValueError(f"need {deg} coefficients at conductor {conductor}, got {len(cs)}")
        self.conductor = conductor
        self.coeffs = cs

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rational(cls, value, conductor: int = 1) -> "CycNum":
        deg = euler_phi(conductor)
        return cls(conductor, (Fraction(value),) + (_ZERO,) * (deg - 1))

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "CycNum":
        return cls(conductor, _power_vectors(conductor)[power % conductor])

    @classmethod
    def _from_poly(cls, conductor: int, poly: Sequence) -> "CycNum":
        deg = euler_phi(conductor)
        vecs = _power_vectors(conductor)
        acc = [_ZERO] * deg
        for e, c in enumerate(poly):
            if c:
                vec = vecs[e % conductor] if e >= deg else None
                if vec is None:
                    acc[e] += c
                else:
                    for i, v in enumerate(vec):
                        acc[i] += c * v
        return cls(conductor, acc)

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return self.coeffs[0]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["CycNum"]:
        if isinstance(other, CycNum):
            if other.conductor != self.conductor:
                raise ValueError(
                    f"conductor mismatch: {self.conductor} vs {other.conductor} (use embed)")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rational(other, self.conductor)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.conductor, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.conductor, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.conductor, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        deg = len(a)
        if deg == 1:
            return CycNum(self.conductor, (a[0] * b[0],))
        conv = [_ZERO] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        if any(conv[deg:]):
            vecs = _power_vectors(self.conductor)
            acc = conv[:deg]
            for e in range(deg, 2 * deg - 1):
                c = conv[e]
                if c:
                    for i, v in enumerate(vecs[e % self.conductor]):
                        acc[i] += c * v
            return CycNum(self.conductor, acc)
        return CycNum(self.conductor, conv[:deg])

    __rmul__ = __mul__

    def inv(self) -> "CycNum":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return CycNum.from_rational(1 / self.coeffs[0], self.conductor)
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.conductor)]
        g, s, _ = _poly_xgcd(list(self.coeffs), phi)
        assert len(g) == 1, "cyclotomic polynomial must be coprime to a nonzero residue"
        scale = 1 / g[0]
        return CycNum._from_poly(self.conductor, [c * scale for c in s])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = CycNum.from_rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def embed(self, conductor: int) -> "CycNum":
        """Embed into Q(zeta_M) for a multiple M of the current conductor."""
        if conductor % self.conductor:
            raise ValueError(
                f"target conductor {conductor} is not a multiple of {self.conductor}")
        if conductor == self.conductor:
            return self
        step = conductor // self.conductor
        poly = {}
        for e, c in enumerate(self.coeffs):
            if c:
                poly[e * step] = c
        out = [_ZERO] * euler_phi(conductor)
        vecs = _power_vectors(conductor)
        for e, c in poly.items():
            for i, v in enumerate(vecs[e]):
                if v:
                    out[i] += c * v
        return CycNum(conductor, out)

    # -- plumbing -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def __repr__(self):
        body = ", ".join(format_rational(c) for c in self.coeffs)
        return f"CycNum({self.conductor}, [{body}])"


def cyc_arith(a: CycNum, b, op: str):
    """Dispatcher used by the test harness: add / mul / inv / embed."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op in ("embed", "embed-smaller-conductor"):
        return a.embed(int(b))
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

Entry = Union[CycNum, int, Fraction]


class CycMatrix:
    """Dense matrix over a single Q(zeta_N); all entries share the conductor."""

    __slots__ = ("conductor", "nrows", "ncols", "data")

    def __init__(self, conductor: int, data: Sequence[Sequence[Entry]]):
        rows = []
        for row in data:
            rows.append(tuple(
                e if isinstance(e, CycNum) else CycNum.from_rational(e, conductor)
                for e in row))
            for e in rows[-1]:
                if e.conductor != conductor:
                    raise ValueError("all entries must share one conductor")
        self.conductor = conductor
        self.data = tuple(rows)
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != self.ncols:
                raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[Entry]], conductor: Optional[int] = None):
        if conductor is None:
            conductor = 1
            for row in data:
                for e in row:
                    if isinstance(e, CycNum):
                        conductor = e.conductor
                        break
        return cls(conductor, data)

    @classmethod
    def zeros(cls, conductor: int, nrows: int, ncols: int):
        z = CycNum.from_rational(0, conductor)
        return cls(conductor, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, conductor: int, n: int):
        z = CycNum.from_rational(0, conductor)
        o = CycNum.from_rational(1, conductor)
        return cls(conductor, [[o if i == j else z for j in range(n)] for i in range(n)])

    # -- helpers ------------------------------------------------------------

    def at(self, i: int, j: int) -> CycNum:
        return self.data[i][j]

    def transpose(self) -> "CycMatrix":
        return CycMatrix(self.conductor, list(zip(*self.data)) if self.data else [])

    def embed(self, conductor: int) -> "CycMatrix":
        return CycMatrix(conductor, [[e.embed(conductor) for e in row] for row in self.data])

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return (self.conductor == other.conductor and self.data == other.data)

    def __hash__(self):
        return hash((self.conductor, self.data))

    def __add__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return CycMatrix(self.conductor, [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return CycMatrix(self.conductor, [[-e for e in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return CycMatrix(self.conductor, [[e * other for e in row] for row in self.data])
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        bt = other.transpose().data
        out = []
        zero = CycNum.from_rational(0, self.conductor)
        for row in self.data:
            out_row = []
            for col in bt:
                acc = zero
                for a, b in zip(row, col):
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return CycMatrix(self.conductor, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self * other
        return NotImplemented

    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.data for e in row)

    def __repr__(self):
        return f"CycMatrix({self.conductor}, {self.nrows}x{self.ncols})"

    # -- elimination --------------------------------------------------------

    def _rref(self):
        """Reduced row echelon form; returns (rows, pivot_columns).

        Pivot rule: scan columns left to right, take the first row with a
        nonzero entry.  Exact arithmetic keeps this deterministic.
        """
        rows = [list(r) for r in self.data]
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            sel = None
            for r in range(pr, len(rows)):
                if not rows[r][pc].is_zero:
                    sel = r
                    break
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            inv = rows[pr][pc].inv()
            rows[pr] = [e * inv for e in rows[pr]]
            for r in range(len(rows)):
                if r != pr and not rows[r][pc].is_zero:
                    f = rows[r][pc]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[pr])]
            pivots.append(pc)
            pr += 1
            if pr == len(rows):
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self._rref()[1])

    def kernel_basis(self) -> list:
        """Basis of the right null space, as ncols x 1 matrices (deterministic order)."""
        rows, pivots = self._rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        zero = CycNum.from_rational(0, self.conductor)
        one = CycNum.from_rational(1, self.conductor)
        basis = []
        for fc in free:
            vec = [zero] * self.ncols
            vec[fc] = one
            for r, pc in enumerate(pivots):
                vec[pc] = -rows[r][fc]
            basis.append(CycMatrix(self.conductor, [[v] for v in vec]))
        return basis

    def solve(self, rhs: "CycMatrix"):
        """Particular solution of self * x = rhs, or None if inconsistent."""
        if rhs.nrows != self.nrows:
            raise ValueError("shape mismatch")
        aug = CycMatrix(self.conductor, [
            list(r) + list(b) for r, b in zip(self.data, rhs.data)])
        rows, pivots = aug._rref()
        for r in range(len(rows)):
            if all(rows[r][c].is_zero for c in range(self.ncols)) and \
                    any(not rows[r][c].is_zero for c in range(self.ncols, aug.ncols)):
                return None
        zero = CycNum.from_rational(0, self.conductor)
        out = [[zero] * rhs.ncols for _ in range(self.ncols)]
        for r, pc in enumerate(pivots):
            if pc < self.ncols:
                for j in range(rhs.ncols):
                    out[pc][j] = rows[r][self.ncols + j]
        return CycMatrix(self.conductor, out)


def intertwiner_space(left: Sequence[CycMatrix], right: Sequence[CycMatrix]) -> list:
    """Basis of {X : A_i X = X B_i for all i}, X sized left-dim x right-dim."""
    if len(left) != len(right):
        raise ValueError("need matching generator lists")
    if not left:
        raise ValueError("empty generator list")
    n = left[0].nrows
    m = right[0].nrows
    conductor = left[0].conductor
    zero = CycNum.from_rational(0, conductor)
    rows = []
    for a, b in zip(left, right):
        if a.conductor != conductor or b.conductor != conductor:
            raise ValueError("all entries must share one conductor")
        for i in range(n):
            for j in range(m):
                row = [zero] * (n * m)
                for k in range(n):
                    if not a.data[i][k].is_zero:
                        row[k * m + j] = row[k * m + j] + a.data[i][k]
                for l in range(m):
                    if not b.data[l][j].is_zero:
                        row[i * m + l] = row[i * m + l] - b.data[l][j]
                rows.append(row)
    system = CycMatrix(conductor, rows)
    return [CycMatrix(conductor,
                      [[vec.data[k * m + l][0] for l in range(m)] for k in range(n)])
            for vec in system.kernel_basis()]


def mat_solve(matrix: Optional[CycMatrix], mode: str, rhs: Optional[CycMatrix] = None,
              left: Optional[Sequence[CycMatrix]] = None,
              right: Optional[Sequence[CycMatrix]] = None):
    """Single entry point for the exact linear-algebra queries."""
    if mode == "rank":
        return matrix.rank()
    if mode == "kernel-basis":
        return matrix.kernel_basis()
    if mode == "solve":
        sol = matrix.solve(rhs)
        return {"consistent": sol is not None, "solution": sol}
    if mode == "intertwiner-space":
        return intertwiner_space(left, right)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# finite-dimensional algebras
# ---------------------------------------------------------------------------

def _sc_entry(sc, i: int, j: int):
    """Structure constants accessor: sc may be nested lists or a dict
    (i, j) -> {k: CycNum}; returns a dict k -> CycNum for e_i * e_j."""
    if isinstance(sc, dict):
        val = sc.get((i, j), {})
    else:
        val = sc[i][j]
    if isinstance(val, dict):
        return val
    return {k: c for k, c in enumerate(val) if not (isinstance(c, CycNum) and c.is_zero) and c != 0}


def _vec_mul_basis(sc, vec: dict, j: int, conductor: int) -> dict:
    out: dict = {}
    for r, c in vec.items():
        for k, s in _sc_entry(sc, r, j).items():
            cur = out.get(k)
            term = c * s
            out[k] = term if cur is None else cur + term
    return {k: v for k, v in out.items() if not v.is_zero}


def algebra_radical(sc, dim: int, conductor: int = 1) -> int:
    """Radical dimension of an associative algebra given by structure constants.

    Uses the trace form t(x, y) = trace(L_x L_y); over characteristic zero its
    kernel is exactly the radical, so the answer is dim - rank(Gram).
    Associativity is spot-checked on a deterministic pseudo-random sample and
    violations raise ValueError.
    """
    if dim > 256:
        raise ValueError("structure constants of dimension > 256 rejected")
    rng = random.Random(0xA15EB * dim + conductor)
    n_checks = min(dim ** 3, 128)
    seen = set()
    for _ in range(n_checks):
        i, j, k = rng.randrange(dim), rng.randrange(dim), rng.randrange(dim)
        if (i, j, k) in seen:
            continue
        seen.add((i, j, k))
        ij = _sc_entry(sc, i, j)
        jk = _sc_entry(sc, j, k)
        lhs = _vec_mul_basis(sc, ij, k, conductor)
        rhs: dict = {}
        for r, c in jk.items():
            for s, coeff in _sc_entry(sc, i, r).items():
                cur = rhs.get(s)
                term = coeff * c
                rhs[s] = term if cur is None else cur + term
        rhs = {k2: v for k2, v in rhs.items() if not v.is_zero}
        if lhs != rhs:
            raise ValueError(f"structure constants not associative at triple {(i, j, k)}")
    # trace of left multiplication by each basis element
    zero = CycNum.from_rational(0, conductor)
    tau = [zero] * dim
    for r in range(dim):
        acc = zero
        for k in range(dim):
            c = _sc_entry(sc, r, k).get(k)
            if c is not None:
                acc = acc + c
        tau[r] = acc
    gram = []
    for i in range(dim):
        row = [zero] * dim
        for j in range(dim):
            acc = zero
            for r, c in _sc_entry(sc, i, j).items():
                if not tau[r].is_zero:
                    acc = acc + c * tau[r]
            row[j] = acc
        gram.append(row)
    gmat = CycMatrix(conductor, gram)
    return dim - gmat.rank()


def algebra_center_dim(sc, dim: int, conductor: int = 1) -> int:
    """Dimension of the center, by solving x e_j = e_j x for all j exactly."""
    zero = CycNum.from_rational(0, conductor)
    rows = []
    for j in range(dim):
        # coefficient of e_k in (e_i e_j - e_j e_i), unknowns indexed by i
        cols = [[zero] * dim for _ in range(dim)]
        for i in range(dim):
            for k, c in _sc_entry(sc, i, j).items():
                cols[k][i] = cols[k][i] + c
            for k, c in _sc_entry(sc, j, i).items():
                cols[k][i] = cols[k][i] - c
        rows.extend(cols)
    return len(CycMatrix(conductor, rows).kernel_basis())
