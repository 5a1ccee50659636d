"""
Exact dense linear algebra over Q or a prime field GF(p).

Rationals are Python ints / ``fractions.Fraction`` (ints stand in for
integral rationals). Prime-field elements are :class:`FpElem`. Elimination
over Q is fraction-free (Bareiss, Gauss-Jordan variant) on row-scaled
integer copies, with a final division pass; elimination over GF(p) is
delegated to the int64 kernels in :mod:`orbitclosure.kernels`.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels


class FieldMismatchError(ValueError):
    """Entries from incompatible coefficient fields were combined."""


# --- fields -------------------------------------------------------------------


def is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


def random_prime(rng: random.Random, lo: int = 2**20, hi: int = 2**31 - 1) -> int:
    from sympy import nextprime

    p = nextprime(rng.randrange(lo, hi - 1000))
    return int(p) if p < hi else int(nextprime(lo))


class FpElem:
    """Residue class modulo a prime ``p``; always stored reduced."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if type(other) is FpElem:
            if other.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            den = other.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator {other.denominator} vanishes mod {self.p}")
            return other.numerator * pow(den, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else FpElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return FpElem(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return FpElem(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return FpElem(pow(self.v, -1, self.p), self.p) ** (-e)
        return FpElem(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if type(other) is FpElem:
            return other.p == self.p and other.v == self.v
        if isinstance(other, int):
            return other % self.p == self.v
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElem({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class RationalField:
    """The field Q. Elements are ints or reduced Fractions."""

    name = "QQ"
    characteristic = 0

    def convert(self, x):
        if type(x) is int:
            return x
        if isinstance(x, FpElem):
            raise FieldMismatchError("cannot view a GF(p) element as rational")
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):  # bool and friends
            return int(x)
        if isinstance(x, str):
            return self.convert(Fraction(x))
        raise TypeError(f"cannot convert {x!r} to QQ")

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        if type(a) is int and type(b) is int:
            q = Fraction(a, b)
        else:
            q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q

    def random_element(self, rng: random.Random, bound: int = 1000):
        return self.convert(Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """GF(p) for a prime p."""

    characteristic: int

    def __init__(self, p: int, check: bool = True):
        if check and not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = self.characteristic = p
        self.name = f"Fp {p}"

    def convert(self, x):
        if isinstance(x, FpElem):
            if x.p != self.p:
                raise FieldMismatchError(f"GF({x.p}) element used in GF({self.p})")
            return x
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {self.p}")
            return FpElem(x.numerator * pow(x.denominator, -1, self.p), self.p)
        if isinstance(x, int):
            return FpElem(int(x), self.p)
        raise TypeError(f"cannot convert {x!r} to GF({self.p})")

    def div(self, a, b):
        return self.convert(a) / b

    def random_element(self, rng: random.Random, bound: int = 1000):
        return FpElem(rng.randrange(self.p), self.p)

    @property
    def zero(self):
        return FpElem(0, self.p)

    @property
    def one(self):
        return FpElem(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def infer_field(values) -> RationalField | PrimeField:
    """Common field of a collection of scalars; ints are neutral."""
    field = None
    has_fraction = False
    for v in values:
        if isinstance(v, FpElem):
            if field is None:
                field = PrimeField(v.p, check=False)
            elif field.p != v.p:
                raise FieldMismatchError(f"mixed moduli {field.p} and {v.p}")
        elif isinstance(v, Fraction):
            has_fraction = True
        elif not isinstance(v, int):
            raise TypeError(f"not a field element: {v!r}")
    if field is not None and has_fraction:
        raise FieldMismatchError("rational and prime-field entries in one matrix")
    return field if field is not None else QQ


# --- matrices -----------------------------------------------------------------


class Matrix:
    """Immutable dense matrix over a single exact field."""

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None, field=None):
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if field is None:
            field = infer_field(v for r in rows for v in r)
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = tuple(tuple(field.convert(v) for v in r) for r in rows)

    @classmethod
    def from_flat(cls, nrows: int, ncols: int, entries: Sequence, field=None) -> "Matrix":
        if len(entries) != nrows * ncols:
            raise ValueError("entries length must equal rows * cols")
        return cls([entries[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols, field)

    @classmethod
    def zeros(cls, nrows, ncols, field=QQ):
        return cls([[field.zero] * ncols for _ in range(nrows)], ncols, field)

    @classmethod
    def identity(cls, n, field=QQ):
        return cls([[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n, field)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        if self.nrows == 0:
            return Matrix([()] * self.ncols, 0, self.field)
        return Matrix(list(zip(*self.rows)), self.nrows, self.field)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx], len(col_idx), self.field)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({self.tolist()!r}, field={self.field!r})"


class RREF(NamedTuple):
    rank: int
    echelon: Matrix
    pivot_cols: list


# --- fraction-free elimination (shared by Z and Q[x]) -------------------------


def _int_div(a, b):
    return a // b


def fraction_free_eliminate(rows, divexact=_int_div, jordan=True):
    """Bareiss elimination over an integral domain.

    ``rows`` is consumed as a list of mutable lists; ring elements need
    ``*``, ``-`` and truthiness, ``divexact(a, b)`` must divide exactly.
    With ``jordan`` every pivot column is cleared above its pivot as well,
    and all pivot entries end up equal to the last pivot.

    Returns ``(rows, pivot_cols, perm, sign)``: the eliminated rows, the pivot
    columns, the original index of each output row and the permutation sign.
    """
    a = rows
    m = len(a)
    n = len(a[0]) if m else 0
    perm = list(range(m))
    pivots = []
    sign = 1
    prev = None
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            perm[r], perm[p] = perm[p], perm[r]
            sign = -sign
        prow = a[r]
        piv = prow[c]
        targets = range(m) if jordan else range(r + 1, m)
        lo = 0 if jordan else c
        for i in targets:
            if i == r:
                continue
            row = a[i]
            f = row[c]
            for j in range(lo, n):
                if f:
                    v = piv * row[j] - f * prow[j]
                elif row[j]:
                    v = piv * row[j]
                else:
                    continue
                row[j] = divexact(v, prev) if prev is not None else v
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots, perm, sign


def _integer_rows(rows):
    """Scale each rational row by the lcm of its denominators."""
    out = []
    for r in rows:
        den = 1
        for v in r:
            if type(v) is not int:
                den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([v * den if type(v) is int else int(v * den) for v in r])
    return out


def _check_field(m: Matrix):
    if not isinstance(m, Matrix):
        raise TypeError("expected a Matrix")
    return m.field


def rref(m: Matrix) -> RREF:
    """Unique reduced row echelon form; keeps all m.nrows rows (zeros last)."""
    field = _check_field(m)
    if m.nrows == 0 or m.ncols == 0:
        return RREF(0, m, [])
    if isinstance(field, PrimeField) and field.p < kernels.MAX_KERNEL_PRIME:
        arr = np.array([[x.v for x in r] for r in m.rows], dtype=np.int64)
        rank, ech, piv = kernels.rref_modp(arr, field.p)
        rows = [[FpElem(int(v), field.p) for v in r] for r in ech]
        return RREF(rank, Matrix(rows, m.ncols, field), piv)
    if isinstance(field, PrimeField):
        return _rref_generic_field(m)
    a, piv, _, _ = fraction_free_eliminate(_integer_rows(m.rows))
    out = []
    for i, row in enumerate(a):
        if i < len(piv):
            d = row[piv[i]]
            out.append([Fraction(v, d) for v in row])
        else:
            out.append([0] * m.ncols)
    return RREF(len(piv), Matrix(out, m.ncols, QQ), piv)


def _rref_generic_field(m: Matrix) -> RREF:
    # plain Gauss-Jordan, used only for primes too large for the int64 kernels
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    piv = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = m.field.one / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return RREF(r, Matrix(a, nc, m.field), piv)


def rank(m: Matrix) -> int:
    return rref(m).rank


def nullspace(m: Matrix) -> list[tuple]:
    """Basis of {v : m v = 0}, one vector per non-pivot column.

    Restricted to the non-pivot columns the basis is the identity, so it is
    in reduced echelon form when read against those columns.
    """
    res = rref(m)
    field = m.field
    pivset = set(res.pivot_cols)
    free = [c for c in range(m.ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [field.zero] * m.ncols
        v[f] = field.one
        for i, pc in enumerate(res.pivot_cols):
            v[pc] = -res.echelon.rows[i][f]
        basis.append(tuple(field.convert(x) for x in v))
    return basis


def minor_det(m: Matrix, row_idx: Sequence[int], col_idx: Sequence[int]):
    """Determinant of the selected square submatrix, computed fraction-free."""
    if len(row_idx) != len(col_idx):
        raise ValueError("minor selection must be square")
    for idx, bound in ((row_idx, m.nrows), (col_idx, m.ncols)):
        if any(not 0 <= i < bound for i in idx):
            raise IndexError("minor index out of range")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("minor indices must be strictly increasing")
    field = m.field
    k = len(row_idx)
    if k == 0:
        return field.one
    sub = [[m.rows[i][j] for j in col_idx] for i in row_idx]
    if isinstance(field, PrimeField):
        arr = [list(r) for r in sub]
        det = field.one
        for c in range(k):
            p = next((i for i in range(c, k) if arr[i][c]), None)
            if p is None:
                return field.zero
            if p != c:
                arr[c], arr[p] = arr[p], arr[c]
                det = -det
            det = det * arr[c][c]
            inv = field.one / arr[c][c]
            for i in range(c + 1, k):
                f = arr[i][c] * inv
                if f:
                    arr[i] = [x - f * y for x, y in zip(arr[i], arr[c])]
        return det
    scale = 1
    ints = []
    for r in sub:
        den = 1
        for v in r:
            if type(v) is not int:
                den = den * v.denominator // math.gcd(den, v.denominator)
        scale *= den
        ints.append([int(v * den) for v in r])
    return QQ.convert(Fraction(int_det(ints), scale))


def ring_det(rows, divexact=_int_div, one=1, zero=0):
    """Bareiss determinant of a square matrix over an integral domain."""
    k = len(rows)
    if k == 0:
        return one
    a, piv, _, sign = fraction_free_eliminate([list(r) for r in rows], divexact, jordan=False)
    if len(piv) < k:
        return zero
    return a[k - 1][k - 1] if sign > 0 else -a[k - 1][k - 1]


def int_det(rows) -> int:
    return ring_det(rows)


# --- modular cross-check --------------------------------------------------------


def reduce_mod(m: Matrix, p: int) -> np.ndarray:
    """Map a rational matrix to GF(p); raises ZeroDivisionError on a bad prime."""
    out = np.zeros((m.nrows, m.ncols), dtype=np.int64)
    for i, r in enumerate(m.rows):
        for j, v in enumerate(r):
            if type(v) is int:
                out[i, j] = v % p
            else:
                d = v.denominator % p
                if d == 0:
                    raise ZeroDivisionError(p)
                out[i, j] = v.numerator * pow(d, -1, p) % p
    return out


def rank_mod_prime(m: Matrix, p: int) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return kernels.rref_modp(reduce_mod(m, p), p)[0]


def checked_modular_rank(m: Matrix, rng: random.Random, attempts: int = 8):
    """Rank over Q cross-checked against a random prime >= 2**20.

    A prime that divides a denominator, or whose rank disagrees with the
    exact rank, is discarded and another one drawn. Returns
    ``(rank, prime, discarded_primes)``.
    """
    exact = rank(m)
    bad = []
    for _ in range(attempts):
        p = random_prime(rng)
        try:
            r = rank_mod_prime(m, p)
        except ZeroDivisionError:
            bad.append(p)
            continue
        if r == exact:
            return exact, p, bad
        bad.append(p)
    raise ArithmeticError(f"no agreeing prime after {attempts} attempts (discarded {bad})")
