"""
Degree-truncated vanishing ideals of finite point sets.

A truncated ideal I(S)[d] is the null space of the evaluation matrix of
monomials of degree <= d at the points of S. Its canonical form is the
reduced echelon basis taken with the HIGHEST monomial first, so every basis
polynomial is monic in its leading monomial and two truncated ideals are
equal exactly when their bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from . import kernels
from .dynsys import OrbitExplorer, OrbitSample, SemigroupSpec
from .exactla import QQ, Matrix, PrimeField, infer_field, nullspace, rref
from .poly import Poly, monomials_up_to


@dataclass(frozen=True)
class TruncatedIdeal:
    nvars: int
    d: int
    basis: tuple  # of Poly, ascending leading monomial
    field: object = QQ

    @property
    def hd(self) -> int:
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        return not self.basis

    def contains_point(self, pt) -> bool:
        return all(not f.eval(pt) for f in self.basis)

    def to_strs(self, names=None) -> list[str]:
        return [f.to_str(names) for f in self.basis]


@dataclass
class StableIdeal:
    ideal: TruncatedIdeal
    stabilized: bool
    used_len: int
    sample: OrbitSample

    @property
    def skipped(self) -> list:
        return self.sample.skipped

    @property
    def outside_domain(self) -> bool:
        return bool(self.sample.skipped)


def _field_of(points, field):
    if field is not None:
        return field
    return infer_field(v for p in points for v in p) if points else QQ


def eval_matrix(points: Sequence, nvars: int, d: int, field=None) -> Matrix:
    """Row per point, column per monomial of degree <= d (in monomial order)."""
    field = _field_of(points, field)
    monos = monomials_up_to(nvars, d)
    if any(len(p) != nvars for p in points):
        raise ValueError("point of wrong length")
    if not points:
        return Matrix([], len(monos), field)
    if isinstance(field, PrimeField) and field.p < kernels.MAX_KERNEL_PRIME:
        pts = np.array([[int(field.convert(v)) for v in p] for p in points], dtype=np.int64)
        arr = kernels.eval_monomials_modp(pts, np.array(monos, dtype=np.int64), field.p)
        return Matrix([[field.convert(int(v)) for v in r] for r in arr], len(monos), field)
    rows = []
    for p in points:
        p = [field.convert(v) for v in p]
        powers = []
        for v in p:
            pw = [field.one]
            for _ in range(d):
                pw.append(pw[-1] * v)
            powers.append(pw)
        row = []
        for m in monos:
            val = field.one
            for i, e in enumerate(m):
                if e:
                    val = val * powers[i][e]
            row.append(val)
        rows.append(row)
    return Matrix(rows, len(monos), field)


def canonical_basis(vectors: Sequence[Sequence], monos: Sequence, field) -> tuple:
    """Canonical polynomial basis of the span of coefficient ``vectors``.

    Reduced echelon form with columns ordered from the highest monomial down;
    returned in ascending order of leading monomial.
    """
    if not vectors:
        return ()
    l = len(monos)
    rev = Matrix([list(reversed(v)) for v in vectors], l, field)
    res = rref(rev)
    polys = []
    for i in range(res.rank):
        coeffs = list(reversed(res.echelon.rows[i]))
        polys.append(Poly.from_coeffs(coeffs, monos, field))
    return tuple(reversed(polys))


def truncated_ideal(points: Sequence, nvars: int, d: int, field=None) -> TruncatedIdeal:
    field = _field_of(points, field)
    monos = monomials_up_to(nvars, d)
    m = eval_matrix(points, nvars, d, field)
    if m.nrows == 0:
        basis = tuple(Poly.monomial(e, nvars, field) for e in monos)
    else:
        basis = canonical_basis(nullspace(m), monos, field)
    return TruncatedIdeal(nvars, d, basis, field)


def stabilized_ideal(spec: SemigroupSpec, base, d: int, window: int = 3, len_limit: int = 10,
                     cap: int = 10_000) -> StableIdeal:
    """Truncated ideal of the orbit sample at word lengths 1, 2, ... until it
    is unchanged for ``window`` consecutive lengths (or ``len_limit`` is hit)."""
    if window < 1:
        raise ValueError("window must be >= 1")
    ex = OrbitExplorer(spec, base, cap)
    current = prev = None
    unchanged = 0
    used = 0
    for length in range(1, len_limit + 1):
        grew = ex.extend()
        used = length
        if grew or current is None:
            current = truncated_ideal(ex.sample.points, spec.nvars, d, spec.field)
        if prev is not None and current == prev:
            unchanged += 1
        else:
            unchanged = 0
        prev = current
        if unchanged >= window:
            return StableIdeal(current, True, used, ex.snapshot())
    if current is None:
        current = truncated_ideal(ex.sample.points, spec.nvars, d, spec.field)
    return StableIdeal(current, False, used, ex.snapshot())


def hilbert_profile(points: Sequence, nvars: int, D: int, field=None) -> dict[int, int]:
    """hd(d) = dim I(S)[d] for 0 <= d <= D."""
    if D < 0:
        raise ValueError("D must be >= 0")
    field = _field_of(points, field)
    out = {}
    for d in range(D + 1):
        m = eval_matrix(points, nvars, d, field)
        out[d] = comb(nvars + d, d) - rref(m).rank
    return out


def span_ideal(polys: Sequence[Poly], nvars: int, d: int, field=QQ) -> TruncatedIdeal:
    """Canonical form of the span of ``polys`` inside the degree <= d part."""
    monos = monomials_up_to(nvars, d)
    for p in polys:
        if p.degree() > d:
            raise ValueError(f"{p} has degree above {d}")
    vecs = [[p.coeff(m) for m in monos] for p in polys if not p.is_zero()]
    return TruncatedIdeal(nvars, d, canonical_basis(vecs, monos, field), field)
