"""
Polynomial invariants of the semigroup, verification of candidate rational
invariants, and dense-orbit evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dynsys import SemigroupSpec
from .exactla import Matrix, nullspace
from .generic import is_exceptional, generic_rank
from .poly import Poly, compose, monomials_up_to
from .vanish import canonical_basis, stabilized_ideal


@dataclass(frozen=True)
class InvariantBasis:
    d: int
    basis: tuple  # of Poly, canonical

    @property
    def dim(self) -> int:
        return len(self.basis)


def _constraint_columns(g, monos, d, field):
    """Column m holds P_m - D*M_m, with D = (prod of component denominators)**d
    and P_m = D * M_m(g)."""
    n = len(monos[0])
    nums = [c.num for c in g.components]
    dens = [c.den for c in g.components]
    one = Poly.one(n, field)
    npow, dpow = [], []
    for p in nums:
        t = [one]
        for _ in range(d):
            t.append(t[-1] * p)
        npow.append(t)
    for p in dens:
        t = [one]
        for _ in range(d):
            t.append(t[-1] * p)
        dpow.append(t)
    big_d = one
    for t in dpow:
        big_d = big_d * t[d]
    cols = []
    for e in monos:
        pm = one
        for i, k in enumerate(e):
            pm = pm * npow[i][k] * dpow[i][d - k]
        cols.append(pm - big_d * Poly.monomial(e, field=field))
    return cols


def poly_invariants(spec: SemigroupSpec, d: int) -> InvariantBasis:
    """All f of degree <= d with f o g = f for every generator g."""
    if d < 0:
        raise ValueError("d must be >= 0")
    field = spec.field
    monos = monomials_up_to(spec.nvars, d)
    rows = []
    for g in spec.generators:
        cols = _constraint_columns(g, monos, d, field)
        support = sorted({e for c in cols for e in c.terms})
        for s in support:
            rows.append([c.coeff(s) for c in cols])
    m = Matrix(rows, len(monos), field)
    if m.nrows == 0:
        basis = canonical_basis([[field.one if i == j else field.zero for j in range(len(monos))]
                                 for i in range(len(monos))], monos, field)
    else:
        basis = canonical_basis(nullspace(m), monos, field)
    return InvariantBasis(d, basis)


def verify_rational_invariant(spec: SemigroupSpec, p: Poly, q: Poly):
    """True iff p/q is fixed by every generator, tested as p(g)*q - q(g)*p == 0.

    Returns ``(ok, residues)`` where residues lists ``(generator index,
    RatFunc)`` for every generator that fails.
    """
    if q.is_zero():
        raise ValueError("q must be nonzero")
    residues = []
    for i, g in enumerate(spec.generators):
        res = compose(p, g.components) * q - compose(q, g.components) * p
        if not res.is_zero():
            residues.append((i, res.reduced()))
    return not residues, residues


@dataclass
class DensityReport:
    point: tuple
    d_orbit: int
    d_inv: int
    orbit_ideal_zero: bool
    invariants_trivial: bool
    exceptional_flag: bool
    verdict: str  # "evidence-for-dense" | "inconclusive"
    detail: dict = field(default_factory=dict)


def density_evidence(spec: SemigroupSpec, point, d_orbit: int, d_inv: int, window: int = 3,
                     len_limit: int = 10, max_len: int = 4, mode: str = "specialized",
                     rng: random.Random | None = None) -> DensityReport:
    """Evidence (not proof) that the orbit of ``point`` is dense."""
    pt = spec.point(point)
    st = stabilized_ideal(spec, pt, d_orbit, window, len_limit)
    inv = poly_invariants(spec, d_inv)
    cert = generic_rank(spec, d_orbit, max_len, mode, rng)
    exc = is_exceptional(spec, pt, d_orbit, max_len, cert)
    orbit_zero = st.ideal.hd == 0 and st.stabilized
    trivial = inv.dim == 1
    flagged = exc.exceptional is not False
    verdict = "evidence-for-dense" if orbit_zero and trivial and not flagged else "inconclusive"
    detail = {
        "orbit_hd": st.ideal.hd,
        "stabilized": st.stabilized,
        "used_len": st.used_len,
        "skipped_words": [list(w) for w in st.skipped],
        "invariant_dim": inv.dim,
        "generic_r": cert.r,
        "rank_at_point": exc.rank_at_point,
        "outside_domain": exc.outside_domain,
    }
    return DensityReport(pt, d_orbit, d_inv, orbit_zero, trivial, flagged, verdict, detail)
