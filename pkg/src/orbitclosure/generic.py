"""
The generic side: the matrix of monomials evaluated along the word maps,
with entries in the function field k(X), its rank r, and the exceptional
locus where a specialisation drops below r.

Rows are cleared of denominators before elimination: a row built from a map
with components n_i/b_i is multiplied by prod b_i**d, turning every entry
M(n/b) into the polynomial prod n_i**e_i * b_i**(d - e_i). Row scaling by a
nonzero function changes neither the rank over k(X) nor which minors vanish
on the domain of the map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .dynsys import Indeterminate, SemigroupSpec, symbolic_iterates
from .exactla import fraction_free_eliminate, ring_det, rref
from .poly import Poly, compose, monomials_up_to


class SpecializationError(RuntimeError):
    """No random point avoiding every denominator was found; retry or use exact mode."""


@dataclass
class GenericMatrix:
    d: int
    max_len: int
    words: list
    monos: list
    entries: list  # rows of RatFunc


@dataclass
class GenericRankCert:
    d: int
    max_len: int
    r: int
    hd: int
    pivot_words: list
    pivot_cols: list
    method: str  # "exact" | "specialized"
    stable: bool  # r unchanged at max_len + 1
    nrows: int
    escalated: bool = False
    points: list = field(default_factory=list)


@dataclass
class ExceptionalIdealGens:
    d: int
    r: int
    gens: tuple
    minors_examined: int
    minors_total: int

    @property
    def complete(self) -> bool:
        return self.minors_examined >= self.minors_total

    def vanish_at(self, pt) -> bool:
        return all(not g.eval(pt) for g in self.gens)


@dataclass
class ExceptionalVerdict:
    exceptional: bool | None  # None when the point is outside the domain
    rank_at_point: int | None
    r: int
    outside_domain: bool = False
    skipped_words: list = field(default_factory=list)


def generic_matrix(spec: SemigroupSpec, d: int, max_len: int) -> GenericMatrix:
    monos = monomials_up_to(spec.nvars, d)
    its = symbolic_iterates(spec, max_len)
    entries = []
    for _, m in its:
        comps = m.components
        entries.append([compose(Poly.monomial(e, field=spec.field), comps) for e in monos])
    return GenericMatrix(d, max_len, [w for w, _ in its], monos, entries)


def cleared_rows(spec: SemigroupSpec, d: int, max_len: int):
    """Denominator-free polynomial rows of the generic matrix and their words."""
    monos = monomials_up_to(spec.nvars, d)
    words, rows = [], []
    for w, m in symbolic_iterates(spec, max_len):
        nums = [c.num for c in m.components]
        dens = [c.den for c in m.components]
        npow = [_powers(p, d) for p in nums]
        dpow = None if m.is_polynomial else [_powers(p, d) for p in dens]
        row = []
        for e in monos:
            v = Poly.one(spec.nvars, spec.field)
            for i, k in enumerate(e):
                if k:
                    v = v * npow[i][k]
                if dpow is not None and d - k:
                    v = v * dpow[i][d - k]
            row.append(v)
        words.append(w)
        rows.append(row)
    return words, monos, rows


def _powers(p: Poly, top: int):
    out = [Poly.one(p.nvars, p.field)]
    for _ in range(top):
        out.append(out[-1] * p)
    return out


def _poly_divexact(a: Poly, b: Poly) -> Poly:
    return a.divexact(b)


def _exact_rank(spec, d, max_len):
    words, monos, rows = cleared_rows(spec, d, max_len)
    if not rows:
        return 0, [], [], words, len(monos)
    work = [list(r) for r in rows]
    _, piv, perm, _ = fraction_free_eliminate(work, _poly_divexact, jordan=False)
    r = len(piv)
    prow = sorted(perm[:r])
    return r, prow, list(piv), words, len(monos)


def _random_point(spec: SemigroupSpec, words, rng: random.Random, tries: int):
    for _ in range(tries):
        pt = tuple(spec.field.random_element(rng) for _ in range(spec.nvars))
        try:
            images = [spec.apply_word(w, pt) for w in words]
        except ZeroDivisionError:
            continue
        return pt, images
    raise SpecializationError(
        f"no random point off the denominators after {tries} tries; rerun with mode='exact'")


def _specialized_rank(spec, d, words, images):
    from .vanish import eval_matrix

    m = eval_matrix(images, spec.nvars, d, spec.field)
    res = rref(m)
    prow = rref(m.transpose()).pivot_cols
    return res.rank, prow, res.pivot_cols


def generic_rank(spec: SemigroupSpec, d: int, max_len: int, mode: str = "specialized",
                 rng: random.Random | None = None, retries: int = 3,
                 point_tries: int = 200) -> GenericRankCert:
    """Rank r of the generic matrix for words of length <= max_len.

    ``specialized`` evaluates at two independent random points and accepts r
    when both agree, retrying on disagreement and escalating to ``exact``
    (fraction-free elimination over the polynomial ring) after ``retries``.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if mode not in ("exact", "specialized"):
        raise ValueError(f"unknown mode {mode!r}")
    l = comb(spec.nvars + d, d)
    rng = rng or random.Random(0)
    if mode == "exact":
        r, prow, pcol, words, _ = _exact_rank(spec, d, max_len)
        r2 = _exact_rank(spec, d, max_len + 1)[0]
        return GenericRankCert(d, max_len, r, l - r, [words[i] for i in prow], pcol, "exact",
                               r2 == r, len(words))
    words = [w for w, _ in symbolic_iterates(spec, max_len + 1)]
    short = [w for w in words if len(w) <= max_len]
    for _ in range(retries):
        p1, im1 = _random_point(spec, words, rng, point_tries)
        p2, im2 = _random_point(spec, words, rng, point_tries)
        ns = len(short)
        r1, prow, pcol = _specialized_rank(spec, d, short, im1[:ns])
        r2 = _specialized_rank(spec, d, short, im2[:ns])[0]
        if r1 == r2:
            long1 = _specialized_rank(spec, d, words, im1)[0]
            long2 = _specialized_rank(spec, d, words, im2)[0]
            stable = max(long1, long2) == r1
            return GenericRankCert(d, max_len, r1, l - r1, [short[i] for i in prow], pcol,
                                   "specialized", stable, ns, points=[p1, p2])
    cert = generic_rank(spec, d, max_len, "exact")
    cert.escalated = True
    return cert


def _minor_order(nrows, ncols, r, prow, pcol):
    seen = set()
    first = (tuple(prow), tuple(pcol))
    if len(prow) == r and len(pcol) == r:
        seen.add(first)
        yield first
    for cols in combinations(range(ncols), r):
        key = (tuple(prow), cols)
        if len(prow) == r and key not in seen:
            seen.add(key)
            yield key
    for rows in combinations(range(nrows), r):
        key = (rows, tuple(pcol))
        if len(pcol) == r and key not in seen:
            seen.add(key)
            yield key
    for rows in combinations(range(nrows), r):
        for cols in combinations(range(ncols), r):
            if (rows, cols) not in seen:
                yield rows, cols


def exceptional_generators(spec: SemigroupSpec, d: int, max_len: int, cert: GenericRankCert,
                           minor_budget: int = 200) -> ExceptionalIdealGens:
    """Numerators of r x r minors of the cleared generic matrix.

    Minors sharing the certificate's pivot rows or columns come first. With a
    budget smaller than the number of minors, the common zero set of the
    generators may be strictly larger than the exceptional locus.
    """
    if minor_budget < 1:
        raise ValueError("minor_budget must be >= 1")
    if cert.d != d:
        raise ValueError("certificate was computed for a different degree")
    words, monos, rows = cleared_rows(spec, d, max_len)
    r = cert.r
    total = comb(len(rows), r) * comb(len(monos), r)
    index = {w: i for i, w in enumerate(words)}
    prow = [index[w] for w in cert.pivot_words if w in index]
    gens: list[Poly] = []
    seen = set()
    examined = 0
    one = Poly.one(spec.nvars, spec.field)
    zero = Poly.zero(spec.nvars, spec.field)
    for rsel, csel in _minor_order(len(rows), len(monos), r, prow, cert.pivot_cols):
        if examined >= minor_budget:
            break
        examined += 1
        sub = [[rows[i][j] for j in csel] for i in rsel]
        det = ring_det(sub, _poly_divexact, one, zero)
        if det:
            g = det.normalized()
            if g not in seen:
                seen.add(g)
                gens.append(g)
    return ExceptionalIdealGens(d, r, tuple(gens), examined, total)


def point_rank(spec: SemigroupSpec, point, d: int, max_len: int):
    """Rank of the generic matrix specialised at ``point``; None with the
    offending words when some sampled word is undefined there."""
    from .vanish import eval_matrix

    pt = spec.point(point)
    words = [w for w, _ in symbolic_iterates(spec, max_len)]
    images, skipped = [], []
    for w in words:
        try:
            images.append(spec.apply_word(w, pt))
        except ZeroDivisionError:
            skipped.append(w)
    if skipped:
        return None, skipped
    return rref(eval_matrix(images, spec.nvars, d, spec.field)).rank, []


def is_exceptional(spec: SemigroupSpec, point, d: int, max_len: int,
                   cert: GenericRankCert | None = None) -> ExceptionalVerdict:
    if cert is None:
        cert = generic_rank(spec, d, max_len)
    rk, skipped = point_rank(spec, point, d, max_len)
    if rk is None:
        return ExceptionalVerdict(None, None, cert.r, True, skipped)
    return ExceptionalVerdict(rk < cert.r, rk, cert.r)


@dataclass
class ForwardInvarianceReport:
    checked: int = 0
    not_on_locus: list = field(default_factory=list)
    not_exceptional: list = field(default_factory=list)
    violations: list = field(default_factory=list)  # (point, generator index, image)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_forward_invariance(spec: SemigroupSpec, gens: ExceptionalIdealGens, sample, max_len: int,
                             cert: GenericRankCert | None = None) -> ForwardInvarianceReport:
    """Images of exceptional points under each generator are exceptional again.

    Points off the generators' zero set, or on it but of full rank (possible
    when the minor budget truncated the generator list), are listed and not
    checked. A violation points at truncation of rows or minors.
    """
    d = gens.d
    if cert is None:
        cert = generic_rank(spec, d, max_len)
    rep = ForwardInvarianceReport()
    for p in sample:
        p = spec.point(p)
        try:
            on = gens.vanish_at(p)
        except ZeroDivisionError:
            on = False
        if not on:
            rep.not_on_locus.append(p)
            continue
        v = is_exceptional(spec, p, d, max_len, cert)
        if not v.exceptional:
            rep.not_exceptional.append(p)
            continue
        for i, g in enumerate(spec.generators):
            try:
                img = g(p)
            except Indeterminate:
                continue
            rep.checked += 1
            vi = is_exceptional(spec, img, d, max_len, cert)
            if vi.exceptional is False:
                rep.violations.append((p, i, img))
    return rep
