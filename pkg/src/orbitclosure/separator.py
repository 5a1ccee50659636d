"""
Orbit-closure separation at a fixed degree level.

The value attached to a point is the canonical basis of the truncated
vanishing ideal of its stabilised orbit sample; two points are "Equal at
level d" exactly when those bases coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .dynsys import SemigroupSpec
from .poly import Poly
from .vanish import StableIdeal, stabilized_ideal


class Outcome(str, Enum):
    EQUAL = "Equal"
    DISTINCT = "Distinct"
    OUTSIDE_DOMAIN = "OutsideDomain"
    UNSTABLE = "Unstable"


@dataclass
class SeparationVerdict:
    outcome: Outcome
    d: int
    witness: Poly | None = None
    witness_side: str | None = None  # "x" (vanishes on x's orbit) or "y"
    witness_point: tuple | None = None  # where the witness is nonzero
    detail: dict = field(default_factory=dict)


def phi_proxy(spec: SemigroupSpec, point, d: int, window: int = 3, len_limit: int = 10,
              cap: int = 10_000) -> StableIdeal:
    """Stabilised truncated orbit ideal; its ``ideal.basis`` is the proxy value."""
    return stabilized_ideal(spec, point, d, window, len_limit, cap)


def _find_witness(a: StableIdeal, b: StableIdeal):
    """A basis polynomial of ``a`` not vanishing at b's base, else at a point of b's sample."""
    for f in a.ideal.basis:
        if f.eval(b.sample.base):
            return f, b.sample.base
    for f in a.ideal.basis:
        for p in b.sample.points:
            if f.eval(p):
                return f, p
    return None, None


def separate(spec: SemigroupSpec, x, y, d: int, window: int = 3, len_limit: int = 10,
             cap: int = 10_000) -> SeparationVerdict:
    px = phi_proxy(spec, x, d, window, len_limit, cap)
    py = phi_proxy(spec, y, d, window, len_limit, cap)
    return compare_proxies(px, py, d)


def compare_proxies(px: StableIdeal, py: StableIdeal, d: int) -> SeparationVerdict:
    detail = {
        "stabilized": [px.stabilized, py.stabilized],
        "used_len": [px.used_len, py.used_len],
        "hd": [px.ideal.hd, py.ideal.hd],
        "skipped_words": [list(map(list, px.skipped)), list(map(list, py.skipped))],
    }
    if px.outside_domain or py.outside_domain:
        return SeparationVerdict(Outcome.OUTSIDE_DOMAIN, d, detail=detail)
    if not (px.stabilized and py.stabilized):
        return SeparationVerdict(Outcome.UNSTABLE, d, detail=detail)
    if px.ideal.basis == py.ideal.basis:
        return SeparationVerdict(Outcome.EQUAL, d, detail=detail)
    w, at = _find_witness(px, py)
    side = "x"
    if w is None:
        w, at = _find_witness(py, px)
        side = "y"
    if w is None:
        # bases differ yet each vanishes on the other's sample: the samples
        # do not determine the ideals at this level
        return SeparationVerdict(Outcome.UNSTABLE, d, detail={**detail, "reason": "no witness"})
    return SeparationVerdict(Outcome.DISTINCT, d, w, side, at, detail)


@dataclass
class PhiInvarianceReport:
    base: tuple
    proxy: StableIdeal
    images: list = field(default_factory=list)  # (generator index, image point, Outcome)
    violations: list = field(default_factory=list)
    undefined: list = field(default_factory=list)  # generator indices undefined at base

    @property
    def ok(self) -> bool:
        return not self.violations


def check_phi_invariance(spec: SemigroupSpec, point, d: int, window: int = 3, len_limit: int = 10,
                         cap: int = 10_000) -> PhiInvarianceReport:
    """The proxy of g(x) equals the proxy of x for every generator g defined at x."""
    base = spec.point(point)
    px = phi_proxy(spec, base, d, window, len_limit, cap)
    rep = PhiInvarianceReport(base, px)
    for i, g in enumerate(spec.generators):
        try:
            img = g(base)
        except ZeroDivisionError:
            rep.undefined.append(i)
            continue
        verdict = compare_proxies(px, phi_proxy(spec, img, d, window, len_limit, cap), d)
        rep.images.append((i, img, verdict.outcome))
        if verdict.outcome is not Outcome.EQUAL:
            rep.violations.append((i, img, verdict))
    return rep


@dataclass
class FiberProbe:
    probe: tuple
    equal: bool
    member: bool

    @property
    def ok(self) -> bool:
        return self.member or not self.equal


@dataclass
class FiberReport:
    base: tuple
    proxy: StableIdeal
    probes: list = field(default_factory=list)

    @property
    def violations(self) -> list:
        return [p for p in self.probes if not p.ok]

    @property
    def ok(self) -> bool:
        return not self.violations


def fiber_check(spec: SemigroupSpec, x, probes, d: int, window: int = 3, len_limit: int = 10,
                cap: int = 10_000) -> FiberReport:
    """Equal proxy implies membership in the truncated orbit-closure locus of x.

    Requires a monoid: then every point lies on its own orbit closure, so a
    probe with the same proxy as x is cut out by x's ideal.
    """
    if not spec.monoid:
        raise ValueError("fiber_check needs a monoid (the identity must be in the semigroup)")
    px = phi_proxy(spec, x, d, window, len_limit, cap)
    rep = FiberReport(px.sample.base, px)
    for p in probes:
        p = spec.point(p)
        pp = phi_proxy(spec, p, d, window, len_limit, cap)
        equal = pp.ideal.basis == px.ideal.basis
        member = px.ideal.contains_point(p)
        rep.probes.append(FiberProbe(p, equal, member))
    return rep
