"""
Rational self-maps of affine n-space, the semigroups they generate, and
breadth-first orbit sampling.

Words are tuples of generator indices applied left to right: the word
``(i1, ..., ik)`` sends x to ``g_ik(...g_i1(x)...)``.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .exactla import QQ, Matrix, rank
from .poly import Poly, RatFunc, compose, default_names

Word = tuple


class Indeterminate(ZeroDivisionError):
    """A map was evaluated on its indeterminacy locus."""


class SelfMap:
    """Rational map A^n -> A^n given by n rational-function components."""

    __slots__ = ("components", "nvars", "field", "is_polynomial")

    def __init__(self, components: Sequence):
        comps = tuple(RatFunc.lift(c) for c in components)
        if not comps:
            raise ValueError("a self-map needs at least one component")
        n = comps[0].nvars
        if len(comps) != n or any(c.nvars != n for c in comps):
            raise ValueError("a self-map of A^n needs n components in n variables")
        if any(c.field != comps[0].field for c in comps):
            raise ValueError("components over different fields")
        self.components = comps
        self.nvars = n
        self.field = comps[0].field
        self.is_polynomial = all(c.is_polynomial() for c in comps)

    @classmethod
    def identity(cls, nvars: int, field=QQ) -> "SelfMap":
        return cls([RatFunc(Poly.var(i, nvars, field)) for i in range(nvars)])

    def __call__(self, pt):
        vals = []
        for c in self.components:
            d = c.den.eval(pt)
            if not d:
                raise Indeterminate("map undefined at point")
            vals.append(self.field.div(c.num.eval(pt), d))
        return tuple(vals)

    def then(self, g: "SelfMap") -> "SelfMap":
        """The composite x -> g(self(x))."""
        return SelfMap([compose(c, self.components) for c in g.components])

    def __eq__(self, other):
        if not isinstance(other, SelfMap):
            return NotImplemented
        return self.nvars == other.nvars and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def jacobian_rank(self, pt) -> int:
        jac = [[c.diff(j).eval(pt) for j in range(self.nvars)] for c in self.components]
        return rank(Matrix(jac, self.nvars, self.field))

    def to_strs(self, names=None) -> list[str]:
        return [c.to_str(names) for c in self.components]

    def __repr__(self):
        return f"SelfMap({', '.join(self.to_strs())})"


def dominance_lint(g: SelfMap, rng: random.Random | None = None, tries: int = 20) -> bool:
    """Probabilistic dominance check: full Jacobian rank at a random point.

    False means no random point of full rank was found; for a dominant map
    that happens only with negligible probability.
    """
    rng = rng or random.Random(0)
    for _ in range(tries):
        pt = tuple(g.field.random_element(rng) for _ in range(g.nvars))
        try:
            if g.jacobian_rank(pt) == g.nvars:
                return True
        except ZeroDivisionError:
            continue
    return False


class SemigroupSpec:
    """Finitely generated semigroup (or monoid) of self-maps."""

    def __init__(self, generators: Sequence[SelfMap], monoid: bool = False, names: Sequence[str] | None = None):
        gens = tuple(generators)
        if not gens:
            raise ValueError("at least one generator is required")
        n = gens[0].nvars
        if any(g.nvars != n or g.field != gens[0].field for g in gens):
            raise ValueError("generators must share variable count and field")
        self.generators = gens
        self.monoid = bool(monoid)
        self.nvars = n
        self.field = gens[0].field
        self.names = list(names) if names is not None else default_names(n)
        self._memo: dict[Word, SelfMap] = {}
        self._iterates: dict[int, tuple] = {}
        self._lock = threading.Lock()

    def check_word(self, w: Word) -> Word:
        w = tuple(w)
        if any(not 0 <= i < len(self.generators) for i in w):
            raise ValueError(f"word {list(w)} uses an unknown generator")
        if not w and not self.monoid:
            raise ValueError("the empty word is only allowed for a monoid")
        return w

    def word_map(self, w: Word) -> SelfMap:
        w = self.check_word(w)
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        if not w:
            result = SelfMap.identity(self.nvars, self.field)
        elif len(w) == 1:
            result = self.generators[w[0]]
        else:
            result = self.word_map(w[:-1]).then(self.generators[w[-1]])
        with self._lock:
            return self._memo.setdefault(w, result)

    def apply_word(self, w: Word, pt):
        """Evaluate the word one generator at a time; raises Indeterminate."""
        for i in w:
            pt = self.generators[i](pt)
        return pt

    def point(self, coords) -> tuple:
        if len(coords) != self.nvars:
            raise ValueError(f"point needs {self.nvars} coordinates")
        return tuple(self.field.convert(c) for c in coords)

    def words(self, max_len: int):
        """All words of length <= max_len in breadth-first order."""
        yield from ([()] if self.monoid else [])
        level = [()]
        for _ in range(max_len):
            level = [w + (i,) for w in level for i in range(len(self.generators))]
            yield from level


def word_map(spec: SemigroupSpec, w: Word) -> SelfMap:
    return spec.word_map(w)


# --- orbit sampling -------------------------------------------------------------


@dataclass
class OrbitSample:
    base: tuple
    entries: list = field(default_factory=list)  # (word, point)
    skipped: list = field(default_factory=list)  # words undefined at base
    capped: bool = False
    exhausted: bool = False  # no new points can appear at longer lengths

    @property
    def points(self) -> list:
        return [p for _, p in self.entries]


class OrbitExplorer:
    """Incremental breadth-first orbit sampler.

    Only words leading to a new point are extended: two words reaching the
    same point have the same continuations, so the point set is unchanged.
    """

    def __init__(self, spec: SemigroupSpec, base, cap: int = 10_000):
        self.spec = spec
        self.base = spec.point(base)
        self.cap = cap
        self.length = 0
        self.sample = OrbitSample(self.base)
        self._seen = set()
        self._frontier = [((), self.base)]
        if spec.monoid:
            self._add((), self.base)

    def _add(self, w, pt) -> bool:
        if pt in self._seen:
            return False
        self._seen.add(pt)
        self.sample.entries.append((w, pt))
        if len(self.sample.entries) >= self.cap:
            self.sample.capped = True
        return True

    def extend(self) -> bool:
        """Advance to words one letter longer. Returns True if points were added."""
        self.length += 1
        if self.sample.capped or self.sample.exhausted:
            return False
        nxt = []
        grew = False
        for w, pt in self._frontier:
            for i, g in enumerate(self.spec.generators):
                w2 = w + (i,)
                try:
                    img = g(pt)
                except ZeroDivisionError:
                    self.sample.skipped.append(w2)
                    continue
                if self._add(w2, img):
                    grew = True
                    nxt.append((w2, img))
                    if self.sample.capped:
                        return True
        self._frontier = nxt
        if not nxt:
            self.sample.exhausted = True
        return grew

    def snapshot(self) -> OrbitSample:
        s = self.sample
        return OrbitSample(s.base, list(s.entries), list(s.skipped), s.capped, s.exhausted)


def orbit_sample(spec: SemigroupSpec, base, max_len: int, cap: int = 10_000) -> OrbitSample:
    """Distinct points reached from ``base`` by words of length <= max_len."""
    ex = OrbitExplorer(spec, base, cap)
    for _ in range(max_len):
        if ex.sample.capped or ex.sample.exhausted:
            break
        ex.extend()
    return ex.snapshot()


def symbolic_iterates(spec: SemigroupSpec, max_len: int) -> list[tuple[Word, SelfMap]]:
    """Word maps for words of length <= max_len, deduplicated by map equality.

    Words whose map repeats an earlier one are not extended further.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    hit = spec._iterates.get(max_len)
    if hit is not None:
        return list(hit)
    found: list[tuple[Word, SelfMap]] = []

    def fresh(m):
        return all(not (m == other) for _, other in found)

    ident = SelfMap.identity(spec.nvars, spec.field)
    if spec.monoid:
        found.append(((), ident))
    frontier = [((), ident)]
    for _ in range(max_len):
        nxt = []
        for w, m in frontier:
            for i, g in enumerate(spec.generators):
                w2 = w + (i,)
                m2 = g if not w else m.then(g)
                if fresh(m2):
                    found.append((w2, m2))
                    nxt.append((w2, m2))
                    with spec._lock:
                        spec._memo.setdefault(w2, m2)
        frontier = nxt
    with spec._lock:
        spec._iterates.setdefault(max_len, tuple(found))
    return found
