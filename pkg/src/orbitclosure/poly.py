"""
Sparse multivariate polynomials and rational functions over QQ or GF(p).

Monomials are dense exponent tuples. The module-wide monomial order is
graded, with ties broken so that earlier variables come first:
``1 < x < y < x^2 < x*y < y^2 < ...`` for variables (x, y). Column order of
every evaluation matrix follows :func:`monomials_up_to`.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .exactla import QQ, FpElem, PrimeField, RationalField

Exps = tuple


def mono_key(e: Exps):
    return (sum(e), tuple(-x for x in e))


def _monomials_of_degree(nvars: int, deg: int):
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, deg - first):
            yield (first,) + rest


def monomials_up_to(nvars: int, d: int) -> list[Exps]:
    """All exponent vectors of total degree <= d, increasing in the monomial order."""
    if d < 0:
        raise ValueError("degree must be >= 0")
    out = []
    for deg in range(d + 1):
        out.extend(_monomials_of_degree(nvars, deg))
    assert len(out) == comb(nvars + d, d)
    return out


def _clean(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def default_names(nvars: int) -> list[str]:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"t{i + 1}" for i in range(nvars)]


class Poly:
    """Polynomial in ``nvars`` variables; ``terms`` maps exponents to nonzero coefficients."""

    __slots__ = ("nvars", "terms", "field")

    def __init__(self, nvars: int, terms=None, field=QQ):
        self.nvars = nvars
        self.field = field
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"monomial {e} has wrong length for {nvars} variables")
                if any(x < 0 for x in e):
                    raise ValueError("negative exponent")
                c = field.convert(c)
                if e in clean:
                    c = _clean(clean[e] + c)
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms, field):
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p.field = field
        return p

    # constructors
    @classmethod
    def zero(cls, nvars, field=QQ):
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, c, nvars, field=QQ):
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def one(cls, nvars, field=QQ):
        return cls.constant(1, nvars, field)

    @classmethod
    def var(cls, i, nvars, field=QQ):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, field)

    @classmethod
    def monomial(cls, exps, nvars=None, field=QQ, coeff=1):
        return cls(len(exps) if nvars is None else nvars, {tuple(exps): coeff}, field)

    @classmethod
    def from_terms(cls, nvars, term_list: Iterable, field=QQ):
        return cls(nvars, list(term_list), field)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, monos: Sequence[Exps], field=QQ):
        nvars = len(monos[0]) if monos else 0
        return cls(nvars, {m: c for m, c in zip(monos, coeffs) if c}, field)

    # basic queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def var_degrees(self) -> list[int]:
        out = [0] * self.nvars
        for e in self.terms:
            for i, x in enumerate(e):
                if x > out[i]:
                    out[i] = x
        return out

    def leading_monomial(self) -> Exps:
        return max(self.terms, key=mono_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()] if self.terms else self.field.zero

    def coeff(self, e: Exps):
        return self.terms.get(tuple(e), self.field.zero)

    def coeff_vector(self, monos: Sequence[Exps]) -> list:
        extra = set(self.terms) - set(monos)
        if extra:
            raise ValueError(f"monomials {sorted(extra)} outside the given support")
        return [self.terms.get(m, self.field.zero) for m in monos]

    # arithmetic
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction, FpElem)):
            return Poly.constant(other, self.nvars, self.field)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = _clean(t[e] + c) if e in t else c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.nvars, t, self.field)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c):
        c = self.field.convert(c)
        if not c:
            return Poly.zero(self.nvars, self.field)
        return Poly._raw(self.nvars, {e: _clean(v * c) for e, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FpElem)):
            return self.scale(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return Poly.zero(self.nvars, self.field)
        if len(o.terms) == 1:
            (e2, c2), = o.terms.items()
            return Poly._raw(self.nvars,
                             {tuple(a + b for a, b in zip(e, e2)): _clean(c * c2) for e, c in self.terms.items()},
                             self.field)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if e in t:
                    t[e] = t[e] + c1 * c2
                else:
                    t[e] = c1 * c2
        return Poly._raw(self.nvars, {e: _clean(c) for e, c in t.items() if c}, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FpElem)):
            return self == Poly.constant(other, self.nvars, self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def divexact(self, other: "Poly") -> "Poly":
        """Quotient self / other, which must be exact."""
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            t = {}
            for e, c in self.terms.items():
                q = tuple(a - b for a, b in zip(e, e2))
                if any(x < 0 for x in q):
                    raise ArithmeticError("inexact polynomial division")
                t[q] = _clean(self.field.div(c, c2))
            return Poly._raw(self.nvars, t, self.field)
        lm = other.leading_monomial()
        lc = other.terms[lm]
        rem = dict(self.terms)
        quot = {}
        div = self.field.div
        while rem:
            e = max(rem, key=mono_key)
            q = tuple(a - b for a, b in zip(e, lm))
            if any(x < 0 for x in q):
                raise ArithmeticError("inexact polynomial division")
            c = _clean(div(rem[e], lc))
            quot[q] = c
            for e2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(q, e2))
                v = rem.get(m, 0) - c * c2
                v = _clean(v)
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return Poly._raw(self.nvars, quot, self.field)

    def normalized(self) -> "Poly":
        """Canonical associate: primitive integer coefficients with positive
        leading coefficient over QQ, monic over GF(p)."""
        if not self.terms:
            return self
        if isinstance(self.field, PrimeField):
            return self.scale(self.field.one / self.leading_coeff())
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            if type(c) is not int:
                den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
        if ints[self.leading_monomial()] < 0:
            g = -g
        return Poly._raw(self.nvars, {e: c // g for e, c in ints.items()}, self.field)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.field.div(self.field.one, self.leading_coeff()))

    def monomial_content(self) -> Exps:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.nvars
        it = iter(self.terms)
        g = list(next(it))
        for e in it:
            g = [min(a, b) for a, b in zip(g, e)]
        return tuple(g)

    def diff(self, i: int) -> "Poly":
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = _clean(c * e[i])
        return Poly(self.nvars, t, self.field)

    def eval(self, pt: Sequence):
        """Exact value at ``pt``."""
        if len(pt) != self.nvars:
            raise ValueError("point has wrong length")
        field = self.field
        pt = [field.convert(v) for v in pt]
        degs = self.var_degrees()
        powers = []
        for v, dmax in zip(pt, degs):
            pw = [field.one]
            for _ in range(dmax):
                pw.append(pw[-1] * v)
            powers.append(pw)
        total = field.zero
        for e, c in self.terms.items():
            term = c
            for i, x in enumerate(e):
                if x:
                    term = term * powers[i][x]
            total = total + term
        return field.convert(total) if not isinstance(total, FpElem) else total

    __call__ = eval

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
            neg = False
            if isinstance(self.field, RationalField) and c < 0:
                neg, c = True, -c
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, nvars={self.nvars}, field={self.field!r})"


# --- rational functions --------------------------------------------------------


class RatFunc:
    """Fraction num/den of polynomials; den is made monic, no gcd cancellation."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.nvars, num.field)
        if not den.terms:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.nvars != den.nvars:
            raise ValueError("variable count mismatch")
        lc = den.leading_coeff()
        if lc != 1:
            inv = num.field.div(num.field.one, lc)
            num, den = num.scale(inv), den.scale(inv)
        if not num.terms:
            den = Poly.one(num.nvars, num.field)
        elif den.is_constant() and den.terms:
            # monic constant denominator is 1
            den = Poly.one(num.nvars, num.field)
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x, nvars=None, field=QQ):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly.constant(x, nvars, field))

    @property
    def nvars(self):
        return self.num.nvars

    @property
    def field(self):
        return self.num.field

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self):
        return not self.num.terms

    def __add__(self, other):
        o = RatFunc.lift(other, self.nvars, self.field)
        if self.is_polynomial() and o.is_polynomial():
            return RatFunc(self.num + o.num)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.lift(other, self.nvars, self.field))

    def __rsub__(self, other):
        return RatFunc.lift(other, self.nvars, self.field) - self

    def __mul__(self, other):
        o = RatFunc.lift(other, self.nvars, self.field)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.lift(other, self.nvars, self.field)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.lift(other, self.nvars, self.field) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den ** (-k), self.num ** (-k))
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (Poly, int, Fraction, FpElem)):
                other = RatFunc.lift(other, self.nvars, self.field)
            else:
                return NotImplemented
        return ratfunc_equal(self, other)

    __hash__ = None

    def eval(self, pt):
        """Value at ``pt``; ZeroDivisionError where the denominator vanishes."""
        d = self.den.eval(pt)
        if not d:
            raise ZeroDivisionError("denominator vanishes at point")
        n = self.num.eval(pt)
        return self.field.div(n, d)

    __call__ = eval

    def reduced(self) -> "RatFunc":
        """Cheap display simplification: cancel the common monomial factor
        and divide out the denominator when it divides the numerator."""
        num, den = self.num, self.den
        if den.is_constant():
            return self
        g = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
        if any(g):
            m = Poly.monomial(g, field=num.field)
            num, den = num.divexact(m), den.divexact(m)
        try:
            return RatFunc(num.divexact(den))
        except ArithmeticError:
            return RatFunc(num, den)

    def diff(self, i: int) -> "RatFunc":
        return RatFunc(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def to_str(self, names=None) -> str:
        r = self.reduced()
        if r.den.is_constant():
            return r.num.to_str(names)
        n, d = r.num.to_str(names), r.den.to_str(names)
        if len(r.num.terms) > 1:
            n = f"({n})"
        if len(r.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"


def poly_eval(p: Poly, pt: Sequence):
    return p.eval(pt)


def ratfunc_equal(a: RatFunc, b: RatFunc) -> bool:
    if a.nvars != b.nvars:
        raise ValueError("variable count mismatch")
    return (a.num * b.den - b.num * a.den).is_zero()


def compose(p: Poly | RatFunc, subst: Sequence) -> RatFunc:
    """Substitute ``subst[i]`` for variable i of ``p``; result normalised.

    When every substituted function is a polynomial the result has
    denominator 1.
    """
    if isinstance(p, RatFunc):
        return compose(p.num, subst) / compose(p.den, subst)
    if len(subst) != p.nvars:
        raise ValueError("substitution length must equal the variable count")
    if not subst:
        return RatFunc(Poly.constant(p.constant_value(), 0, p.field))
    subst = [RatFunc.lift(s) for s in subst]
    m = subst[0].nvars
    field = p.field
    num, den = composed_parts(p, [s.num for s in subst], [s.den for s in subst], p.var_degrees())
    if num is None:
        return RatFunc(Poly.zero(m, field))
    return RatFunc(num, den)


def _power_table(base: Poly, top: int):
    out = [Poly.one(base.nvars, base.field)]
    for _ in range(top):
        out.append(out[-1] * base)
    return out


def composed_parts(p: Poly, nums, dens, degs):
    """Numerator and denominator of p(nums/dens) over the common denominator
    prod dens[i]**degs[i]; degs must bound p's degree in each variable."""
    if not p.terms:
        return None, None
    m = nums[0].nvars
    field = p.field
    polynomial = all(d.is_constant() for d in dens)
    npow = [_power_table(n, k) for n, k in zip(nums, degs)]
    dpow = None if polynomial else [_power_table(d, k) for d, k in zip(dens, degs)]
    total = Poly.zero(m, field)
    for e, c in p.terms.items():
        term = Poly.constant(c, m, field)
        for i, x in enumerate(e):
            if x:
                term = term * npow[i][x]
            if dpow is not None and degs[i] - x:
                term = term * dpow[i][degs[i] - x]
        total = total + term
    if polynomial:
        scale = field.one
        for d, k in zip(dens, degs):
            scale = scale * d.constant_value() ** k
        return total, Poly.constant(scale, m, field)
    den = Poly.one(m, field)
    for i, k in enumerate(degs):
        if k:
            den = den * dpow[i][k]
    return total, den
