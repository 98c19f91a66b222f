"""Exact coefficient ring Q[x1..xn, t][u, 1/u] with u standing for exp(t).

Elements are sparse maps from monomials to rationals.  A monomial is the
triple ``(k, m, alpha)``: ``u**k * t**m * x**alpha``.  The tuple order of
:class:`Monomial` is the fixed monomial order (lexicographic on k, then m,
then alpha); ``alpha`` is stored without trailing zeros so that elements
built over different numbers of coordinates compare and combine freely.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple, Sequence


class Monomial(NamedTuple):
    k: int  # power of u = exp(t), any integer
    m: int  # power of t
    alpha: tuple  # exponents of x1, x2, ... (no trailing zeros)

    def mul(self, other: "Monomial") -> "Monomial":
        a, b = self.alpha, other.alpha
        if len(a) < len(b):
            a, b = b, a
        alpha = tuple(e + (b[i] if i < len(b) else 0) for i, e in enumerate(a))
        return Monomial(self.k + other.k, self.m + other.m, alpha)


ONE_MONOMIAL = Monomial(0, 0, ())


def _strip(alpha: Iterable[int]) -> tuple:
    alpha = list(alpha)
    while alpha and alpha[-1] == 0:
        alpha.pop()
    if any(e < 0 for e in alpha):
        raise ValueError("negative exponent on a base coordinate")
    return tuple(alpha)


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


class RingElem:
    """Immutable element of Q[x, t][u, 1/u] in canonical sparse form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        canon = {}
        if terms:
            for mono, c in terms.items():
                c = _coerce_coeff(c)
                if c == 0:
                    continue
                if not isinstance(mono, Monomial):
                    k, m, alpha = mono
                    mono = Monomial(int(k), int(m), _strip(alpha))
                elif mono.alpha and mono.alpha[-1] == 0:
                    mono = Monomial(mono.k, mono.m, _strip(mono.alpha))
                if mono.m < 0:
                    raise ValueError("negative power of t")
                s = canon.get(mono, 0) + c
                if s:
                    canon[mono] = s
                else:
                    canon.pop(mono, None)
        self._terms = canon
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "RingElem":
        # terms already canonical: Monomial keys, nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c) -> "RingElem":
        c = _coerce_coeff(c)
        return cls._raw({ONE_MONOMIAL: c} if c else {})

    @classmethod
    def monomial(cls, c=1, *, k: int = 0, m: int = 0, alpha=()) -> "RingElem":
        return cls({Monomial(k, m, _strip(alpha)): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in descending monomial order."""
        return sorted(self._terms.items(), reverse=True)

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def n_vars(self) -> int:
        return max((len(mo.alpha) for mo in self._terms), default=0)

    def is_time_free(self) -> bool:
        return all(mo.k == 0 and mo.m == 0 for mo in self._terms)

    def leading(self):
        mono = max(self._terms)
        return mono, self._terms[mono]

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def lift(x) -> "RingElem":
        if isinstance(x, RingElem):
            return x
        if isinstance(x, (int, Rational, str)):
            return RingElem.const(x)
        return NotImplemented

    def __add__(self, other):
        other = RingElem.lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                del out[mono]
        return RingElem._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return RingElem._raw({mo: -c for mo, c in self._terms.items()})

    def __sub__(self, other):
        other = RingElem.lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = RingElem.lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            c = Fraction(other)
            if c == 0:
                return ZERO
            return RingElem._raw({mo: v * c for mo, v in self._terms.items()})
        other = RingElem.lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = m1.mul(m2)
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return RingElem._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("integer exponent required")
        if e < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials in u are invertible")
            (mono, c), = self._terms.items()
            if mono.m or mono.alpha:
                raise ValueError("only monomials in u are invertible")
            return RingElem._raw({Monomial(mono.k * e, 0, ()): Fraction(1) / c ** (-e)})
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "RingElem":
        return self * _coerce_coeff(c)

    def __eq__(self, other):
        other = RingElem.lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus ---------------------------------------------------------
    def partial_x(self, i: int) -> "RingElem":
        """Derivative in the base coordinate x_{i+1} (0-based index)."""
        if i < 0:
            raise IndexError("coordinate index out of range")
        out = {}
        for mo, c in self._terms.items():
            if i < len(mo.alpha) and mo.alpha[i]:
                e = mo.alpha[i]
                alpha = _strip(mo.alpha[:i] + (e - 1,) + mo.alpha[i + 1:])
                nm = Monomial(mo.k, mo.m, alpha)
                out[nm] = out.get(nm, 0) + c * e
        return RingElem(out)

    def partial_t(self) -> "RingElem":
        """d/dt with u = exp(t): d(t^m u^k) = m t^(m-1) u^k + k t^m u^k."""
        out: dict = {}
        for mo, c in self._terms.items():
            if mo.m:
                nm = Monomial(mo.k, mo.m - 1, mo.alpha)
                out[nm] = out.get(nm, 0) + c * mo.m
            if mo.k:
                out[mo] = out.get(mo, 0) + c * mo.k
        return RingElem(out)

    # -- evaluation -------------------------------------------------------
    def eval(self, xs: Sequence, t=0, u=1) -> Fraction:
        u = Fraction(u)
        if u == 0:
            raise ZeroDivisionError("u stands for exp(t) and cannot be 0")
        t = Fraction(t)
        xs = [Fraction(v) for v in xs]
        total = Fraction(0)
        for mo, c in self._terms.items():
            if len(mo.alpha) > len(xs):
                if any(mo.alpha[len(xs):]):
                    raise IndexError("point has too few coordinates")
            v = c * (t ** mo.m) * (u ** mo.k)
            for x, e in zip(xs, mo.alpha):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute_u_power(self, factor: int) -> "RingElem":
        """Replace u by u**factor (used for weight mutations)."""
        return RingElem({Monomial(mo.k * factor, mo.m, mo.alpha): c for mo, c in self._terms.items()})

    # -- division -----------------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational g with self/g integral and primitive."""
        from math import gcd

        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def monomial_gcd(self) -> Monomial:
        monos = list(self._terms)
        if not monos:
            return ONE_MONOMIAL
        k = min(mo.k for mo in monos)
        m = min(mo.m for mo in monos)
        width = min(len(mo.alpha) for mo in monos)
        alpha = tuple(min(mo.alpha[i] for mo in monos) for i in range(width))
        return Monomial(k, m, _strip(alpha))

    def div_monomial(self, mono: Monomial) -> "RingElem":
        out = {}
        for mo, c in self._terms.items():
            alpha = list(mo.alpha)
            for i, e in enumerate(mono.alpha):
                alpha[i] -= e
            out[Monomial(mo.k - mono.k, mo.m - mono.m, _strip(alpha))] = c
        return RingElem._raw(out)

    def divexact(self, other: "RingElem") -> "RingElem | None":
        """Quotient q with q*other == self, or None if other does not divide self."""
        if not other._terms:
            raise ZeroDivisionError("division by the zero ring element")
        if not self._terms:
            return ZERO
        lm_b, lc_b = other.leading()
        k_floor = min(mo.k for mo in self._terms) - min(mo.k for mo in other._terms)
        rem = self
        quotient: dict = {}
        while rem._terms:
            lm_r, lc_r = rem.leading()
            if lm_r.m < lm_b.m or len(lm_r.alpha) < len(lm_b.alpha):
                return None
            if any(lm_r.alpha[i] < e for i, e in enumerate(lm_b.alpha)):
                return None
            k = lm_r.k - lm_b.k
            if k < k_floor:
                return None
            alpha = tuple(e - (lm_b.alpha[i] if i < len(lm_b.alpha) else 0) for i, e in enumerate(lm_r.alpha))
            qm = Monomial(k, lm_r.m - lm_b.m, _strip(alpha))
            qc = lc_r / lc_b
            quotient[qm] = qc
            rem = rem - RingElem._raw({qm: qc}) * other
        return RingElem._raw(quotient)

    # -- text -----------------------------------------------------------------
    def __str__(self):
        from .expr import render

        return render(self)

    def __repr__(self):
        return f"RingElem({str(self)!r})"


ZERO = RingElem()
ONE = RingElem.const(1)


def x(i: int) -> RingElem:
    """The base coordinate x_i (1-based)."""
    if i < 1:
        raise IndexError("coordinates are numbered from 1")
    alpha = [0] * i
    alpha[-1] = 1
    return RingElem.monomial(alpha=alpha)


T = RingElem.monomial(m=1)
U = RingElem.monomial(k=1)
U_INV = RingElem.monomial(k=-1)


def exp_t(k: int = 1) -> RingElem:
    return RingElem.monomial(k=k)


class RatioElem:
    """Element num/den of the fraction field, normalized where cheaply possible.

    Normalization divides out exact divisors of the numerator, the common
    monomial factor, and the rational content, and makes the leading
    coefficient of the denominator positive.  No polynomial gcd is taken, so
    two equal ratios need not be structurally equal; use ``==`` which
    cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num = RingElem.lift(num)
        den = RingElem.lift(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        if not den.is_constant() or den.constant_value() != 1:
            q = num.divexact(den)
            if q is not None:
                num, den = q, ONE
            else:
                g = _gcd_monomial(num.monomial_gcd(), den.monomial_gcd())
                if g != ONE_MONOMIAL:
                    num, den = num.div_monomial(g), den.div_monomial(g)
                cd = den.content()
                if den.leading()[1] < 0:
                    cd = -cd
                num, den = num * (1 / cd), den * (1 / cd)
        self.num, self.den = num, den

    @staticmethod
    def lift(v) -> "RatioElem":
        if isinstance(v, RatioElem):
            return v
        return RatioElem(RingElem.lift(v))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_ring(self) -> RingElem | None:
        if self.den == ONE:
            return self.num
        return self.num.divexact(self.den)

    def __add__(self, other):
        o = RatioElem.lift(other)
        if self.den == o.den:
            return RatioElem(self.num + o.num, self.den)
        return RatioElem(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatioElem.__new__(RatioElem)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-RatioElem.lift(other))

    def __rsub__(self, other):
        return RatioElem.lift(other) + (-self)

    def __mul__(self, other):
        o = RatioElem.lift(other)
        return RatioElem(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatioElem.lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero ratio")
        return RatioElem(self.num * o.den, self.den * o.num)

    def __eq__(self, other):
        try:
            o = RatioElem.lift(other)
        except TypeError:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        r = self.to_ring()
        return hash(r) if r is not None else hash((self.num, self.den))

    def partial_x(self, i: int) -> "RatioElem":
        return RatioElem(self.num.partial_x(i) * self.den - self.num * self.den.partial_x(i), self.den * self.den)

    def partial_t(self) -> "RatioElem":
        return RatioElem(self.num.partial_t() * self.den - self.num * self.den.partial_t(), self.den * self.den)

    def eval(self, xs, t=0, u=1) -> Fraction:
        d = self.den.eval(xs, t, u)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.eval(xs, t, u) / d

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatioElem({str(self)!r})"


def _gcd_monomial(a: Monomial, b: Monomial) -> Monomial:
    width = min(len(a.alpha), len(b.alpha))
    alpha = tuple(min(a.alpha[i], b.alpha[i]) for i in range(width))
    return Monomial(min(a.k, b.k), min(a.m, b.m), _strip(alpha))


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    return a + b


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    return a * b


def partial_x(a: RingElem, i: int) -> RingElem:
    return a.partial_x(i)


def partial_t(a: RingElem) -> RingElem:
    return a.partial_t()
