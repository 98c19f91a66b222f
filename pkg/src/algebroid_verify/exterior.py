"""Sparse exterior algebra over a rank-r basis.

:class:`Multivector` holds sections of the exterior algebra of A (basis
``X1..Xr``), :class:`AForm` sections of the exterior algebra of A* (basis
``a1..ar``, the dual basis).  Keys are strictly increasing 0-based index
tuples; the empty tuple is the degree-0 (function) part.

Sign conventions: the interior product inserts into the first slot and the
pairing of basis monomials uses the determinant convention, so that
``pairing(interior(X, eta), P) == pairing(eta, wedge(X, P))``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .expr import render_factor
from .ring import ONE, ZERO, RatioElem, RingElem


def _merge_sign(a: tuple, b: tuple):
    """Sign and sorted key of e_a ^ e_b, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    # count inversions between a and b
    inv = 0
    for i in a:
        for j in b:
            if i > j:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


class _Graded:
    kind = ""
    labels = ""

    __slots__ = ("rank", "_terms")

    def __init__(self, rank: int, terms: Mapping | None = None):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.rank = rank
        canon = {}
        if terms:
            for key, coeff in terms.items():
                key = tuple(key)
                if any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                    raise ValueError(f"index tuple {key} is not strictly increasing")
                if key and (key[0] < 0 or key[-1] >= rank):
                    raise IndexError(f"index tuple {key} out of range for rank {rank}")
                coeff = RingElem.lift(coeff)
                if coeff is NotImplemented:
                    raise TypeError("coefficients must be ring elements")
                if not coeff.is_zero():
                    canon[key] = coeff
        self._terms = canon

    @classmethod
    def _raw(cls, rank, terms):
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, rank: int):
        return cls._raw(rank, {})

    @classmethod
    def scalar(cls, f, rank: int):
        f = RingElem.lift(f)
        return cls._raw(rank, {(): f} if not f.is_zero() else {})

    @classmethod
    def basis(cls, i: int, rank: int, coeff=ONE):
        """Degree-1 basis element number ``i`` (0-based)."""
        return cls(rank, {(i,): coeff})

    @classmethod
    def from_vector(cls, coeffs: Iterable, rank: int | None = None):
        coeffs = list(coeffs)
        rank = len(coeffs) if rank is None else rank
        return cls(rank, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def all_basis_monomials(cls, rank: int, degree: int):
        return [cls(rank, {key: ONE}) for key in combinations(range(rank), degree)]

    @property
    def dual(self):
        return AForm if isinstance(self, Multivector) else Multivector

    # -- access -------------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def coeff(self, key) -> RingElem:
        return self._terms.get(tuple(key), ZERO)

    def vector(self) -> list[RingElem]:
        """Coefficients of a degree-1 element."""
        return [self._terms.get((i,), ZERO) for i in range(self.rank)]

    def degrees(self) -> set:
        return {len(k) for k in self._terms}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("element is not homogeneous")
        return degs.pop() if degs else 0

    def part(self, degree: int):
        return type(self)._raw(self.rank, {k: v for k, v in self._terms.items() if len(k) == degree})

    def scalar_part(self) -> RingElem:
        return self._terms.get((), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    # -- linear structure -----------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.rank != self.rank:
            raise ValueError("basis mismatch (different ranks)")

    def __add__(self, other):
        if isinstance(other, (RingElem, int, Fraction)):
            other = type(self).scalar(other, self.rank)
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, ZERO) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return type(self)._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.rank, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, f):
        """Multiplication by a function (ring element or rational)."""
        if isinstance(f, _Graded):
            raise TypeError("use wedge() for products of graded elements")
        f = RingElem.lift(f)
        if f is NotImplemented:
            return NotImplemented
        out = {}
        for k, v in self._terms.items():
            p = v * f
            if not p.is_zero():
                out[k] = p
        return type(self)._raw(self.rank, out)

    __rmul__ = __mul__

    def map_coeffs(self, fn):
        return type(self)(self.rank, {k: fn(v) for k, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (RingElem, int, Fraction)):
            return self.degrees() <= {0} and self.scalar_part() == other
        if not isinstance(other, _Graded):
            return NotImplemented
        return type(self) is type(other) and self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, self.rank, frozenset(self._terms.items())))

    def eval(self, xs, t=0, u=1) -> dict:
        return {k: v.eval(xs, t, u) for k, v in self._terms.items()}

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for key, c in self.items():
            basis = "^".join(f"{self.labels}{i + 1}" for i in key)
            if not key:
                parts.append(render_factor(c))
            elif c == ONE:
                parts.append(basis)
            elif c == -ONE:
                parts.append("-" + basis)
            else:
                parts.append(f"{render_factor(c)}*{basis}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


class Multivector(_Graded):
    kind = "vec"
    labels = "X"
    __slots__ = ()


class AForm(_Graded):
    kind = "form"
    labels = "a"
    __slots__ = ()


def wedge(P: _Graded, Q: _Graded) -> _Graded:
    """Graded-commutative wedge product."""
    P._check(Q)
    out: dict = {}
    for a, f in P._terms.items():
        for b, g in Q._terms.items():
            sign, key = _merge_sign(a, b)
            if not sign:
                continue
            v = f * g if sign > 0 else -(f * g)
            s = out.get(key, ZERO) + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return type(P)._raw(P.rank, out)


def wedge_all(*items: _Graded) -> _Graded:
    result = items[0]
    for it in items[1:]:
        result = wedge(result, it)
    return result


def _dual_ok(v: _Graded, w: _Graded):
    if type(v) is type(w):
        raise TypeError("contraction needs an element and an element of the dual algebra")
    if v.rank != w.rank:
        raise ValueError("basis mismatch (different ranks)")


def interior(v: _Graded, w: _Graded) -> _Graded:
    """Contraction of ``w`` by the degree-1 element ``v`` of the dual algebra.

    Inserts ``v`` into the first slot; on degree 0 the result is zero
    (functions are annihilated).
    """
    _dual_ok(v, w)
    if v.degrees() - {1}:
        raise ValueError("contraction requires a degree-1 argument")
    out: dict = {}
    for (i,), f in v._terms.items():
        for key, g in w._terms.items():
            if i not in key:
                continue
            pos = key.index(i)
            nkey = key[:pos] + key[pos + 1:]
            val = f * g if pos % 2 == 0 else -(f * g)
            s = out.get(nkey, ZERO) + val
            if s.is_zero():
                out.pop(nkey, None)
            else:
                out[nkey] = s
    return type(w)._raw(w.rank, out)


def contract_form(X: Multivector, eta: AForm) -> AForm:
    if not isinstance(X, Multivector) or not isinstance(eta, AForm):
        raise TypeError("contract_form(Multivector, AForm)")
    if eta.degrees() and min(eta.degrees()) == 0 and eta.degrees() == {0}:
        raise ValueError("cannot contract a degree-0 form")
    return interior(X, eta)


def contract_multivector(phi: AForm, Q: Multivector) -> Multivector:
    if not isinstance(phi, AForm) or not isinstance(Q, Multivector):
        raise TypeError("contract_multivector(AForm, Multivector)")
    if Q.degrees() == {0}:
        raise ValueError("cannot contract a degree-0 multivector")
    return interior(phi, Q)


def pairing(eta: _Graded, P: _Graded) -> RingElem:
    """Full contraction with the determinant convention on basis monomials."""
    _dual_ok(eta, P)
    de, dp = eta.degrees(), P.degrees()
    if len(de) == 1 and len(dp) == 1 and de != dp:
        raise ValueError("pairing requires equal degrees")
    total = ZERO
    for key, f in eta._terms.items():
        g = P._terms.get(key)
        if g is not None:
            total = total + f * g
    return total


def evaluate_on(eta: _Graded, sections: list) -> RingElem:
    """eta(s1, ..., sk) for degree-1 elements of the dual algebra."""
    if not sections:
        return eta.scalar_part()
    P = wedge_all(*sections)
    return pairing(eta.part(len(sections)), P)


def lift_ratio_vector(cls, coeffs, rank):
    """Build a degree-1 element from RatioElem coefficients that are ring elements."""
    vals = []
    for c in coeffs:
        if isinstance(c, RatioElem):
            r = c.to_ring()
            if r is None:
                raise ValueError("coefficient is not a ring element")
            c = r
        vals.append(c)
    return cls.from_vector(vals, rank)
