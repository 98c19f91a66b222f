"""Hypothesis strategies for ring elements and graded sections."""
from fractions import Fraction
from itertools import combinations

import sympy
from hypothesis import strategies as st

from algebroid_verify.exterior import AForm, Multivector
from algebroid_verify.ring import Monomial, RingElem

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)


def monomials(n_vars=2, time=True):
    k = st.integers(-2, 2) if time else st.just(0)
    m = st.integers(0, 2) if time else st.just(0)
    alpha = st.tuples(*[st.integers(0, 2)] * n_vars) if n_vars else st.just(())
    return st.builds(Monomial, k, m, alpha)


def ring_elems(n_vars=2, time=True, max_terms=4):
    return st.dictionaries(monomials(n_vars, time), coeffs, max_size=max_terms).map(RingElem)


def points(n_vars=2):
    q = st.fractions(min_value=-4, max_value=4, max_denominator=5)
    return st.tuples(
        st.lists(q, min_size=n_vars, max_size=n_vars),
        q,
        q.filter(lambda v: v != 0),
    )


def graded(cls, rank=3, degree=None, n_vars=2, time=False, max_terms=3):
    """Random sections of Lambda A (cls=Multivector) or Lambda A* (cls=AForm)."""
    degrees = [degree] if degree is not None else list(range(rank + 1))
    keys = [k for d in degrees for k in combinations(range(rank), d)]
    return st.dictionaries(st.sampled_from(keys), ring_elems(n_vars, time, 2), max_size=max_terms).map(
        lambda terms: cls(rank, terms)
    )


def multivectors(**kw):
    return graded(Multivector, **kw)


def aforms(**kw):
    return graded(AForm, **kw)


def frac(v):
    return Fraction(v)


sx1, sx2, st_, su = sympy.symbols("x1 x2 t u")


def to_sympy(a: RingElem):
    expr = sympy.Integer(0)
    for mo, c in a.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) * st_ ** mo.m * su ** mo.k
        for v, e in zip((sx1, sx2), mo.alpha):
            term *= v ** e
        expr += term
    return expr
