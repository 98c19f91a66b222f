"""Lie algebroids over a coordinate chart and their deformed Cartan calculus.

An :class:`AlgebroidStructure` is given on a constant basis ``e_1..e_r`` of
sections by structure functions ``[e_i, e_j] = sum_k c_ij^k e_k`` and an
anchor matrix ``a(e_i) = sum_j a_i^j d/dx_j``.  The same class serves A
(sections are :class:`Multivector`) and A* (sections are :class:`AForm`);
the forms of the algebroid are elements of the dual exterior algebra.

When ``time_extended`` is set the base carries one extra coordinate ``t``
after ``x1..xn`` and the last anchor column is the ``d/dt`` component.

Schouten sign conventions: ``[X, f] = a(X) f``,
``[P, Q] = -(-1)^((p-1)(q-1)) [Q, P]`` and
``[P, Q ^ R] = [P, Q] ^ R + (-1)^((p-1) q) Q ^ [P, R]``.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .exterior import AForm, Multivector, _Graded, _merge_sign, interior, wedge
from .report import CheckReport, Identity
from .ring import ONE, ZERO, RingElem


class AlgebroidStructure:
    """Structure functions and anchor of a Lie algebroid on a trivial bundle."""

    def __init__(
        self,
        rank: int,
        base_dim: int,
        brackets: dict | None = None,
        anchor: Sequence[Sequence] | None = None,
        *,
        time_extended: bool = False,
        section_type: type = Multivector,
        name: str = "",
    ):
        if section_type not in (Multivector, AForm):
            raise TypeError("section_type must be Multivector or AForm")
        self.rank = rank
        self.base_dim = base_dim
        self.time_extended = time_extended
        self.section_type = section_type
        self.name = name
        n_coords = base_dim + (1 if time_extended else 0)
        self.n_coords = n_coords
        table = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < rank and 0 <= j < rank):
                raise IndexError(f"bracket index ({i}, {j}) out of range")
            coeffs = [RingElem.lift(c) for c in coeffs]
            if len(coeffs) != rank:
                raise ValueError("structure function vector must have length rank")
            if i == j:
                if any(not c.is_zero() for c in coeffs):
                    raise ValueError(f"[e{i + 1}, e{i + 1}] must vanish")
                continue
            if i > j:
                i, j, coeffs = j, i, [-c for c in coeffs]
            if (i, j) in table and table[(i, j)] != tuple(coeffs):
                raise ValueError(f"inconsistent structure functions for e{i + 1}, e{j + 1}")
            table[(i, j)] = tuple(coeffs)
        self._brackets = {k: v for k, v in table.items() if any(not c.is_zero() for c in v)}
        if anchor is None:
            anchor = [[ZERO] * n_coords for _ in range(rank)]
        anchor = tuple(tuple(RingElem.lift(c) for c in row) for row in anchor)
        if len(anchor) != rank or any(len(row) != n_coords for row in anchor):
            raise ValueError(f"anchor must be a {rank} x {n_coords} matrix")
        self.anchor = anchor
        self._basis_cache: dict = {}

    # -- basic data ---------------------------------------------------------
    @property
    def form_type(self):
        return AForm if self.section_type is Multivector else Multivector

    def structure(self, i: int, j: int) -> tuple:
        """c_ij^k for all k (antisymmetric in i, j)."""
        if i == j:
            return (ZERO,) * self.rank
        if i < j:
            return self._brackets.get((i, j), (ZERO,) * self.rank)
        return tuple(-c for c in self._brackets.get((j, i), (ZERO,) * self.rank))

    @property
    def brackets(self) -> dict:
        return dict(self._brackets)

    def section(self, coeffs) -> _Graded:
        return self.section_type.from_vector(coeffs, self.rank)

    def basis_section(self, i: int) -> _Graded:
        return self.section_type.basis(i, self.rank)

    def basis_form(self, i: int) -> _Graded:
        return self.form_type.basis(i, self.rank)

    def scalar(self, f) -> _Graded:
        return self.section_type.scalar(f, self.rank)

    def coordinate_derivative(self, f: RingElem, j: int) -> RingElem:
        if j < self.base_dim:
            return f.partial_x(j)
        if self.time_extended and j == self.base_dim:
            return f.partial_t()
        raise IndexError("coordinate index out of range")

    def anchor_basis(self, i: int, f: RingElem) -> RingElem:
        """a(e_i) f."""
        out = ZERO
        for j, a in enumerate(self.anchor[i]):
            if not a.is_zero():
                d = self.coordinate_derivative(f, j)
                if not d.is_zero():
                    out = out + a * d
        return out

    def vector_field(self, X: _Graded) -> tuple:
        """Components of a(X) in the coordinate basis."""
        self._check_section(X, 1)
        comps = [ZERO] * self.n_coords
        for (i,), c in X.terms.items():
            for j, a in enumerate(self.anchor[i]):
                if not a.is_zero():
                    comps[j] = comps[j] + c * a
        return tuple(comps)

    def apply_vector_field(self, V: Sequence[RingElem], f: RingElem) -> RingElem:
        out = ZERO
        for j, v in enumerate(V):
            if not v.is_zero():
                out = out + v * self.coordinate_derivative(f, j)
        return out

    def apply_section(self, X: _Graded, f: RingElem) -> RingElem:
        """a(X) f for a degree-1 section X."""
        return self.apply_vector_field(self.vector_field(X), f)

    def vf_bracket(self, V: Sequence[RingElem], W: Sequence[RingElem]) -> tuple:
        return tuple(self.apply_vector_field(V, w) - self.apply_vector_field(W, v) for v, w in zip(V, W))

    def _check_section(self, X, degree=None):
        if not isinstance(X, self.section_type):
            raise TypeError(f"expected a section of type {self.section_type.__name__}, got {type(X).__name__}")
        if X.rank != self.rank:
            raise ValueError("basis mismatch")
        if degree is not None and X.degrees() - {degree}:
            raise ValueError(f"expected degree {degree}")

    def _check_form(self, eta):
        if not isinstance(eta, self.form_type):
            raise TypeError(f"expected a form of type {self.form_type.__name__}, got {type(eta).__name__}")
        if eta.rank != self.rank:
            raise ValueError("basis mismatch")

    def with_name(self, name: str) -> "AlgebroidStructure":
        return AlgebroidStructure(
            self.rank, self.base_dim, self._brackets, self.anchor,
            time_extended=self.time_extended, section_type=self.section_type, name=name,
        )

    def __repr__(self):
        return f"AlgebroidStructure(name={self.name!r}, rank={self.rank}, base_dim={self.base_dim}, time_extended={self.time_extended})"

    # -- brackets -------------------------------------------------------------
    def bracket_sections(self, X: _Graded, Y: _Graded) -> _Graded:
        """[X, Y] for degree-1 sections, extended by the anchored Leibniz rule."""
        self._check_section(X, 1)
        self._check_section(Y, 1)
        out = self.section_type.zero(self.rank)
        xs, ys = X.vector(), Y.vector()
        for i, f in enumerate(xs):
            if f.is_zero():
                continue
            for j, g in enumerate(ys):
                if g.is_zero():
                    continue
                c = self.structure(i, j)
                if any(not v.is_zero() for v in c):
                    out = out + self.section(c) * (f * g)
        for i, f in enumerate(xs):
            if f.is_zero():
                continue
            for j, g in enumerate(ys):
                d = self.anchor_basis(i, g)
                if not d.is_zero():
                    out = out + self.basis_section(j) * (f * d)
        for j, g in enumerate(ys):
            if g.is_zero():
                continue
            for i, f in enumerate(xs):
                d = self.anchor_basis(j, f)
                if not d.is_zero():
                    out = out - self.basis_section(i) * (g * d)
        return out

    def _basis_with_function(self, key: tuple, g: RingElem) -> _Graded:
        """[e_I, g] for a constant basis monomial e_I."""
        if not key or g.is_zero():
            return self.section_type.zero(self.rank)
        head, rest = key[0], key[1:]
        rest_el = self.section_type(self.rank, {rest: ONE})
        out = wedge(self.basis_section(head), self._basis_with_function(rest, g))
        d = self.anchor_basis(head, g)
        if not d.is_zero():
            term = rest_el * d
            out = out + (term if len(rest) % 2 == 0 else -term)
        return out

    def _basis_pair(self, I: tuple, J: tuple) -> _Graded:
        """[e_I, e_J] for constant basis monomials (memoized)."""
        cached = self._basis_cache.get((I, J))
        if cached is not None:
            return cached
        out = self.section_type.zero(self.rank)
        if I and J:
            for a, i in enumerate(I):
                I_rest = I[:a] + I[a + 1:]
                for b, j in enumerate(J):
                    c = self.structure(i, j)
                    if all(v.is_zero() for v in c):
                        continue
                    J_rest = J[:b] + J[b + 1:]
                    sign = -1 if (a + b) % 2 else 1
                    rest = wedge(
                        self.section_type(self.rank, {I_rest: ONE}),
                        self.section_type(self.rank, {J_rest: ONE}),
                    )
                    if rest.is_zero():
                        continue
                    term = wedge(self.section(c), rest)
                    out = out + (term if sign > 0 else -term)
        self._basis_cache[(I, J)] = out
        return out

    def schouten(self, P: _Graded, Q: _Graded) -> _Graded:
        """Schouten bracket on the exterior algebra of sections."""
        self._check_section(P)
        self._check_section(Q)
        out = self.section_type.zero(self.rank)
        for I, f in P.terms.items():
            p = len(I)
            for J, g in Q.terms.items():
                q = len(J)
                if p == 0 and q == 0:
                    continue
                eI = self.section_type(self.rank, {I: ONE})
                eJ = self.section_type(self.rank, {J: ONE})
                # f [e_I, g] ^ e_J
                if p:
                    t1 = self._basis_with_function(I, g)
                    if not t1.is_zero():
                        out = out + wedge(t1, eJ) * f
                # f g [e_I, e_J]
                if p and q:
                    t2 = self._basis_pair(I, J)
                    if not t2.is_zero():
                        out = out + t2 * (f * g)
                # g (-1)^(p(q-1)+q) [e_J, f] ^ e_I
                if q:
                    t3 = self._basis_with_function(J, f)
                    if not t3.is_zero():
                        term = wedge(t3, eI) * g
                        out = out + (term if (p * (q - 1) + q) % 2 == 0 else -term)
        return out

    def schouten_phi(self, phi: _Graded, P: _Graded, Q: _Graded) -> _Graded:
        """[P,Q]^phi = [P,Q] + (p-1) P ^ i_phi Q + (-1)^p (q-1) i_phi P ^ Q."""
        self._check_form(phi)
        out = self.schouten(P, Q)
        if phi.is_zero():
            return out
        for p in sorted(P.degrees()):
            Pp = P.part(p)
            for q in sorted(Q.degrees()):
                Qq = Q.part(q)
                if p - 1 and q:
                    out = out + wedge(Pp, interior(phi, Qq)) * (p - 1)
                if q - 1 and p:
                    coeff = (q - 1) * (-1 if p % 2 else 1)
                    out = out + wedge(interior(phi, Pp), Qq) * coeff
        return out

    def lie_derivative_multivector(self, phi: _Graded | None, X: _Graded, P: _Graded) -> _Graded:
        """phi-Lie derivative of a multivector of sections: [X, P]^phi."""
        if phi is None:
            return self.schouten(X, P)
        return self.schouten_phi(phi, X, P)

    # -- forms ----------------------------------------------------------------
    def _form_value(self, eta: _Graded, Z: _Graded, rest: tuple) -> RingElem:
        """eta(Z, e_rest) for a degree-1 section Z and sorted index tuple rest."""
        total = ZERO
        for (c,), z in Z.terms.items():
            sign, key = _merge_sign((c,), rest)
            if not sign:
                continue
            v = eta.coeff(key)
            if not v.is_zero():
                total = total + (z * v if sign > 0 else -(z * v))
        return total

    def d(self, eta: _Graded) -> _Graded:
        """Exterior derivative of A-forms by the Koszul formula."""
        self._check_form(eta)
        out: dict = {}
        r = self.rank
        for k in sorted(eta.degrees()):
            part = eta.part(k)
            if k + 1 > r:
                continue
            for I in combinations(range(r), k + 1):
                val = ZERO
                for a, i in enumerate(I):
                    rest = I[:a] + I[a + 1:]
                    coeff = part.coeff(rest)
                    if not coeff.is_zero():
                        dv = self.anchor_basis(i, coeff)
                        if not dv.is_zero():
                            val = val + (dv if a % 2 == 0 else -dv)
                for a in range(len(I)):
                    for b in range(a + 1, len(I)):
                        c = self.structure(I[a], I[b])
                        if all(v.is_zero() for v in c):
                            continue
                        rest = tuple(I[m] for m in range(len(I)) if m != a and m != b)
                        v = self._form_value(part, self.section(c), rest)
                        if not v.is_zero():
                            val = val + (v if (a + b) % 2 == 0 else -v)
                if not val.is_zero():
                    out[I] = out.get(I, ZERO) + val
        return self.form_type(r, out)

    def d_phi(self, phi: _Graded, eta: _Graded) -> _Graded:
        """d^phi eta = d eta + phi ^ eta."""
        self._check_form(phi)
        return self.d(eta) + wedge(phi, eta)

    def differential_of_function(self, f: RingElem, phi: _Graded | None = None) -> _Graded:
        eta = self.form_type.scalar(f, self.rank)
        return self.d(eta) if phi is None else self.d_phi(phi, eta)

    def lie_derivative_phi(self, phi: _Graded, X: _Graded, eta: _Graded) -> _Graded:
        """L^phi_X = d^phi i_X + i_X d^phi on forms."""
        self._check_section(X, 1)
        return self.d_phi(phi, interior(X, eta)) + interior(X, self.d_phi(phi, eta))

    # -- axiom checks -----------------------------------------------------------
    def check_lie_algebroid(self) -> CheckReport:
        ids = []
        r = self.rank
        for i, j, k in combinations(range(r), 3):
            ei, ej, ek = (self.basis_section(m) for m in (i, j, k))
            jac = (
                self.bracket_sections(self.bracket_sections(ei, ej), ek)
                + self.bracket_sections(self.bracket_sections(ej, ek), ei)
                + self.bracket_sections(self.bracket_sections(ek, ei), ej)
            )
            ids.append(Identity(f"Jacobi(e{i + 1},e{j + 1},e{k + 1})", jac, self.section_type.zero(r)))
        for i, j in combinations(range(r), 2):
            lhs = self.vector_field(self.bracket_sections(self.basis_section(i), self.basis_section(j)))
            rhs = self.vf_bracket(self.anchor[i], self.anchor[j])
            ids.append(Identity(f"anchor a([e{i + 1},e{j + 1}]) = [a(e{i + 1}),a(e{j + 1})]", lhs, rhs))
        return CheckReport.from_identities(
            "lie_algebroid" + (f"[{self.name}]" if self.name else ""), "Lie algebroid axioms", ids
        )

    def check_cocycle(self, phi: _Graded) -> CheckReport:
        self._check_form(phi)
        ids = []
        for i, j in combinations(range(self.rank), 2):
            ei, ej = self.basis_section(i), self.basis_section(j)
            lhs = interior(self.bracket_sections(ei, ej), phi).scalar_part()
            rhs = self.anchor_basis(i, interior(ej, phi).scalar_part()) - self.anchor_basis(
                j, interior(ei, phi).scalar_part()
            )
            ids.append(Identity(f"<phi,[e{i + 1},e{j + 1}]> = a(e{i + 1})<phi,e{j + 1}> - a(e{j + 1})<phi,e{i + 1}>", lhs, rhs))
        return CheckReport.from_identities(
            "cocycle" + (f"[{self.name}]" if self.name else ""), "1-cocycle condition", ids
        )


def cartan_probe_forms(S: AlgebroidStructure) -> list:
    """Basis forms of every degree, plain and multiplied by a coordinate-dependent function."""
    from .ring import x

    f = ONE
    for i in range(S.base_dim):
        f = f * (x(i + 1) + i + 1)
    if S.base_dim:
        f = f + x(1) ** 2
    out = []
    for k in range(S.rank):
        for eta in S.form_type.all_basis_monomials(S.rank, k):
            out.append(eta)
            if S.base_dim:
                out.append(eta * f)
    return out


def check_cartan(S: AlgebroidStructure, phi=None) -> CheckReport:
    """d o d = 0 and, when ``phi`` is given, d^phi o d^phi = 0 on probe forms."""
    ids = []
    zero = S.form_type.zero(S.rank)
    for eta in cartan_probe_forms(S):
        ids.append(Identity(f"d(d({eta})) = 0", S.d(S.d(eta)), zero))
        if phi is not None:
            ids.append(Identity(f"d^phi(d^phi({eta})) = 0", S.d_phi(phi, S.d_phi(phi, eta)), zero))
    label = "cartan" + (f"[{S.name}]" if S.name else "")
    return CheckReport.from_identities(label, "d^2 = 0 and (d^phi)^2 = 0", ids)


def bracket_sections(S: AlgebroidStructure, X, Y):
    return S.bracket_sections(X, Y)


def check_lie_algebroid(S: AlgebroidStructure) -> CheckReport:
    return S.check_lie_algebroid()


def check_cocycle(S: AlgebroidStructure, phi) -> CheckReport:
    return S.check_cocycle(phi)


def d_exterior(S: AlgebroidStructure, eta):
    return S.d(eta)


def d_phi(S: AlgebroidStructure, phi, eta):
    return S.d_phi(phi, eta)


def lie_derivative_phi(S: AlgebroidStructure, phi, X, eta):
    return S.lie_derivative_phi(phi, X, eta)


def schouten(S: AlgebroidStructure, P, Q):
    return S.schouten(P, Q)


def schouten_phi(S: AlgebroidStructure, phi, P, Q):
    return S.schouten_phi(phi, P, Q)


def tangent_algebroid(n: int, *, time_extended: bool = False, name: str = "TM") -> AlgebroidStructure:
    """The tangent bundle of the chart: basis d/dx_i (and d/dt), identity anchor."""
    r = n + (1 if time_extended else 0)
    anchor = [[ONE if i == j else ZERO for j in range(r)] for i in range(r)]
    return AlgebroidStructure(r, n, {}, anchor, time_extended=time_extended, name=name)


def zero_algebroid(rank: int, base_dim: int, *, section_type=Multivector, time_extended=False, name="") -> AlgebroidStructure:
    return AlgebroidStructure(rank, base_dim, {}, None, time_extended=time_extended, section_type=section_type, name=name)
