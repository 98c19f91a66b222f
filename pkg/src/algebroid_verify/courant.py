"""The double A + A* of a generalized Lie bialgebroid as a generalized Courant algebroid."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable

from .bialgebroid import GenLieBialgebroid, extend_pair
from .exterior import AForm, Multivector, interior, pairing
from .report import CheckReport, Identity
from .ring import ONE, U_INV, ZERO, RingElem, x

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DoubleSection:
    """X + alpha with X a section of A and alpha a section of A*."""

    X: Multivector
    alpha: AForm

    def __post_init__(self):
        if self.X.rank != self.alpha.rank:
            raise ValueError("components over different bases")
        if self.X.degrees() - {1} or self.alpha.degrees() - {1}:
            raise ValueError("double sections have degree-1 components")

    @classmethod
    def zero(cls, rank: int) -> "DoubleSection":
        return cls(Multivector.zero(rank), AForm.zero(rank))

    @classmethod
    def of(cls, X=None, alpha=None, rank: int | None = None) -> "DoubleSection":
        rank = rank or (X.rank if X is not None else alpha.rank)
        return cls(X if X is not None else Multivector.zero(rank), alpha if alpha is not None else AForm.zero(rank))

    @classmethod
    def basis(cls, rank: int) -> list:
        """X_1..X_r followed by a_1..a_r."""
        return [cls.of(X=Multivector.basis(i, rank)) for i in range(rank)] + [
            cls.of(alpha=AForm.basis(i, rank)) for i in range(rank)
        ]

    @property
    def rank(self) -> int:
        return self.X.rank

    def vector(self) -> list:
        return self.X.vector() + self.alpha.vector()

    @classmethod
    def from_vector(cls, coeffs, rank: int) -> "DoubleSection":
        return cls(Multivector.from_vector(coeffs[:rank], rank), AForm.from_vector(coeffs[rank:], rank))

    def __add__(self, other):
        return DoubleSection(self.X + other.X, self.alpha + other.alpha)

    def __sub__(self, other):
        return DoubleSection(self.X - other.X, self.alpha - other.alpha)

    def __neg__(self):
        return DoubleSection(-self.X, -self.alpha)

    def __mul__(self, f):
        return DoubleSection(self.X * f, self.alpha * f)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.alpha.is_zero()

    def eval(self, xs, t=0, u=1):
        return (self.X.eval(xs, t, u), self.alpha.eval(xs, t, u))

    def __str__(self):
        parts = [str(p) for p in (self.X, self.alpha) if not p.is_zero()]
        return " + ".join(parts) if parts else "0"


def pairing_pm(e1: DoubleSection, e2: DoubleSection, sign: int = 1) -> RingElem:
    """(e1, e2)_+- = 1/2 (<alpha1, X2> +- <alpha2, X1>)."""
    a = pairing(e1.alpha, e2.X)
    b = pairing(e2.alpha, e1.X)
    return (a + b if sign > 0 else a - b) * HALF


class CourantDouble:
    """Bracket, anchor, pairings and the operators D, D^theta on A + A*.

    ``dual_function_d`` optionally replaces the W-differential of A* on
    functions inside the bracket (used for the printed reading of the
    extended bracket).
    """

    def __init__(self, B: GenLieBialgebroid, dual_function_d: Callable | None = None, name: str = ""):
        self.B = B
        self.rank = B.rank
        self.name = name or B.name
        self._dual_function_d = dual_function_d
        self._basis_brackets: dict = {}

    @property
    def A(self):
        return self.B.A

    @property
    def Astar(self):
        return self.B.Astar

    # -- calculus pieces ---------------------------------------------------------
    def d_star_W_function(self, f: RingElem) -> Multivector:
        if self._dual_function_d is not None:
            return self._dual_function_d(f)
        return self.Astar.differential_of_function(f, self.B.W)

    def d_phi_function(self, f: RingElem) -> AForm:
        return self.A.differential_of_function(f, self.B.phi)

    def lie_star(self, alpha: AForm, X: Multivector) -> Multivector:
        """L^W_{*alpha} X, the W-Lie derivative of A* acting on A = 1-forms of A*."""
        As, W = self.Astar, self.B.W
        return self.d_star_W_function(pairing(alpha, X)) + interior(alpha, As.d_phi(W, X))

    def lie_A(self, X: Multivector, alpha: AForm) -> AForm:
        return self.A.lie_derivative_phi(self.B.phi, X, alpha)

    def terms(self, e1: DoubleSection, e2: DoubleSection) -> dict:
        """The eight summands of the double bracket, keyed by name."""
        A, As, phi, W = self.A, self.Astar, self.B.phi, self.B.W
        minus = pairing_pm(e1, e2, -1)
        return {
            "[X1,X2]^phi": A.schouten_phi(phi, e1.X, e2.X),
            "L*_a1 X2": self.lie_star(e1.alpha, e2.X),
            "-L*_a2 X1": -self.lie_star(e2.alpha, e1.X),
            "-d*^W(e1,e2)_-": -self.d_star_W_function(minus),
            "[a1,a2]*^W": As.schouten_phi(W, e1.alpha, e2.alpha),
            "L_X1 a2": self.lie_A(e1.X, e2.alpha),
            "-L_X2 a1": -self.lie_A(e2.X, e1.alpha),
            "d^phi(e1,e2)_-": self.d_phi_function(minus),
        }

    def bracket(self, e1: DoubleSection, e2: DoubleSection) -> DoubleSection:
        parts = self.terms(e1, e2)
        r = self.rank
        X = Multivector.zero(r)
        alpha = AForm.zero(r)
        for v in parts.values():
            if isinstance(v, Multivector):
                X = X + v
            else:
                alpha = alpha + v
        return DoubleSection(X, alpha)

    def basis_bracket(self, i: int, j: int) -> DoubleSection:
        key = (i, j)
        if key not in self._basis_brackets:
            basis = DoubleSection.basis(self.rank)
            self._basis_brackets[key] = self.bracket(basis[i], basis[j])
        return self._basis_brackets[key]

    def rho(self, e: DoubleSection) -> tuple:
        """a(X) + a_*(alpha) in coordinate components."""
        v1 = self.A.vector_field(e.X)
        v2 = self.Astar.vector_field(e.alpha)
        return tuple(a + b for a, b in zip(v1, v2))

    def theta(self, e: DoubleSection) -> RingElem:
        """<theta, X + alpha> = <phi, X> + <alpha, W>."""
        return pairing(self.B.phi, e.X) + pairing(e.alpha, self.B.W)

    def rho_theta(self, e: DoubleSection) -> tuple:
        """(rho(e), <theta, e>): a section of TM x R."""
        return self.rho(e), self.theta(e)

    def apply_rho(self, e: DoubleSection, f):
        return self.A.apply_vector_field(self.rho(e), f)

    def apply_rho_theta(self, e: DoubleSection, f):
        """rho^theta(e) acting on functions as f -> rho(e) f + <theta, e> f."""
        return self.apply_rho(e, f) + self.theta(e) * f

    def tm_r_bracket(self, s1: tuple, s2: tuple) -> tuple:
        """[(V,f),(W,g)] = ([V,W], V g - W f) on sections of TM x R."""
        (V, f), (Wv, g) = s1, s2
        return self.A.vf_bracket(V, Wv), self.A.apply_vector_field(V, g) - self.A.apply_vector_field(Wv, f)

    # -- D operators ----------------------------------------------------------------
    def _pairing_matrix(self) -> list:
        basis = DoubleSection.basis(self.rank)
        return [[pairing_pm(b1, b2, 1).constant_value() for b2 in basis] for b1 in basis]

    def beta(self, e: DoubleSection) -> list:
        """Components of beta(e) = (e, .)_+ on the basis of A + A*."""
        return [pairing_pm(e, b, 1) for b in DoubleSection.basis(self.rank)]

    def beta_inverse(self, covector: list) -> DoubleSection:
        """The section e with (e, b)_+ = covector(b) for every basis element b."""
        G = self._pairing_matrix()
        inv = _invert_rational(G)
        n = len(G)
        coeffs = []
        for i in range(n):
            acc = ZERO
            for j in range(n):
                if inv[i][j]:
                    acc = acc + covector[j] * inv[i][j]
            coeffs.append(acc)
        return DoubleSection.from_vector(coeffs, self.rank)

    def rho_star_df(self, f: RingElem) -> list:
        """rho^* delta f on the basis: value rho(b) f for each basis element b."""
        r = self.rank
        A, As = self.A, self.Astar
        vals = []
        for i in range(r):
            vals.append(sum((A.anchor[i][j] * A.coordinate_derivative(f, j) for j in range(A.n_coords)), ZERO))
        for i in range(r):
            vals.append(sum((As.anchor[i][j] * As.coordinate_derivative(f, j) for j in range(As.n_coords)), ZERO))
        return vals

    def theta_covector(self) -> list:
        return self.B.phi.vector() + self.B.W.vector()

    def D_abstract(self, f: RingElem) -> DoubleSection:
        return self.beta_inverse(self.rho_star_df(f)) * HALF

    def D_theta_abstract(self, f: RingElem) -> DoubleSection:
        return self.D_abstract(f) + self.beta_inverse(self.theta_covector()) * (RingElem.lift(f) * HALF)

    def D_concrete(self, f: RingElem) -> DoubleSection:
        return DoubleSection(self.Astar.differential_of_function(f), self.A.differential_of_function(f))

    def D_theta_concrete(self, f: RingElem) -> DoubleSection:
        return DoubleSection(
            self.Astar.differential_of_function(f, self.B.W),
            self.A.differential_of_function(f, self.B.phi),
        )

    def D_ops(self, f) -> tuple:
        """(D f, D^theta f); both routes are computed and must agree."""
        f = RingElem.lift(f)
        d1, d2 = self.D_abstract(f), self.D_concrete(f)
        t1, t2 = self.D_theta_abstract(f), self.D_theta_concrete(f)
        if not (d1 - d2).is_zero() or not (t1 - t2).is_zero():
            raise AssertionError(f"D routes disagree on {f}: {d1} vs {d2}, {t1} vs {t2}")
        return d2, t2

    def T(self, e1, e2, e3) -> RingElem:
        """1/3 ([e1,e2],e3)_+ + cyclic permutations."""
        s = (
            pairing_pm(self.bracket(e1, e2), e3)
            + pairing_pm(self.bracket(e2, e3), e1)
            + pairing_pm(self.bracket(e3, e1), e2)
        )
        return s * Fraction(1, 3)

    # -- axioms ----------------------------------------------------------------
    def default_probes(self) -> list:
        n = self.A.base_dim
        probes = [ONE]
        if n >= 1:
            probes.append(x(1))
        probes.append(_fixed_polynomial(n))
        if self.A.time_extended and n >= 1:
            from .ring import T as t_

            probes.append(t_ * x(1))
        return probes

    def check_axioms(self, probes: list | None = None) -> dict:
        """Per-axiom reports for the five generalized Courant axioms."""
        probes = probes if probes is not None else self.default_probes()
        r = self.rank
        basis = DoubleSection.basis(r)
        n = len(basis)
        names = [f"X{i + 1}" for i in range(r)] + [f"a{i + 1}" for i in range(r)]
        br = self.basis_bracket
        reports = {}

        ids = []
        for i, j, k in combinations(range(n), 3):
            jac = (
                self.bracket(br(i, j), basis[k])
                + self.bracket(br(j, k), basis[i])
                + self.bracket(br(k, i), basis[j])
            )
            Tval = (
                pairing_pm(br(i, j), basis[k]) + pairing_pm(br(j, k), basis[i]) + pairing_pm(br(k, i), basis[j])
            ) * Fraction(1, 3)
            rhs = self.D_theta_concrete(Tval)
            ids.append(Identity(f"axiom 1 on ({names[i]},{names[j]},{names[k]})", _pair(jac), _pair(rhs)))
        reports["axiom1"] = CheckReport.from_identities("courant_axiom1", "Def. 3 axiom 1", ids)

        ids = []
        for i, j in combinations(range(n), 2):
            lhs = self.rho_theta(br(i, j))
            rhs = self.tm_r_bracket(self.rho_theta(basis[i]), self.rho_theta(basis[j]))
            ids.append(Identity(f"axiom 2 on ({names[i]},{names[j]})", lhs, rhs))
        reports["axiom2"] = CheckReport.from_identities("courant_axiom2", "Def. 3 axiom 2", ids)

        ids = []
        for i in range(n):
            for j in range(n):
                for f in probes:
                    lhs = self.bracket(basis[i], basis[j] * f)
                    rhs = (
                        br(i, j) * f
                        + basis[j] * self.apply_rho(basis[i], f)
                        - self.D_concrete(f) * pairing_pm(basis[i], basis[j])
                    )
                    ids.append(Identity(f"axiom 3 on ({names[i]},{f}*{names[j]})", _pair(lhs), _pair(rhs)))
        reports["axiom3"] = CheckReport.from_identities(
            "courant_axiom3", "Def. 3 axiom 3", ids, notes=[f"probe functions: {', '.join(map(str, probes))}"]
        )

        ids = []
        for f, g in combinations_with_replacement(probes, 2):
            Df, Dg = self.D_theta_concrete(f), self.D_theta_concrete(g)
            ids.append(Identity(f"axiom 4 (D^theta {f}, D^theta {g})_+ = 0", pairing_pm(Df, Dg), ZERO))
        for f in probes:
            rt = self.rho_theta(self.D_theta_concrete(f))
            zero_vf = tuple(ZERO for _ in rt[0])
            ids.append(Identity(f"axiom 4 rho^theta(D^theta {f}) = 0", rt, (zero_vf, ZERO)))
        reports["axiom4"] = CheckReport.from_identities("courant_axiom4", "Def. 3 axiom 4", ids)

        ids = []
        for k in range(n):
            e = basis[k]
            for i, j in combinations_with_replacement(range(n), 2):
                e1, e2 = basis[i], basis[j]
                lhs = self.apply_rho_theta(e, pairing_pm(e1, e2))
                rhs = pairing_pm(br(k, i) + self.D_theta_concrete(pairing_pm(e, e1)), e2) + pairing_pm(
                    e1, br(k, j) + self.D_theta_concrete(pairing_pm(e, e2))
                )
                ids.append(Identity(f"axiom 5 on ({names[k]};{names[i]},{names[j]})", lhs, rhs))
        reports["axiom5"] = CheckReport.from_identities("courant_axiom5", "Def. 3 axiom 5", ids)
        return reports

    def check_courant_axioms(self, probes: list | None = None) -> CheckReport:
        reports = self.check_axioms(probes)
        parts = list(reports.values())
        out = parts[0].combine(*parts[1:], check="courant_axioms", anchor="Def. 3 axioms 1-5")
        out.data = {name: rep.passed for name, rep in reports.items()}
        return out


def _pair(e: DoubleSection):
    return (e.X, e.alpha)


def _fixed_polynomial(n: int) -> RingElem:
    """A fixed t-free probe polynomial in the available coordinates."""
    poly = RingElem.const(Fraction(1, 2))
    if n >= 1:
        poly = poly + x(1) * 2 - x(1) ** 2 * 3
    if n >= 2:
        poly = poly + x(1) * x(2) - x(2) ** 2 * Fraction(1, 3)
    if n >= 3:
        poly = poly + x(3) * x(1) * x(2)
    return poly


def _invert_rational(G: list) -> list:
    n = len(G)
    m = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(G)]
    for c in range(n):
        p = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                fct = m[i][c]
                m[i] = [a - fct * b for a, b in zip(m[i], m[c])]
    return [row[n:] for row in m]


# -- module-level operations ------------------------------------------------------

def double_bracket(C: CourantDouble, e1, e2) -> DoubleSection:
    return C.bracket(e1, e2)


def rho_theta(C: CourantDouble, e):
    return C.rho_theta(e)


def D_ops(C: CourantDouble, f):
    return C.D_ops(f)


def T_fn(C: CourantDouble, e1, e2, e3):
    return C.T(e1, e2, e3)


def check_courant_axioms(C: CourantDouble, probes=None) -> CheckReport:
    return C.check_courant_axioms(probes)


HATDUAL_READINGS = ("symmetric", "printed")


def extended_double(C: CourantDouble, hatdual: str = "symmetric") -> CourantDouble:
    """The Courant algebroid on A~ + A~* built from the time extensions.

    ``hatdual`` selects the reading of the exp(-t)-rescaled differential of
    A~* on functions: ``symmetric`` uses W (it is then the differential of
    the extended dual algebroid), ``printed`` uses the coefficients of phi
    transported to A through the basis.
    """
    if hatdual not in HATDUAL_READINGS:
        raise ValueError(f"hatdual must be one of {HATDUAL_READINGS}")
    B = C.B
    ext = extend_pair(B)
    override: Callable | None = None
    if hatdual == "printed":
        As = ext.Astar
        delta = Multivector.from_vector(
            [p - w for p, w in zip(B.phi.vector(), B.W.vector())], B.rank
        )

        def printed_d(f):
            base = As.differential_of_function(f)
            return base + delta * (U_INV * RingElem.lift(f).partial_t())

        override = printed_d

    return CourantDouble(ext, dual_function_d=override, name=(C.name + "~") if C.name else "")


def tilde_double_bracket(C: CourantDouble, e1: DoubleSection, e2: DoubleSection, hatdual: str = "symmetric") -> DoubleSection:
    return extended_double(C, hatdual).bracket(e1, e2)


def embed_section(e: DoubleSection) -> DoubleSection:
    """X + alpha -> X + exp(t) alpha."""
    from .ring import U

    return DoubleSection(e.X, e.alpha * U)
