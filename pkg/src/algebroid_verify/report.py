"""Identity records and check reports shared by every verifier."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exterior import _Graded
from .ring import RatioElem, RingElem


def residual(lhs, rhs):
    if isinstance(lhs, (tuple, list)):
        return tuple(residual(a, b) for a, b in zip(lhs, rhs, strict=True))
    if isinstance(lhs, RatioElem) or isinstance(rhs, RatioElem):
        return RatioElem.lift(lhs) - RatioElem.lift(rhs)
    return lhs - rhs


def is_zero(value) -> bool:
    if isinstance(value, (tuple, list)):
        return all(is_zero(v) for v in value)
    if isinstance(value, (int, Fraction)):
        return value == 0
    return value.is_zero()


def evaluate(value, point) -> Any:
    """Exact value of a ring-valued object at a sample point."""
    xs, t, u = point
    if isinstance(value, (tuple, list)):
        return tuple(evaluate(v, point) for v in value)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, (RingElem, RatioElem)):
        return value.eval(xs, t, u)
    if isinstance(value, _Graded):
        return {k: v for k, v in value.eval(xs, t, u).items() if v != 0}
    if hasattr(value, "eval"):
        return value.eval(xs, t, u)
    raise TypeError(f"cannot evaluate {type(value).__name__}")


def _values_equal(a, b) -> bool:
    return a == b


def render(value) -> str:
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(render(v) for v in value) + ")"
    return str(value)


@dataclass
class Identity:
    """A claimed equality ``lhs == rhs``; both sides kept for the oracle."""

    label: str
    lhs: Any
    rhs: Any

    def residual(self):
        return residual(self.lhs, self.rhs)

    def holds(self) -> bool:
        return is_zero(self.residual())

    def holds_at(self, point) -> bool:
        try:
            return _values_equal(evaluate(self.lhs, point), evaluate(self.rhs, point))
        except ZeroDivisionError:
            return True  # point lies on a denominator; no information

    def describe(self) -> str:
        return f"{self.label}: residual {render(self.residual())}"


@dataclass
class CheckReport:
    check: str
    anchor: str
    passed: bool
    identities: list = field(default_factory=list)
    witness: str | None = None
    notes: list = field(default_factory=list)
    status: str = ""
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    @classmethod
    def from_identities(cls, check: str, anchor: str, identities: list, notes=None, data=None) -> "CheckReport":
        failing = next((i for i in identities if not i.holds()), None)
        return cls(
            check=check,
            anchor=anchor,
            passed=failing is None,
            identities=list(identities),
            witness=failing.describe() if failing is not None else None,
            notes=list(notes or []),
            data=dict(data or {}),
        )

    @classmethod
    def skipped(cls, check: str, anchor: str, reason: str) -> "CheckReport":
        return cls(check=check, anchor=anchor, passed=True, status="skipped", notes=[reason])

    def combine(self, *others: "CheckReport", check: str | None = None, anchor: str | None = None) -> "CheckReport":
        parts = (self,) + others
        failing = next((p for p in parts if not p.passed), None)
        return CheckReport(
            check=check or self.check,
            anchor=anchor or self.anchor,
            passed=failing is None,
            identities=[i for p in parts for i in p.identities],
            witness=failing.witness if failing is not None else None,
            notes=[n for p in parts for n in p.notes],
        )
