"""Independent pointwise evaluation of symbolic verdicts.

Coordinates, t and u = exp(t) are algebraically independent generators of
the coefficient ring, so substituting independent rationals for all of them
is a sound test of a polynomial identity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

DEFAULT_SEED = 20240917
N_POINTS = 8


def _rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-12, 12), rng.randint(1, 7))
        if v or not nonzero:
            return v


def sample_points(n_coords: int, seed: int = DEFAULT_SEED, count: int = N_POINTS) -> list:
    """``count`` points (xs, t, u) with u != 0, reproducible from ``seed``."""
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        xs = tuple(_rational(rng) for _ in range(n_coords))
        pts.append((xs, _rational(rng), _rational(rng, nonzero=True)))
    return pts


def oracle_verdict(report, points) -> bool:
    """Verdict of ``report`` recomputed from values at ``points`` only.

    Each identity must hold at every point.  A report may also carry its own
    pointwise verdict in ``data["oracle_verdict"]`` (rank and membership
    tests, for instance); both must agree for an overall pass.
    """
    ok = all(ident.holds_at(p) for ident in report.identities for p in points)
    return ok and bool(report.data.get("oracle_verdict", True))


@dataclass
class Concordance:
    checked: int = 0
    discrepancies: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def add(self, report, points) -> bool:
        if report.status == "skipped":
            return True
        self.checked += 1
        expected = oracle_verdict(report, points)
        if expected != report.passed:
            self.discrepancies.append(f"{report.check}: symbolic {report.passed}, pointwise {expected}")
            return False
        return True


def concordance(reports, points) -> Concordance:
    c = Concordance()
    for rep in reports:
        c.add(rep, points)
    return c
