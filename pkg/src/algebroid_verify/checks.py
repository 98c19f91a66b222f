"""Build structures from a document, run the checkers in dependency order, emit verdicts."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .algebroid import AlgebroidStructure, check_cartan
from .bialgebroid import GenLieBialgebroid, JacobiStructure, check_genbialgebroid, check_jacobi_manifold, check_poissonization, check_theorem1
from .courant import HATDUAL_READINGS, CourantDouble, DoubleSection
from .dirac import (
    DiracSubbundle,
    admissible_probes,
    bracket_L,
    characteristic_subbundle,
    check_dirac,
    check_homogeneity_pairs,
    check_homogeneous_poisson,
    check_jacobi_algebra,
    check_one_admissible,
    check_prop1,
    check_prop2,
    default_probes,
    embed,
    is_admissible,
    leaf_condition,
)
from .document import StructureDocument
from .exterior import AForm, Multivector
from .oracle import DEFAULT_SEED, oracle_verdict, sample_points
from .report import CheckReport, Identity
from .ring import ONE, RatioElem

# stage -> stages whose failure makes it meaningless
STAGES = {
    "algebroid": (),
    "cocycle": ("algebroid",),
    "bialgebroid": ("algebroid", "cocycle"),
    "theorem1": (),
    "courant": ("bialgebroid",),
    "dirac": ("courant",),
    "embedding": ("courant",),
    "admissibility": ("dirac",),
    "brackets": ("dirac", "admissibility"),
    "leaf": ("dirac",),
    "cartan": ("algebroid",),
    "jacobi": (),
}
STAGE_ORDER = tuple(STAGES)

# check ids each stage emits, so that a skipped stage still reports every id
STAGE_CHECKS = {
    "algebroid": ("lie_algebroid[A]", "lie_algebroid[A*]"),
    "cocycle": ("cocycle[A]", "cocycle[A*]"),
    "bialgebroid": ("genbialgebroid",),
    "theorem1": ("theorem1",),
    "courant": tuple(f"courant_axiom{k}" for k in range(1, 6)) + ("courant_D_routes",),
    "dirac": ("dirac",),
    "embedding": ("prop1",),
    "admissibility": ("prop2", "one_admissible"),
    "brackets": ("eq_hom", "jacobi_algebra", "homogeneous_poisson", "homogeneous_poisson_mutation"),
    "leaf": ("leaf_condition",),
    "cartan": ("cartan[A]", "cartan[A*]"),
    "jacobi": ("jacobi_manifold", "poissonization"),
}


@dataclass
class Instance:
    """Everything a document describes, built into checker objects."""

    doc: StructureDocument
    B: GenLieBialgebroid
    double: CourantDouble
    L: DiracSubbundle | None
    J: JacobiStructure | None

    @classmethod
    def from_document(cls, doc: StructureDocument, seed: int = DEFAULT_SEED) -> "Instance":
        r, n = doc.rank, doc.dim
        A = AlgebroidStructure(r, n, doc.A.bracket_dict(), doc.A.anchor, name="A")
        As = AlgebroidStructure(r, n, doc.Astar.bracket_dict(), doc.Astar.anchor, section_type=AForm, name="A*")
        B = GenLieBialgebroid(A, As, AForm.from_vector(doc.phi, r), Multivector.from_vector(doc.W, r), name=doc.name)
        C = CourantDouble(B, name=doc.name)
        L = None
        if doc.dirac is not None:
            gens = [DoubleSection(Multivector.from_vector(X, r), AForm.from_vector(a, r)) for X, a in doc.dirac]
            L = DiracSubbundle(C, gens, name=doc.name, seed=seed)
        J = None
        if doc.jacobi is not None:
            lam, E = doc.jacobi
            J = JacobiStructure(Multivector(n, dict(lam)), Multivector.from_vector(E, n))
        return cls(doc, B, C, L, J)


@dataclass
class Entry:
    check: str
    stage: str
    anchor: str
    status: str
    witness: str | None = None
    notes: list = field(default_factory=list)
    oracle: str = "n/a"
    expected: str | None = None
    timing: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        d = {
            "check": self.check,
            "stage": self.stage,
            "anchor": self.anchor,
            "status": self.status,
            "witness": self.witness,
            "notes": list(self.notes),
            "oracle": self.oracle,
        }
        if self.expected is not None:
            d["expected"] = self.expected
        if timing:
            d["timing"] = round(self.timing, 4)
        return d


@dataclass
class VerdictReport:
    document: str
    seed: int
    hatdual: str
    entries: list = field(default_factory=list)

    @property
    def failed(self) -> list:
        return [e for e in self.entries if e.status == "fail"]

    @property
    def passed(self) -> bool:
        return not self.failed

    @property
    def oracle_discrepancies(self) -> list:
        return [e for e in self.entries if e.oracle == "disagree"]

    @property
    def expectation_mismatches(self) -> list:
        return [e for e in self.entries if e.expected is not None and e.expected != e.status]

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def stage_status(self, stage: str) -> str | None:
        sts = [e.status for e in self.entries if e.stage == stage]
        if not sts:
            return None
        if "fail" in sts:
            return "fail"
        if all(s == "skipped" for s in sts):
            return "skipped"
        return "pass"

    def entry(self, check: str) -> Entry:
        return next(e for e in self.entries if e.check == check)


def _oracle(rep: CheckReport, points) -> str:
    if rep.status == "skipped":
        return "n/a"
    if rep.check == "theorem1":
        d = oracle_verdict(rep.data["direct_report"], points)
        e = oracle_verdict(rep.data["extended_report"], points)
        return "agree" if ((d == e) == rep.passed) else "disagree"
    return "agree" if oracle_verdict(rep, points) == rep.passed else "disagree"


def _selected(selection) -> list:
    if not selection:
        return list(STAGE_ORDER)
    unknown = [s for s in selection if s not in STAGES]
    if unknown:
        raise ValueError(f"unknown stage(s): {', '.join(unknown)}; choose from {', '.join(STAGE_ORDER)}")
    return [s for s in STAGE_ORDER if s in selection]


def _d_route_report(C: CourantDouble, probes) -> CheckReport:
    ids = []
    for f in probes:
        ids.append(Identity(f"D {f}: abstract = concrete", _pair(C.D_abstract(f)), _pair(C.D_concrete(f))))
        ids.append(Identity(f"D^theta {f}: abstract = concrete", _pair(C.D_theta_abstract(f)), _pair(C.D_theta_concrete(f))))
    return CheckReport.from_identities("courant_D_routes", "Def. 3 (b) and Theorem 3 (D, D^theta)", ids)


def _pair(e):
    return (e.X, e.alpha)


CHECK_ANCHORS = {
    "lie_algebroid[A]": "Lie algebroid axioms",
    "lie_algebroid[A*]": "Lie algebroid axioms",
    "cocycle[A]": "1-cocycle condition",
    "cocycle[A*]": "1-cocycle condition",
    "genbialgebroid": "Def. 1",
    "theorem1": "Theorem 1",
    **{f"courant_axiom{k}": f"Def. 3 axiom {k}" for k in range(1, 6)},
    "courant_D_routes": "Def. 3 (b) and Theorem 3 (D, D^theta)",
    "dirac": "Def. 4",
    "prop1": "Prop. 1",
    "prop2": "Prop. 2",
    "one_admissible": "Theorem 4 (admissibility of 1)",
    "eq_hom": "eq-hom",
    "jacobi_algebra": "Theorem 4 (Jacobi algebra)",
    "homogeneous_poisson": "Theorem 5 (homogeneous Poisson algebra)",
    "homogeneous_poisson_mutation": "Theorem 5 (weight mutation)",
    "leaf_condition": "Theorem 2 (pointwise dichotomy)",
    "cartan[A]": "d^2 = 0 and (d^phi)^2 = 0",
    "cartan[A*]": "d^2 = 0 and (d^phi)^2 = 0",
    "jacobi_manifold": "Jacobi manifold axioms",
    "poissonization": "Theorem 1 (Poissonization)",
}


def _skip_stage(stage: str, reason: str) -> list:
    return [CheckReport.skipped(c, CHECK_ANCHORS[c], reason) for c in STAGE_CHECKS[stage]]


def _stage_reports(stage: str, inst: Instance, probes, hatdual: str) -> list:
    B, C, L, J = inst.B, inst.double, inst.L, inst.J
    A, As = B.A, B.Astar
    if stage == "algebroid":
        return [A.check_lie_algebroid(), As.check_lie_algebroid()]
    if stage == "cocycle":
        return [A.check_cocycle(B.phi), As.check_cocycle(B.W)]
    if stage == "bialgebroid":
        return [check_genbialgebroid(B)]
    if stage == "theorem1":
        return [check_theorem1(B)]
    if stage == "courant":
        reps = list(C.check_axioms().values())
        reps.append(_d_route_report(C, C.default_probes()))
        return reps
    if stage == "cartan":
        return [check_cartan(A, B.phi), check_cartan(As, B.W)]
    if stage == "jacobi":
        if J is None:
            return _skip_stage(stage, "document has no Jacobi structure")
        return [check_jacobi_manifold(J), check_poissonization(J)]
    # stages below need Dirac generators
    if L is None:
        return _skip_stage(stage, "document has no Dirac generators")
    if stage == "dirac":
        return [check_dirac(L)]
    if stage == "embedding":
        return [check_prop1(L, hatdual)]
    if stage == "admissibility":
        return [check_prop2(L, probes, hatdual), check_one_admissible(L)]
    if stage == "brackets":
        return _bracket_reports(L, probes, hatdual)
    if stage == "leaf":
        return [_leaf_report(L)]
    raise ValueError(stage)


def _bracket_reports(L: DiracSubbundle, probes, hatdual: str) -> list:
    adm = [f for f, _ in admissible_probes(L, probes)]
    pairs = list(combinations_with_replacement(adm, 2))
    out = [check_homogeneity_pairs(L, pairs, hatdual), check_jacobi_algebra(L, adm)]
    Lt = embed(L, hatdual)
    hp = check_homogeneous_poisson(Lt, L, [(1, f) for f in adm])
    out.append(hp)
    # Weight exp(2t) on one probe, with the witness formula Y_f + d~(exp(2t) f).
    # That formula is a genuine witness when Y_f = 0, and then homogeneity
    # survives (it is a property of the bracket), so only probes with Y_f != 0
    # and a nonzero bracket partner can show the break.
    anchor = "Theorem 5 (weight mutation)"
    live = [f for f in adm if not f.is_constant() and any(not bracket_L(L, f, g).is_zero() for g in adm)]
    movable = [f for f in live if any(not RatioElem.lift(y).is_zero() for y in is_admissible(L, f).Y)]
    if not live:
        out.append(CheckReport.skipped("homogeneous_poisson_mutation", anchor,
                                       "{,}_L vanishes on all admissible probe pairs; the weight mutation is invisible"))
    elif not movable:
        out.append(CheckReport.skipped("homogeneous_poisson_mutation", anchor,
                                       "Y_f = 0 on every probe with a nonzero bracket; Y_f + d~(exp(2t) f) is then a "
                                       "genuine witness and homogeneity holds"))
    else:
        f0 = movable[0]
        mutated = check_homogeneous_poisson(Lt, L, [(2, f0)] + [(1, f) for f in adm if f != f0])
        broken = not all(i.holds() for i in mutated.identities if i.label.startswith("homogeneity"))
        out.append(
            CheckReport(
                check="homogeneous_poisson_mutation",
                anchor=anchor,
                passed=broken,
                witness=None if broken else f"weight-2 probe exp(2t)*{f0} did not break homogeneity",
                notes=[f"weight 2 on exp(2t)*{f0}: homogeneity {'broken' if broken else 'intact'}"],
                data={"oracle_verdict": not all(i.holds_at(p) for i in mutated.identities if i.label.startswith("homogeneity") for p in L.points())},
            )
        )
    return out


def _leaf_report(L: DiracSubbundle) -> CheckReport:
    D = characteristic_subbundle(L)
    cases = [leaf_condition(L, p).case for p in L.points()]
    notes = [
        f"D = L meet A has rank {D.rank}; pointwise ranks {D.pointwise_ranks} ({'regular' if D.regular else 'not regular'})",
        f"leaf dichotomy case per sample point: {cases}",
    ]
    return CheckReport(check="leaf_condition", anchor="Theorem 2 (pointwise dichotomy)", passed=True, notes=notes,
                       data={"cases": cases, "D_rank": D.rank, "regular": D.regular})


def run_checks(doc: StructureDocument, selection=None, seed: int = DEFAULT_SEED, probes=None, hatdual: str = "symmetric") -> VerdictReport:
    """Run the selected stages; dependents of a failed stage are skipped."""
    if hatdual not in HATDUAL_READINGS:
        raise ValueError(f"hatdual must be one of {HATDUAL_READINGS}")
    stages = _selected(selection)
    inst = Instance.from_document(doc, seed)
    if probes is None:
        probes = list(doc.probes) if doc.probes is not None else default_probes(doc.dim)
    if ONE not in probes:
        probes = [ONE] + list(probes)
    points = sample_points(doc.dim, seed)
    expected = doc.expected()
    known = {c for ids in STAGE_CHECKS.values() for c in ids}
    unknown = sorted(set(expected) - known)
    if unknown:
        raise ValueError(f"expect names unknown check(s): {', '.join(unknown)}")
    report = VerdictReport(doc.name, seed, hatdual)
    status: dict = {}
    for stage in stages:
        failed_deps = [d for d in STAGES[stage] if status.get(d) in ("fail", "skipped")]
        if failed_deps:
            reps = _skip_stage(stage, f"skipped: {', '.join(failed_deps)} did not pass")
            timings = [0.0] * len(reps)
        else:
            t0 = time.perf_counter()
            reps = _stage_reports(stage, inst, probes, hatdual)
            timings = [(time.perf_counter() - t0) / len(reps)] * len(reps)
        for rep, dt in zip(reps, timings):
            report.entries.append(
                Entry(
                    check=rep.check, stage=stage, anchor=rep.anchor, status=rep.status,
                    witness=rep.witness, notes=list(rep.notes), oracle=_oracle(rep, points),
                    expected=expected.get(rep.check), timing=dt,
                )
            )
        sts = [r.status for r in reps]
        status[stage] = "fail" if "fail" in sts else ("skipped" if all(s == "skipped" for s in sts) else "pass")
    return report


def emit_report(report: VerdictReport, fmt: str = "text", timing: bool = False) -> str:
    """Text table or a JSON document (sorted keys, no timing unless asked)."""
    if fmt == "json":
        data = {
            "document": report.document,
            "seed": report.seed,
            "hatdual": report.hatdual,
            "passed": report.passed,
            "entries": [e.as_dict(timing) for e in report.entries],
            "oracle_discrepancies": len(report.oracle_discrepancies),
            "expectation_mismatches": len(report.expectation_mismatches),
        }
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"document: {report.document or '(unnamed)'}   seed: {report.seed}   hatdual: {report.hatdual}"]
    width = max((len(e.check) for e in report.entries), default=10)
    for e in report.entries:
        mark = {"pass": "PASS", "fail": "FAIL", "skipped": "SKIP"}[e.status]
        extra = f"  [{e.timing * 1000:.0f} ms]" if timing else ""
        oracle = "" if e.oracle in ("agree", "n/a") else "  ORACLE DISAGREES"
        if e.expected is not None and e.expected != e.status:
            oracle += f"  (document expects {e.expected})"
        lines.append(f"{mark}  {e.check:<{width}}  {e.anchor}{oracle}{extra}")
        if e.witness:
            lines.append(f"      witness: {e.witness}")
        for n in e.notes:
            lines.append(f"      note: {n}")
    n_fail = len(report.failed)
    summary = f"{len(report.entries)} checks, {n_fail} failed, {len(report.oracle_discrepancies)} oracle discrepancies"
    if report.expectation_mismatches:
        summary += f", {len(report.expectation_mismatches)} differ from the document's expectations"
    lines.append(summary)
    return "\n".join(lines) + "\n"
