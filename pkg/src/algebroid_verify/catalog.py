"""Example structures: builders, the shipped structure files, and seeded mutations."""
from __future__ import annotations

import random
from dataclasses import replace
from importlib import resources

from .algebroid import AlgebroidStructure
from .bialgebroid import GenLieBialgebroid, JacobiStructure, jacobi_bracket
from .document import AlgebroidSpec, StructureDocument, parse_document, render_document
from .exterior import AForm, Multivector
from .ring import ONE, ZERO, RingElem, x

CATALOG_PACKAGE = "algebroid_verify.structures"


# -- shipped files -----------------------------------------------------------------

def catalog_names() -> list:
    files = resources.files(CATALOG_PACKAGE)
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".yaml"))


def catalog_text(name: str) -> str:
    path = resources.files(CATALOG_PACKAGE) / f"{name}.yaml"
    if not path.is_file():
        raise KeyError(f"no catalog entry named {name!r}; available: {', '.join(catalog_names())}")
    return path.read_text(encoding="utf-8")


def load_catalog(name: str) -> StructureDocument:
    return parse_document(catalog_text(name))


# -- builders ------------------------------------------------------------------

def _spec(S: AlgebroidStructure) -> AlgebroidSpec:
    return AlgebroidSpec(
        tuple(sorted((k, tuple(v)) for k, v in S.brackets.items())),
        tuple(tuple(row) for row in S.anchor),
    )


def document_from(
    name: str,
    B: GenLieBialgebroid,
    dirac=None,
    jacobi: JacobiStructure | None = None,
    probes=None,
    expect=None,
    description: str = "",
) -> StructureDocument:
    """A structure document describing ``B`` (and optional Dirac generators and Jacobi data)."""
    n, r = B.base_dim, B.rank
    jac = None
    if jacobi is not None:
        jac = (tuple(sorted(jacobi.Lambda.terms.items())), tuple(jacobi.E.vector()))
    gens = None
    if dirac is not None:
        gens = tuple((tuple(g.X.vector()), tuple(g.alpha.vector())) for g in dirac)
    return StructureDocument(
        name=name,
        description=description,
        dim=n,
        rank=r,
        A=_spec(B.A),
        Astar=_spec(B.Astar),
        phi=tuple(B.phi.vector()),
        W=tuple(B.W.vector()),
        coordinates=tuple(f"x{i + 1}" for i in range(n)),
        sections=tuple(f"X{i + 1}" for i in range(r)),
        dirac=gens,
        jacobi=jac,
        probes=tuple(probes) if probes is not None else None,
        expect=tuple(sorted(expect.items())) if expect else None,
    )


def _hamiltonian(J: JacobiStructure, f: RingElem) -> list:
    """Components of Lambda^#(df) + f E."""
    n = J.dim
    comps = [ZERO] * n
    for (i, j), c in J.Lambda.terms.items():
        comps[j] = comps[j] + c * f.partial_x(i)
        comps[i] = comps[i] - c * f.partial_x(j)
    E = J.E.vector()
    return [comps[k] + f * E[k] for k in range(n)]


def jacobi_bialgebroid(J: JacobiStructure) -> GenLieBialgebroid:
    """The generalized Lie bialgebroid (TM x R, phi = (0,1)), (T*M x R, W = (-E, 0)) of a Jacobi manifold.

    The dual is written on the basis eps_i = j1(x_i) - x_i j1(1), eps_{n+1} = j1(1)
    of 1-jets, with [j1 f, j1 g] = j1 {f, g} and anchor j1 f -> Lambda^#(df) + f E.
    """
    n = J.dim
    r = n + 1
    gens = [[(ONE, x(i + 1)), (-x(i + 1), ONE)] for i in range(n)] + [[(ONE, ONE)]]

    def jet(h):
        return [h.partial_x(k) for k in range(n)] + [h]

    def apply(V, g):
        return sum((V[k] * g.partial_x(k) for k in range(n)), ZERO)

    def bracket(S1, S2):
        out = [ZERO] * r

        def add(c, h):
            for k, v in enumerate(jet(h)):
                out[k] = out[k] + c * v

        for f, h in S1:
            for g, k in S2:
                add(f * g, jacobi_bracket(J, h, k))
                add(f * apply(_hamiltonian(J, h), g), k)
                add(-g * apply(_hamiltonian(J, k), f), h)
        return out

    brackets = {(a, b): bracket(gens[a], gens[b]) for a in range(r) for b in range(a + 1, r)}
    anchor = []
    for a in range(r):
        V = [ZERO] * n
        for c, h in gens[a]:
            V = [V[k] + c * hv for k, hv in enumerate(_hamiltonian(J, h))]
        anchor.append(V)
    Astar = AlgebroidStructure(r, n, brackets, anchor, section_type=AForm, name="A*")
    A = AlgebroidStructure(r, n, {}, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)] + [[ZERO] * n], name="A")
    W = Multivector.from_vector([-c for c in J.E.vector()] + [ZERO])
    return GenLieBialgebroid(A, Astar, AForm.basis(n, r), W)


def wade_pair(n: int) -> GenLieBialgebroid:
    """TM x R with phi = (0, 1) paired with the trivial dual."""
    r = n + 1
    A = AlgebroidStructure(r, n, {}, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)] + [[ZERO] * n], name="A")
    As = AlgebroidStructure(r, n, {}, None, section_type=AForm, name="A*")
    return GenLieBialgebroid(A, As, AForm.basis(n, r), Multivector.zero(r))


def jacobi_graph(J: JacobiStructure) -> list:
    """Generators of the graph of (Lambda, E) in (TM x R) + (T*M x R).

    dx_i -> Lambda^#(dx_i) - <dx_i, E> e_{n+1} + dx_i and e*_{n+1} -> E + e*_{n+1}.
    """
    from .courant import DoubleSection

    n = J.dim
    r = n + 1
    E = J.E.vector()
    gens = []
    for i in range(n):
        comps = [ZERO] * r
        for (a, b), c in J.Lambda.terms.items():
            if a == i:
                comps[b] = comps[b] + c
            if b == i:
                comps[a] = comps[a] - c
        comps[n] = -E[i]
        gens.append(DoubleSection(Multivector.from_vector(comps, r), AForm.basis(i, r)))
    gens.append(DoubleSection(Multivector.from_vector(list(E) + [ZERO], r), AForm.basis(n, r)))
    return gens


# -- seeded mutations -----------------------------------------------------------

_PERTURBATIONS = ("1", "-1", "x1", "2*x1", "x1^2", "-x2", "x1*x2")


def _perturbation(rng: random.Random, n: int) -> RingElem:
    from .expr import parse_expr

    choices = [p for p in _PERTURBATIONS if n >= 2 or "x2" not in p]
    if n == 0:
        choices = ["1", "-1", "2"]
    return parse_expr(rng.choice(choices))


def _bump(vec: tuple, k: int, delta: RingElem) -> tuple:
    return tuple(v + delta if m == k else v for m, v in enumerate(vec))


def mutate(doc: StructureDocument, rng: random.Random) -> tuple:
    """One random perturbation of a structure function, anchor entry or cocycle component.

    Returns the mutated document and a short description of the change.
    """
    r, n = doc.rank, doc.dim
    delta = _perturbation(rng, n)
    targets = ["A.bracket", "Astar.bracket", "phi", "W"]
    if n:
        targets += ["A.anchor", "Astar.anchor"]
    target = rng.choice(targets)
    k = rng.randrange(r)
    if target in ("phi", "W"):
        new = replace(doc, **{target: _bump(getattr(doc, target), k, delta)})
        what = f"{target}[{k + 1}] += {delta}"
    elif target.endswith("bracket"):
        if r < 2:
            return mutate(doc, rng)
        side = "A" if target.startswith("A.") else "Astar"
        spec = getattr(doc, side)
        i, j = sorted(rng.sample(range(r), 2))
        table = dict(spec.brackets)
        table[(i, j)] = _bump(table.get((i, j), (ZERO,) * r), k, delta)
        table = {key: v for key, v in table.items() if any(not c.is_zero() for c in v)}
        new = replace(doc, **{side: AlgebroidSpec(tuple(sorted(table.items())), spec.anchor)})
        what = f"{side} [{i + 1},{j + 1}] component {k + 1} += {delta}"
    else:
        side = "A" if target.startswith("A.") else "Astar"
        spec = getattr(doc, side)
        j = rng.randrange(n)
        rows = tuple(_bump(row, j, delta) if m == k else row for m, row in enumerate(spec.anchor))
        new = replace(doc, **{side: AlgebroidSpec(spec.brackets, rows)})
        what = f"{side} anchor a({k + 1})^{j + 1} += {delta}"
    return replace(new, name=f"{doc.name}~mut", expect=None), what


def mutation_negatives(docs: list, count: int, seed: int = 0, max_tries: int = 2000) -> list:
    """``count`` seeded mutants of ``docs`` that fail the generalized bialgebroid check.

    Returns (document, description) pairs.
    """
    from .bialgebroid import check_genbialgebroid
    from .checks import Instance

    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        base = docs[rng.randrange(len(docs))]
        mutant, what = mutate(base, rng)
        inst = Instance.from_document(mutant)
        if not check_genbialgebroid(inst.B).passed:
            out.append((replace(mutant, name=f"{base.name}~mut{len(out) + 1}"), what))
    if len(out) < count:
        raise RuntimeError(f"found only {len(out)} failing mutants in {max_tries} tries")
    return out


def write_catalog_file(doc: StructureDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_document(doc))
