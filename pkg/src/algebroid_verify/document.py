"""Structure files: a YAML mapping whose leaves are expression strings.

Layout (indices are 1-based, omitted parts are zero)::

    name: poisson_graph
    base: {dim: 2, coordinates: [x1, x2]}
    bundle: {rank: 2, sections: [X1, X2]}
    A:
      brackets:
        - {pair: [1, 2], value: ["0", "1"]}     # [X1, X2] = X2
      anchor: [["1", "0"], ["0", "1"]]          # row i: a(X_i) in d/dx_j
    Astar: {brackets: [], anchor: []}
    phi: ["0", "0"]
    W: ["0", "0"]
    dirac:
      - {X: ["0", "1"], alpha: ["1", "0"]}
    jacobi:
      Lambda: [{wedge: [1, 2], coeff: "1"}]
      E: ["0", "0"]
    probes: ["x1", "x2"]
    expect: {genbialgebroid: pass}
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import yaml

from .expr import ExpressionError, parse_expr, render
from .ring import ZERO

STATUSES = ("pass", "fail", "skipped")


class DocumentError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class AlgebroidSpec:
    brackets: tuple = ()  # ((i, j), coefficient tuple) with i < j, 0-based
    anchor: tuple = ()  # rank rows of base-dim entries

    def bracket_dict(self) -> dict:
        return {k: list(v) for k, v in self.brackets}


@dataclass(frozen=True)
class StructureDocument:
    name: str
    dim: int
    rank: int
    A: AlgebroidSpec
    Astar: AlgebroidSpec
    phi: tuple
    W: tuple
    coordinates: tuple = ()
    sections: tuple = ()
    description: str = ""
    dirac: tuple | None = None  # ((X tuple, alpha tuple), ...)
    jacobi: tuple | None = None  # (((i, j), coeff), ...), E tuple
    probes: tuple | None = None
    expect: tuple | None = None  # ((check, status), ...)

    def expected(self) -> dict:
        return dict(self.expect or ())


# -- node helpers ---------------------------------------------------------------

def _pos(node):
    m = node.start_mark
    return m.line + 1, m.column + 1


def _err(node, message):
    line, col = _pos(node)
    return DocumentError(message, line, col)


def _mapping(node, what, allowed):
    if not isinstance(node, yaml.MappingNode):
        raise _err(node, f"{what} must be a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            raise _err(k, f"{what}: keys must be plain names")
        if k.value not in allowed:
            raise _err(k, f"{what}: unknown key {k.value!r} (expected one of {', '.join(allowed)})")
        if k.value in out:
            raise _err(k, f"{what}: duplicate key {k.value!r}")
        out[k.value] = v
    return out


def _seq(node, what):
    if isinstance(node, yaml.ScalarNode) and node.tag.endswith(":null"):
        return []
    if not isinstance(node, yaml.SequenceNode):
        raise _err(node, f"{what} must be a list")
    return node.value


def _int(node, what, lo=None, hi=None):
    if not isinstance(node, yaml.ScalarNode) or not node.tag.endswith(":int"):
        raise _err(node, f"{what} must be an integer")
    v = int(node.value)
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise _err(node, f"{what} = {v} out of range [{lo}, {hi}]")
    return v


def _str(node, what):
    if not isinstance(node, yaml.ScalarNode):
        raise _err(node, f"{what} must be text")
    return node.value


def _expr(node, n, what):
    if not isinstance(node, yaml.ScalarNode):
        raise _err(node, f"{what} must be an expression string")
    try:
        v = parse_expr(node.value, n_vars=n)
    except ExpressionError as e:
        line, col = _pos(node)
        shift = 1 if node.style in ("'", '"') else 0
        raise DocumentError(f"{what}: {e}", line, col + shift + e.pos) from None
    if not v.is_time_free():
        raise _err(node, f"{what}: structures on the base may not involve t or exp(t)")
    return v


def _vector(node, length, n, what):
    items = _seq(node, what)
    if len(items) != length:
        raise _err(node, f"{what} must have {length} entries, got {len(items)}")
    return tuple(_expr(v, n, f"{what}[{i + 1}]") for i, v in enumerate(items))


def _index_pair(node, r, what):
    items = _seq(node, what)
    if len(items) != 2:
        raise _err(node, f"{what} must list two indices")
    return tuple(_int(v, what, 1, r) - 1 for v in items)


def _algebroid(node, r, n, what):
    if node is None:
        return AlgebroidSpec((), tuple((ZERO,) * n for _ in range(r)))
    m = _mapping(node, what, ("brackets", "anchor"))
    table: dict = {}
    for entry in _seq(m["brackets"], f"{what}.brackets") if "brackets" in m else []:
        e = _mapping(entry, f"{what}.brackets entry", ("pair", "value"))
        if "pair" not in e or "value" not in e:
            raise _err(entry, f"{what}.brackets entry needs 'pair' and 'value'")
        i, j = _index_pair(e["pair"], r, f"{what}.brackets pair")
        val = _vector(e["value"], r, n, f"{what}.brackets [{i + 1},{j + 1}]")
        if i == j:
            if any(not c.is_zero() for c in val):
                raise _err(entry, f"antisymmetry violated: bracket of section {i + 1} with itself must vanish")
            continue
        if i > j:
            i, j, val = j, i, tuple(-c for c in val)
        if (i, j) in table and table[(i, j)] != val:
            raise _err(entry, f"antisymmetry violated: brackets [{i + 1},{j + 1}] and [{j + 1},{i + 1}] are inconsistent")
        table[(i, j)] = val
    rows = _seq(m["anchor"], f"{what}.anchor") if "anchor" in m else []
    if rows and len(rows) != r:
        raise _err(m["anchor"], f"{what}.anchor needs {r} rows, got {len(rows)}")
    anchor = (
        tuple(_vector(row, n, n, f"{what}.anchor row {i + 1}") for i, row in enumerate(rows))
        if rows
        else tuple((ZERO,) * n for _ in range(r))
    )
    return AlgebroidSpec(tuple(sorted((k, v) for k, v in table.items() if any(not c.is_zero() for c in v))), anchor)


TOP_KEYS = ("name", "description", "base", "bundle", "A", "Astar", "phi", "W", "dirac", "jacobi", "probes", "expect")


def parse_document(text: str) -> StructureDocument:
    """Parse and validate a structure file; errors carry line and column."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        raise DocumentError(f"syntax error: {e.problem or e.context}", mark.line + 1 if mark else None, mark.column + 1 if mark else None) from None
    if root is None:
        raise DocumentError("empty document", 1, 1)
    top = _mapping(root, "document", TOP_KEYS)
    for req in ("base", "bundle"):
        if req not in top:
            raise _err(root, f"missing required section {req!r}")
    base = _mapping(top["base"], "base", ("dim", "coordinates"))
    if "dim" not in base:
        raise _err(top["base"], "base needs 'dim'")
    n = _int(base["dim"], "base.dim", 0, 3)
    coords = tuple(_str(c, "coordinate name") for c in _seq(base["coordinates"], "base.coordinates")) if "coordinates" in base else tuple(f"x{i + 1}" for i in range(n))
    if len(coords) != n:
        raise _err(base["coordinates"], f"base.coordinates must name {n} coordinates")
    bundle = _mapping(top["bundle"], "bundle", ("rank", "sections"))
    if "rank" not in bundle:
        raise _err(top["bundle"], "bundle needs 'rank'")
    r = _int(bundle["rank"], "bundle.rank", 1, 4)
    secs = tuple(_str(c, "section name") for c in _seq(bundle["sections"], "bundle.sections")) if "sections" in bundle else tuple(f"X{i + 1}" for i in range(r))
    if len(secs) != r:
        raise _err(bundle["sections"], f"bundle.sections must name {r} sections")

    A = _algebroid(top.get("A"), r, n, "A")
    As = _algebroid(top.get("Astar"), r, n, "Astar")
    phi = _vector(top["phi"], r, n, "phi") if "phi" in top else (ZERO,) * r
    W = _vector(top["W"], r, n, "W") if "W" in top else (ZERO,) * r

    dirac = None
    if "dirac" in top:
        gens = []
        items = _seq(top["dirac"], "dirac")
        if len(items) != r:
            raise _err(top["dirac"], f"dirac needs {r} generators, got {len(items)}")
        for k, g in enumerate(items):
            gm = _mapping(g, f"dirac generator {k + 1}", ("X", "alpha"))
            X = _vector(gm["X"], r, n, f"dirac[{k + 1}].X") if "X" in gm else (ZERO,) * r
            al = _vector(gm["alpha"], r, n, f"dirac[{k + 1}].alpha") if "alpha" in gm else (ZERO,) * r
            gens.append((X, al))
        dirac = tuple(gens)

    jacobi = None
    if "jacobi" in top:
        if n == 0:
            raise _err(top["jacobi"], "a Jacobi structure needs a base of dimension at least 1")
        jm = _mapping(top["jacobi"], "jacobi", ("Lambda", "E"))
        lam: dict = {}
        for entry in _seq(jm["Lambda"], "jacobi.Lambda") if "Lambda" in jm else []:
            e = _mapping(entry, "jacobi.Lambda entry", ("wedge", "coeff"))
            if "wedge" not in e or "coeff" not in e:
                raise _err(entry, "jacobi.Lambda entry needs 'wedge' and 'coeff'")
            i, j = _index_pair(e["wedge"], n, "jacobi.Lambda wedge")
            c = _expr(e["coeff"], n, "jacobi.Lambda coeff")
            if i == j:
                raise _err(entry, "a wedge of a coordinate field with itself vanishes")
            if i > j:
                i, j, c = j, i, -c
            lam[(i, j)] = lam.get((i, j), ZERO) + c
        E = _vector(jm["E"], n, n, "jacobi.E") if "E" in jm else (ZERO,) * n
        jacobi = (tuple(sorted((k, v) for k, v in lam.items() if not v.is_zero())), E)

    probes = None
    if "probes" in top:
        probes = tuple(_expr(p, n, "probe") for p in _seq(top["probes"], "probes"))

    expect = None
    if "expect" in top:
        em = top["expect"]
        if not isinstance(em, yaml.MappingNode):
            raise _err(em, "expect must be a mapping")
        pairs = []
        for k, v in em.value:
            status = _str(v, "expected status")
            if status not in STATUSES:
                raise _err(v, f"expected status must be one of {STATUSES}")
            pairs.append((_str(k, "check name"), status))
        expect = tuple(sorted(pairs))

    return StructureDocument(
        name=_str(top["name"], "name") if "name" in top else "",
        description=_str(top["description"], "description") if "description" in top else "",
        dim=n, rank=r, A=A, Astar=As, phi=phi, W=W,
        coordinates=coords, sections=secs,
        dirac=dirac, jacobi=jacobi, probes=probes, expect=expect,
    )


# -- rendering -----------------------------------------------------------------

def _rv(vec):
    return [render(v) for v in vec]


def _ralg(spec: AlgebroidSpec):
    return {
        "brackets": [{"pair": [i + 1, j + 1], "value": _rv(v)} for (i, j), v in spec.brackets],
        "anchor": [_rv(row) for row in spec.anchor],
    }


def to_data(doc: StructureDocument) -> dict:
    data: dict[str, Any] = {"name": doc.name}
    if doc.description:
        data["description"] = doc.description
    data["base"] = {"dim": doc.dim, "coordinates": list(doc.coordinates)}
    data["bundle"] = {"rank": doc.rank, "sections": list(doc.sections)}
    data["A"] = _ralg(doc.A)
    data["Astar"] = _ralg(doc.Astar)
    data["phi"] = _rv(doc.phi)
    data["W"] = _rv(doc.W)
    if doc.dirac is not None:
        data["dirac"] = [{"X": _rv(X), "alpha": _rv(a)} for X, a in doc.dirac]
    if doc.jacobi is not None:
        lam, E = doc.jacobi
        data["jacobi"] = {"Lambda": [{"wedge": [i + 1, j + 1], "coeff": render(c)} for (i, j), c in lam], "E": _rv(E)}
    if doc.probes is not None:
        data["probes"] = _rv(doc.probes)
    if doc.expect is not None:
        data["expect"] = dict(doc.expect)
    return data


class _Dumper(yaml.SafeDumper):
    pass


def _str_presenter(dumper, value):
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style='"' if value and not value.isidentifier() else None)


def _list_presenter(dumper, value):
    # rows of scalars read best on one line
    flat = all(isinstance(v, (str, int)) for v in value)
    return dumper.represent_sequence("tag:yaml.org,2002:seq", value, flow_style=True if flat else None)


_Dumper.add_representer(str, _str_presenter)
_Dumper.add_representer(list, _list_presenter)


def render_document(doc: StructureDocument) -> str:
    return yaml.dump(to_data(doc), Dumper=_Dumper, sort_keys=False, default_flow_style=None, width=100)


def load_document(path) -> StructureDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
