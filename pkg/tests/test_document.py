import textwrap

import pytest

from algebroid_verify.catalog import catalog_names, catalog_text, load_catalog
from algebroid_verify.checks import run_checks
from algebroid_verify.document import DocumentError, parse_document, render_document
from algebroid_verify.ring import ONE, ZERO, x

MINIMAL = textwrap.dedent(
    """\
    name: g
    base: {dim: 1}
    bundle: {rank: 2}
    A:
      brackets:
        - {pair: [1, 2], value: ["0", "x1"]}
      anchor: [["1"], ["0"]]
    phi: ["1/2", "0"]
    """
)


def parse(text):
    return parse_document(textwrap.dedent(text))


def error(text) -> DocumentError:
    with pytest.raises(DocumentError) as err:
        parse(text)
    return err.value


def test_minimal_document_defaults():
    doc = parse_document(MINIMAL)
    assert (doc.dim, doc.rank) == (1, 2)
    assert doc.coordinates == ("x1",) and doc.sections == ("X1", "X2")
    assert doc.A.brackets == (((0, 1), (ZERO, x(1))),)
    assert doc.A.anchor == ((ONE,), (ZERO,))
    assert doc.Astar.brackets == () and doc.Astar.anchor == ((ZERO,), (ZERO,))
    assert doc.W == (ZERO, ZERO)
    assert doc.dirac is None and doc.jacobi is None and doc.expect is None


def test_reversed_pair_is_negated():
    doc = parse_document(MINIMAL.replace("pair: [1, 2], value: [\"0\", \"x1\"]", "pair: [2, 1], value: [\"0\", \"x1\"]"))
    assert doc.A.brackets == (((0, 1), (ZERO, -x(1))),)


@pytest.mark.parametrize("name", catalog_names())
def test_catalog_round_trip(name):
    doc = load_catalog(name)
    text = render_document(doc)
    assert parse_document(text) == doc
    assert render_document(parse_document(text)) == text
    assert catalog_text(name) == text


def test_antisymmetry_violation_located():
    e = error(
        """\
        base: {dim: 0}
        bundle: {rank: 2}
        A:
          brackets:
            - {pair: [1, 2], value: ["0", "1"]}
            - {pair: [2, 1], value: ["0", "1"]}
        """
    )
    assert "antisymmetry" in e.message
    assert (e.line, e.column) == (6, 7)


def test_self_bracket_must_vanish():
    e = error(
        """\
        base: {dim: 0}
        bundle: {rank: 1}
        A:
          brackets: [{pair: [1, 1], value: ["1"]}]
        """
    )
    assert "itself" in e.message and e.line == 4


def test_bad_expression_column_points_into_the_scalar():
    e = error(
        """\
        base: {dim: 1}
        bundle: {rank: 1}
        phi: ["x1 $ 2"]
        """
    )
    # the quote opens at column 7; '$' is the fourth character inside it
    assert (e.line, e.column) == (3, 11)
    assert "phi[1]" in e.message


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("base: {dim: 1}\n", "bundle", 1),
        ("base: {dim: 4}\nbundle: {rank: 1}\n", "out of range", 1),
        ("base: {dim: 1}\nbundle: {rank: 1}\ncolour: red\n", "unknown key", 3),
        ("base: {dim: 1}\nbundle: {rank: 2}\nphi: [\"1\"]\n", "2 entries", 3),
        ("base: {dim: 1}\nbundle: {rank: 1}\nphi: [\"x2\"]\n", "phi[1]", 3),
        ("base: {dim: 1}\nbundle: {rank: 1}\nphi: [\"t\"]\n", "may not involve t", 3),
        ("base: {dim: 1}\nbundle: {rank: 1}\nexpect: {dirac: maybe}\n", "expected status", 3),
        ("base: {dim: 0}\nbundle: {rank: 1}\njacobi: {E: []}\n", "dimension at least 1", 3),
        ("base: {dim: 1}\nbundle: {rank: 2}\ndirac: [{X: [\"1\", \"0\"]}]\n", "2 generators", 3),
        ("base: [1\n", "syntax error", 2),
        ("", "empty", 1),
    ],
)
def test_errors_carry_positions(text, fragment, line):
    e = error(text)
    assert fragment in e.message
    assert e.line == line and e.column is not None
    assert str(e).startswith(f"line {line}, column ")


def test_unknown_expectation_rejected_at_run_time():
    doc = parse_document(MINIMAL + "expect: {genbialgebroid: pass, no_such_check: fail}\n")
    with pytest.raises(ValueError, match="no_such_check"):
        run_checks(doc)


def test_jacobi_section_normalized():
    doc = parse(
        """\
        base: {dim: 2}
        bundle: {rank: 2}
        jacobi:
          Lambda: [{wedge: [2, 1], coeff: "x1"}]
          E: ["0", "1"]
        """
    )
    (((i, j), c),), E = doc.jacobi
    assert (i, j) == (0, 1) and c == -x(1)
    assert E == (ZERO, ONE)
