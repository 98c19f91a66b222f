import pytest

from algebroid_verify.algebroid import AlgebroidStructure, tangent_algebroid, zero_algebroid
from algebroid_verify.bialgebroid import (
    GenLieBialgebroid,
    JacobiStructure,
    check_genbialgebroid,
    check_jacobi_manifold,
    check_poissonization,
    check_theorem1,
    extend_pair,
    jacobi_bracket,
    poissonization,
)
from algebroid_verify.catalog import jacobi_bialgebroid, load_catalog, mutation_negatives
from algebroid_verify.exterior import AForm, Multivector, wedge
from algebroid_verify.ring import ONE, U_INV, ZERO, x
from helpers import NAMES, instance, with_jacobi


def pair(A, As, phi=None, W=None):
    r = A.rank
    return GenLieBialgebroid(A, As, phi or AForm.zero(r), W or Multivector.zero(r))


def dual_zero(A):
    return AlgebroidStructure(A.rank, A.base_dim, {}, None, section_type=AForm)


def test_trivial_pair_is_a_bialgebroid():
    A = zero_algebroid(2, 1)
    assert check_genbialgebroid(pair(A, dual_zero(A))).passed


def test_cocycle_precondition_reported():
    g = AlgebroidStructure(2, 0, {(0, 1): [ZERO, ONE]})
    rep = check_genbialgebroid(pair(g, dual_zero(g), phi=AForm.basis(1, 2)))
    assert not rep.passed
    assert "precondition" in rep.witness and rep.data["precondition_failed"]


def test_lie_algebra_with_cocycle_phi():
    g = AlgebroidStructure(2, 0, {(0, 1): [ZERO, ONE]})
    assert check_genbialgebroid(pair(g, dual_zero(g), phi=AForm.basis(0, 2))).passed


def test_nonzero_W_against_trivial_A_fails():
    A = zero_algebroid(1, 0)
    rep = check_genbialgebroid(pair(A, dual_zero(A), phi=AForm.basis(0, 1), W=Multivector.basis(0, 1)))
    # <phi, W> = 1 obstructs the second condition
    assert not rep.passed


def test_tangent_line_with_closed_phi():
    TM = tangent_algebroid(1)
    As = AlgebroidStructure(1, 1, {}, None, section_type=AForm)
    assert check_genbialgebroid(pair(TM, As, phi=AForm.basis(0, 1))).passed


def test_extended_pair_has_vanishing_cocycles():
    B = instance("jacobi_bialgebroid_plane").B
    E = extend_pair(B)
    assert E.phi.is_zero() and E.W.is_zero()
    assert E.time_extended and E.rank == B.rank


@pytest.mark.parametrize("name", NAMES)
def test_theorem1_on_catalog(name):
    rep = check_theorem1(instance(name).B)
    assert rep.passed, rep.witness
    assert rep.data["direct"] == rep.data["extended"]


def test_theorem1_on_mutation_negatives():
    docs = [load_catalog(n) for n in ("lie_algebra_phi_a1", "tangent_line_phi_dx", "poisson_graph", "jacobi_plane")]
    from algebroid_verify.checks import Instance

    for mutant, what in mutation_negatives(docs, 8, seed=3):
        rep = check_theorem1(Instance.from_document(mutant).B)
        assert not rep.data["direct"], what
        assert rep.passed, (what, rep.witness)


def test_mutation_negatives_are_seeded():
    docs = [load_catalog("poisson_graph"), load_catalog("lie_algebra_phi_a1")]
    a = [w for _, w in mutation_negatives(docs, 4, seed=11)]
    b = [w for _, w in mutation_negatives(docs, 4, seed=11)]
    assert a == b


# -- Jacobi structures ---------------------------------------------------------------


def test_jacobi_examples():
    d1, d2, d3 = (Multivector.basis(i, 3) for i in range(3))
    assert check_jacobi_manifold(JacobiStructure(wedge(d1, d2), d2)).passed
    assert check_jacobi_manifold(JacobiStructure(wedge(d1, d2), Multivector.zero(3))).passed
    bad = check_jacobi_manifold(JacobiStructure(wedge(d1, d2) * x(3), d3))
    assert not bad.passed


def test_contact_structure_is_jacobi():
    J = instance("contact_r3").J
    assert check_jacobi_manifold(J).passed
    assert check_poissonization(J).passed


@pytest.mark.parametrize("name", with_jacobi())
def test_poissonization_matches_jacobi_verdict(name):
    J = instance(name).J
    assert check_jacobi_manifold(J).passed == check_poissonization(J).passed


def test_non_jacobi_poissonization_residual():
    J = instance("jacobi_plane_bad_E").J
    rep = check_poissonization(J)
    assert not rep.passed
    assert not rep.identities[0].holds()


def test_poissonization_shape():
    d1, d2 = Multivector.basis(0, 2), Multivector.basis(1, 2)
    J = JacobiStructure(wedge(d1, d2), d2)
    P = poissonization(J)
    assert P.rank == 3
    assert P.terms[(0, 1)] == U_INV
    assert P.terms[(1, 2)] == -U_INV


def test_jacobi_bracket_examples():
    J = instance("jacobi_plane").J
    assert jacobi_bracket(J, x(1), x(2)) == 2 * x(1)
    assert jacobi_bracket(J, ONE, x(2)) == ONE
    assert jacobi_bracket(J, x(2), x(2)).is_zero()


def test_jacobi_bialgebroid_of_the_catalog_structure():
    J = instance("jacobi_plane").J
    B = jacobi_bialgebroid(J)
    assert B.rank == 3 and B.base_dim == 2
    assert check_genbialgebroid(B).passed
    assert B.W == Multivector.from_vector([-c for c in J.E.vector()] + [ZERO], 3)
