# tests for surface presentations, bending and the Zariski-closure verdict

import pytest

from arithlab.core.errors import (
    CommutationViolation,
    DetNotOne,
    InputError,
    NonpositiveMultiplier,
    NonSplitSpectrum,
    ProductNotOne,
    RelatorViolation,
    UnsupportedBasis,
)
from arithlab.models.fixtures import load_surface
from arithlab.services import bend as bd
from arithlab.services.suites import VERDICT_FIXTURES, bend_fixture, surface_images, surface_rep
from arithlab.utils import matrices as mx


def test_presentation_words():
    """Test the relator and the separating word of genus 2"""
    pres = bd.SurfacePresentation(2, 1)
    assert pres.generators == ["a1", "b1", "a2", "b2"]
    assert pres.relator == [1, 2, -1, -2, 3, 4, -3, -4]
    assert pres.gamma_word(1) == [1, 2, -1, -2]
    assert pres.is_c_side(0) and pres.is_c_side(1)
    assert not pres.is_c_side(2)


def test_presentation_bounds():
    """Test genus and separating index ranges"""
    with pytest.raises(InputError):
        bd.SurfacePresentation(1)
    with pytest.raises(InputError):
        bd.SurfacePresentation(2, 2)


def test_relator_violation(q):
    """Test that images breaking the relator are refused"""
    a, b, _, _ = surface_images(q)
    with pytest.raises(RelatorViolation):
        bd.rep_from_images(bd.SurfacePresentation(2, 1), [a, b, a, b])


def test_det_not_one(q):
    """Test that images outside SL are refused"""
    m = mx.diag([2, 1], q)
    with pytest.raises(DetNotOne):
        bd.rep_from_images(bd.SurfacePresentation(2, 1), [m, m, m, m])


def test_fixture_file_builds(fixture_dir):
    """Test that the genus-2 fixture lifts to dimension 3"""
    fixture, _ = load_surface(fixture_dir / "genus2_surface.json")
    rep = fixture.build()
    assert rep.n == 3
    assert rep.sl2 is not None
    assert bd.relator_holds(rep)


def test_eigen_decomposition(q):
    """Test the commutator eigenvalue 4 and the tau_3 eigenbasis"""
    rep = surface_rep()
    eig = bd.eigen_decompose(rep.gamma(1), 3)
    assert eig.lam == q(4)
    assert eig.values == [q(16), q(1), q("1/16")]


def test_parabolic_commutator_rejected(q):
    """Test that a parabolic rho(gamma) has no eigenbasis"""
    with pytest.raises(NonSplitSpectrum):
        bd.eigen_decompose(mx.matrix([[1, 1], [0, 1]], q), 3)


def test_identity_bending():
    """Test that B = I leaves the representation unchanged"""
    lift, datum, bent = bend_fixture(3, ["1", "1", "1"])
    assert mx.equal(datum.matrix, mx.identity(3, lift.field))
    assert bent.same_images(lift)


def test_bending_keeps_gamma():
    """Test that bending fixes rho(gamma) and the relator"""
    lift, datum, bent = bend_fixture(3, ["76", "1/5776", "76"])
    assert bd.relator_holds(bent)
    assert mx.equal(bent.gamma(1), lift.gamma(1))
    assert not bent.same_images(lift)


def test_multipliers_must_multiply_to_one():
    """Test the determinant condition on multipliers"""
    lift = bd.fuchsian_lift(3, surface_rep())
    with pytest.raises(ProductNotOne):
        bd.make_bending_element(lift, 1, ["2", "2", "2"])


def test_multipliers_must_be_positive():
    """Test the positivity condition at the designated place"""
    lift = bd.fuchsian_lift(3, surface_rep())
    with pytest.raises(NonpositiveMultiplier):
        bd.make_bending_element(lift, 1, ["-1", "-1", "1"])


def test_non_fuchsian_rep_unsupported():
    """Test that B needs the eigenbasis of a Fuchsian lift"""
    lift = bd.fuchsian_lift(3, surface_rep())
    plain = bd.rep_from_images(lift.presentation, lift.images)
    with pytest.raises(UnsupportedBasis):
        bd.make_bending_element(plain, 1, ["1", "1", "1"])


def test_non_commuting_element_rejected(q):
    """Test that bend refuses B outside the centralizer"""
    lift = bd.fuchsian_lift(3, surface_rep())
    b = mx.matrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]], q)
    datum = bd.BendingDatum(b, 1)
    with pytest.raises(CommutationViolation):
        bd.bend(lift, datum)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_centralizer_dimension(n):
    """Test that the regular element tau_n(gamma) has an n-dimensional centralizer"""
    lift = bd.fuchsian_lift(n, surface_rep())
    basis = bd.centralizer_basis(lift.gamma(1))
    assert len(basis) == n
    g = lift.gamma(1)
    for x in basis:
        assert mx.equal(x @ g, g @ x)


def test_double_bend_composes():
    """Test that bending twice equals bending by the product"""
    lift, datum, _ = bend_fixture(3, ["76", "1/5776", "76"])
    twice = bd.double_bend(lift, datum, datum.power(2))
    once = bd.bend(lift, datum.power(3))
    assert twice.same_images(once)


@pytest.mark.parametrize("expected,mults", VERDICT_FIXTURES)
def test_zariski_verdicts(expected, mults):
    """Test the verdict and its agreement with the invariant-form count"""
    n = len(mults)
    _, datum, bent = bend_fixture(n, mults)
    verdict = bd.zariski_classify(bent, datum, n)
    assert verdict == expected
    forms = bd.invariant_form_solver(bent.images)
    assert bd.verdict_agrees(verdict, forms, n)


def test_verdict_form_kinds():
    """Test the form counts behind Sp, SO and SL"""
    _, _, bent = bend_fixture(4, ["2", "3", "1/3", "1/2"])
    assert bd.invariant_form_solver(bent.images).kind == "alternating"
    _, _, bent = bend_fixture(5, ["2", "3", "1", "1/3", "1/2"])
    assert bd.invariant_form_solver(bent.images).kind == "symmetric"
    _, _, bent = bend_fixture(3, ["76", "1/5776", "76"])
    assert bd.invariant_form_solver(bent.images).dimension == 0


def test_classify_needs_eigenbasis(q):
    """Test that a datum without a basis cannot be classified"""
    lift = bd.fuchsian_lift(3, surface_rep())
    datum = bd.BendingDatum(mx.identity(3, q), 1)
    with pytest.raises(UnsupportedBasis):
        bd.zariski_classify(lift, datum, 3)
