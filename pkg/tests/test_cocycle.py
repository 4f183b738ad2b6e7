# tests for Galois cocycles, Hilbert 90 and the explicit S and P matrices

import pytest

from arithlab.core.errors import FieldMismatch, IncompleteTable
from arithlab.services import cocycle as cc
from arithlab.services.numfield import BaseField, GaloisChar, NumberField
from arithlab.services.symrep import j_form, tau
from arithlab.utils import matrices as mx

PARAMS = [(2, 3, 5), (5, 2, 3), (2, 2, 3)]


@pytest.mark.parametrize("a,b,d", PARAMS)
def test_constructed_cocycles_satisfy_axiom(a, b, d):
    """Test the cocycle identity for T, eta, chi and the compatible cocycles"""
    assert cc.is_cocycle(cc.t_cocycle(a, b))
    assert cc.is_cocycle(cc.eta_cocycle(a, b, 2))
    assert cc.is_cocycle(cc.chi_lift(a, b, 3))
    assert cc.is_cocycle(cc.compatible_cocycle(a, b, 3, "inner"))
    assert cc.is_cocycle(cc.compatible_cocycle(a, b, 3, "outer", d))


def test_pushforward_projectivity():
    """Test that tau_n o T is linear exactly for odd n"""
    t = cc.t_cocycle(2, 3)
    assert cc.pushforward(t, 4).projective
    assert not cc.pushforward(t, 3).projective


@pytest.mark.parametrize("n", [3, 5, 7])
def test_hilbert90_round_trip(n):
    """Test zeta(sigma) = S^-1 sigma(S) for the solver output"""
    zeta = cc.pushforward(cc.t_cocycle(2, 3), n)
    sol = cc.hilbert90_solve(zeta, seed=0)
    assert sol.relation_checked
    assert cc.is_coboundary_of(zeta, sol.s)


def test_hilbert90_is_seeded():
    """Test that the same seed gives the same S"""
    zeta = cc.pushforward(cc.t_cocycle(3, 5), 3)
    first = cc.hilbert90_solve(zeta, seed=11)
    second = cc.hilbert90_solve(zeta, seed=11)
    assert mx.equal(first.s, second.s)


def test_hilbert90_needs_linear_cocycle():
    """Test that projective tables are refused"""
    with pytest.raises(FieldMismatch):
        cc.hilbert90_solve(cc.t_cocycle(2, 3))


def test_transported_form_is_rational():
    """Test that J_n carried along S is defined over the base"""
    zeta = cc.pushforward(cc.t_cocycle(2, 3), 5)
    sol = cc.hilbert90_solve(zeta, seed=0)
    form = cc.transported_form(sol.s, j_form(5, zeta.field))
    assert cc.is_galois_invariant(form)
    assert cc.values_preserve_form(zeta, j_form(5, zeta.field))


def test_fixed_points_of_trivial_cocycle():
    """Test that rational matrices are fixed by the trivial cocycle and irrational ones are not"""
    field = NumberField(BaseField(), [2])
    zeta = cc.trivial_cocycle(field, 2)
    assert cc.fixed_points_member(zeta, mx.matrix([[1, 1], [0, 1]], field))
    assert not cc.fixed_points_member(zeta, mx.matrix([[1, field.gen(0)], [0, 1]], field))


def test_twisted_fixed_points_contain_tau_image():
    """Test that tau_3 of a norm-one element of (2, 3) lies in the twisted group"""
    zeta = cc.pushforward(cc.t_cocycle(2, 3), 3)
    field = zeta.field
    sa, sb = field.gen(0), field.gen(1)
    # x = 3 + 2i embeds as diag(3 + 2 sqrt 2, 3 - 2 sqrt 2)
    m = mx.matrix([[3 + 2 * sa, 0], [0, 3 - 2 * sa]], field)
    assert cc.fixed_points_member(zeta, tau(3, m))
    assert not cc.fixed_points_member(zeta, tau(3, mx.matrix([[1, sb], [0, 1]], field)))


@pytest.mark.parametrize("a,b", [(2, 3), (3, 5), (5, 7)])
def test_explicit_s_matrix(a, b):
    """Test S against tau_7 o T projectively and sqrt(ab) S linearly"""
    assert cc.check_explicit_s(a, b) == {"projective": True, "scaled_linear": True}


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("a,b", [(2, 3), (5, 2)])
def test_explicit_p_matrix(n, a, b):
    """Test P against chi exactly and tau_2n o T projectively"""
    assert cc.check_p_relation(a, b, n) == {"chi_exact": True, "tau_projective": True}


def test_p_is_identity_for_square_a():
    """Test that P collapses to the identity when a is a square"""
    field = NumberField(BaseField(), [3])
    assert mx.equal(cc.p_matrix(2, 4, field, field(2)), mx.identity(4, field))


def test_eta_commutes_with_chi():
    """Test that the eta twist commutes with every chi value"""
    assert cc.eta_commutes_with_chi(2, 3, 3)


def test_corrupted_table_fails():
    """Test that flipping one entry breaks the cocycle identity"""
    zeta = cc.pushforward(cc.t_cocycle(2, 3), 3)
    assert not cc.is_cocycle(cc.corrupt(zeta, GaloisChar.from_label("-+")))


def test_incomplete_table_rejected():
    """Test that a table missing characters is refused"""
    zeta = cc.t_cocycle(2, 3)
    table = {k: v for k, v in zeta.table.items() if k.label != "--"}
    with pytest.raises(IncompleteTable):
        cc.is_cocycle(cc.Cocycle(zeta.field, table, projective=True))
