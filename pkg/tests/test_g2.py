# tests for the cross products, G2 membership and octonion traces over F_q

import pytest

from arithlab.core.errors import EvenCharacteristic, InputError
from arithlab.services import g2
from arithlab.services.suites import norm_one_quaternions
from arithlab.services.symrep import tau
from arithlab.utils import matrices as mx


def _vec(q, entries):
    return mx.vector(entries, q)


def test_cross_is_alternating_and_bilinear(q, rng):
    """Test x x x = 0 and linearity in the first slot for the twisted product"""
    a, b = q(2), q(3)
    for _ in range(20):
        x, y, z = (_vec(q, [int(c) for c in rng.integers(-4, 5, size=7)]) for _ in range(3))
        assert not any(g2.cross(a, b, x, x))
        lhs = g2.cross(a, b, x + y, z)
        rhs = g2.cross(a, b, x, z) + g2.cross(a, b, y, z)
        assert all(u == v for u, v in zip(lhs, rhs))


def test_untwisted_cross_antisymmetric(q):
    """Test x x y = -(y x x) on basis vectors"""
    e = [mx.identity(7, q)[:, i] for i in range(7)]
    for i in range(7):
        for j in range(7):
            lhs = g2.untwisted_cross(e[i], e[j])
            rhs = g2.untwisted_cross(e[j], e[i])
            assert all(u == -v for u, v in zip(lhs, rhs))


@pytest.mark.parametrize("m", [[[0, -1], [1, 0]], [[1, 1], [0, 1]], [[2, 3], [1, 2]]])
def test_tau7_preserves_cross(m, q):
    """Test that tau_7(SL2) preserves the untwisted cross product"""
    assert g2.preserves_cross(tau(7, mx.matrix(m, q)), g2.untwisted_cross)
    assert g2.in_g2(1, 1, tau(7, mx.matrix(m, q)), twisted=False)


def test_scaling_is_not_in_g2(q):
    """Test that a scalar matrix fails to preserve the product"""
    m = mx.diag([2] * 7, q)
    assert not g2.preserves_cross(m, g2.untwisted_cross)


def test_torus_elements(q):
    """Test that the two-parameter torus lies in G2 and contains tau_7 of diagonals"""
    assert g2.in_g2(1, 1, g2.torus_element(2, "1/3", q), twisted=False)
    lam = q(2)
    expected = tau(7, mx.diag([lam, lam.inverse()], q))
    assert mx.equal(g2.torus_element(lam ** 6, lam ** 4, q), expected)
    with pytest.raises(InputError):
        g2.torus_element(0, 1, q)


@pytest.mark.parametrize("x", norm_one_quaternions())
def test_g2_images(x):
    """Test that S-conjugates of tau_7 of norm-one quaternions lie in G2^{2,3}"""
    assert g2.in_g2(2, 3, g2.g2_image(x))


def test_g2_image_needs_norm_one():
    """Test that elements of other norms are refused"""
    x = norm_one_quaternions()[0]
    with pytest.raises(InputError):
        g2.g2_image(x + x)


@pytest.mark.parametrize("q_order", [3, 5, 7, 9])
def test_octonion_automorphism_and_traces(q_order):
    """Test phi_a and the bijection a -> trace over F_q"""
    for a in range(q_order):
        record = g2.oct_aut_phi(q_order, a)
        assert record.is_automorphism
        assert record.preserves_norm
    assert g2.trace_surjective(q_order)


@pytest.mark.parametrize("q_order,expected", [(5, (2, 3)), (7, (2, 3)), (3, (2, 0))])
def test_trace_affine_form(q_order, expected):
    """Test trace(phi_a) = 2a + 3"""
    assert g2.trace_affine_form(q_order) == expected


def test_even_characteristic_rejected():
    """Test that octonion traces refuse characteristic 2"""
    with pytest.raises(EvenCharacteristic):
        g2.oct_aut_phi(4, 1)
