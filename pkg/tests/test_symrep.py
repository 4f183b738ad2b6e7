# tests for tau_n, the forms J_n and the trace polynomials

import logging

import pytest

from arithlab.core.errors import InputError, NotInvertible
from arithlab.services.forms import signature
from arithlab.services.suites import random_sl2
from arithlab.services.symrep import (
    check_invariance,
    j_form,
    phi_eval,
    signature_pattern,
    tau,
    tau_lie,
    trace_poly,
)
from arithlab.utils import matrices as mx


def test_tau_of_identity_and_diagonal(q):
    """Test tau_n on the identity and on a diagonal matrix"""
    assert mx.equal(tau(4, mx.identity(2, q)), mx.identity(4, q))
    d = mx.diag([2, "1/2"], q)
    assert mx.equal(tau(3, d), mx.diag([4, 1, "1/4"], q))


def test_tau_is_homomorphism(q_sqrt2_sqrt3, rng):
    """Test tau_n(XY) = tau_n(X) tau_n(Y)"""
    x, y = random_sl2(q_sqrt2_sqrt3, rng), random_sl2(q_sqrt2_sqrt3, rng)
    for n in (2, 3, 5):
        assert mx.equal(tau(n, x @ y), tau(n, x) @ tau(n, y))


@pytest.mark.parametrize("n", range(3, 10))
def test_invariance(n, q_sqrt2_sqrt3, rng):
    """Test tau_n(M)^T J_n tau_n(M) = J_n on random SL2 elements"""
    for _ in range(5):
        assert check_invariance(n, random_sl2(q_sqrt2_sqrt3, rng))


def test_invariance_fails_off_sl2(q, caplog):
    """Test that det 2 scales J_n and the failure is logged"""
    with caplog.at_level(logging.DEBUG, logger="arithlab.services.symrep"):
        assert not check_invariance(3, mx.diag([2, 1], q))
    assert "does not preserve J_3" in caplog.text


def test_tau_rejects_singular(q):
    """Test that tau refuses singular input"""
    with pytest.raises(NotInvertible):
        tau(3, mx.matrix([[1, 2], [2, 4]], q))


def test_j_form_values(q):
    """Test the antidiagonals of J_3 and J_4"""
    j3 = j_form(3, q)
    assert [j3[r, 2 - r] for r in range(3)] == [q(2), q(-1), q(2)]
    j4 = j_form(4, q)
    assert [j4[r, 3 - r] for r in range(4)] == [q(6), q(-2), q(2), q(-6)]


@pytest.mark.parametrize("n", range(2, 10))
def test_j_form_parity(n, q):
    """Test that J_n is symmetric for odd n and alternating for even n"""
    j = j_form(n, q)
    assert mx.equal(j.T, j if n % 2 else -j)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_j_form_signature(k, q):
    """Test the signature of J_{2k+1} by the parity of k"""
    n = 2 * k + 1
    assert signature(j_form(n, q)) == signature_pattern(n)


def test_signature_pattern_needs_odd_n():
    """Test that signature_pattern rejects even n"""
    with pytest.raises(InputError):
        signature_pattern(4)


def test_trace_polynomials(q_sqrt2_sqrt3, rng):
    """Test Tr tau_n(M) = Phi_n(Tr M)"""
    assert trace_poly(3).coeffs == (-1, 0, 1)
    assert trace_poly(4).coeffs == (0, -2, 0, 1)
    m = random_sl2(q_sqrt2_sqrt3, rng)
    for n in range(2, 8):
        assert mx.trace(tau(n, m)) == trace_poly(n)(mx.trace(m))


def test_tau_lie_preserves_form(q):
    """Test that d tau_n(X) is skew for J_n"""
    x = mx.matrix([[1, 2], [3, -1]], q)
    for n in (3, 4, 5):
        j = j_form(n, q)
        d = tau_lie(n, x)
        assert mx.is_zero(d.T @ j + j @ d)


def test_j7_signature(q):
    """Test that J_7 has three positive and four negative directions"""
    assert signature(j_form(7, q)) == (3, 4)


def test_phi_eval_on_integers_and_field_elements(q):
    """Test Phi_n at plain integers and at field elements"""
    assert phi_eval(3, 2) == 3
    assert phi_eval(4, 3) == 21
    assert phi_eval(2, q(5)) == q(5)
