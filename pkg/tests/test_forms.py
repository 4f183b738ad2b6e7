# tests for quadratic and Hermitian form invariants, J_n^{a,b} and the symplectic identities

import pytest
from sympy import primerange

from arithlab.core.errors import Degenerate, SignatureProfileMismatch
from arithlab.models.fixtures import load_form
from arithlab.services import forms as fm
from arithlab.services.numfield import BaseField, NumberField, RealPlace
from arithlab.services.qalg import QuatAlgebra, ramification_labels
from arithlab.services.suites import ADMISSIBLE_PARAMS, transported_jnab
from arithlab.services.symrep import j_form
from arithlab.utils import matrices as mx


def test_diagonalize_hyperbolic_plane(q):
    """Test diagonalization with an isotropic first vector"""
    form = mx.matrix([[0, 1], [1, 0]], q)
    d, c = fm.diagonalize(form)
    assert mx.equal(c.T @ form @ c, d)
    assert d[0, 1] == 0 and d[1, 0] == 0


def test_invariants_of_identity(q):
    """Test rank, determinant, signature and Hasse symbols of <1, 1, 1>"""
    inv = fm.invariants(mx.identity(3, q))
    assert inv.rank == 3
    assert inv.disc_class == 1
    assert inv.signatures == {"inf": (3, 0)}
    assert all(s == 1 for s in inv.hasse.values())


@pytest.mark.parametrize("entries", [[3, -7, 10], [1, 1, -2, 5]])
def test_invariants_under_congruence(entries, q, rng):
    """Test that C^T Q C has the invariants of Q for random invertible C"""
    form = mx.diag(entries, q)
    n = len(entries)
    expected = fm.invariants(form)
    for _ in range(5):
        c = mx.matrix([[int(x) for x in row] for row in rng.integers(-3, 4, size=(n, n))], q)
        while mx.det(c) == 0:
            c = mx.matrix([[int(x) for x in row] for row in rng.integers(-3, 4, size=(n, n))], q)
        got = fm.invariants(c.T @ form @ c)
        assert got.rank == expected.rank
        assert got.disc_class == expected.disc_class
        assert got.signatures == expected.signatures
        assert {k for k, s in got.hasse.items() if s == -1} == {k for k, s in expected.hasse.items() if s == -1}


def test_degenerate_form_rejected(q):
    """Test that singular forms have no invariants"""
    with pytest.raises(Degenerate):
        fm.invariants(mx.matrix([[1, 1], [1, 1]], q))


def test_equivalence(q):
    """Test equivalence decisions over Q"""
    assert fm.equiv_quadratic(mx.diag([1, -1], q), mx.diag([2, -2], q))
    assert fm.equiv_quadratic(mx.diag([1, 1], q), mx.diag([2, 2], q))
    assert not fm.equiv_quadratic(mx.diag([1, 1], q), mx.diag([1, 3], q))
    assert not fm.equiv_quadratic(mx.diag([1, 1], q), mx.diag([1, -1], q))


def test_reciprocity_of_hasse_symbols(q):
    """Test that the Hasse symbols of a form multiply to 1"""
    assert fm.reciprocity_check(mx.diag([3, -7, 10], q)) == 1
    assert fm.reciprocity_check(j_form(5, q)) == 1


def test_jnab_entries():
    """Test the diagonal of J_5^{2,3}"""
    assert fm.jnab_entries(5, 2, 3) == [-96, -36, 4, 72, 48]


def test_jnab_falls_back_to_j_form(q):
    """Test that a square parameter gives J_n back"""
    assert mx.equal(fm.jnab(5, 4, 3), j_form(5, q))


@pytest.mark.parametrize("n", [5, 7])
@pytest.mark.parametrize("a,b", [(2, 3), (3, 5)])
def test_transported_form_matches_jnab(n, a, b):
    """Test that J_n transported through Hilbert 90 is equivalent to J_n^{a,b}"""
    lhs = fm.normalize(transported_jnab(n, a, b, seed=0))
    rhs = fm.normalize(fm.jnab(n, a, b))
    assert fm.equiv_quadratic(lhs, rhs)


@pytest.mark.parametrize("n", [5, 7, 9, 11])
@pytest.mark.parametrize("a,b", [(2, 3), (3, 5)])
def test_hasse_closed_form(n, a, b):
    """Test the Hasse symbol of normalized J_n^{a,b} against its closed form"""
    normalized = fm.normalize(fm.jnab(n, a, b))
    entries = [normalized[i, i].base_value() for i in range(n)]
    base = BaseField()
    for place in list(primerange(3, 50)) + [RealPlace()]:
        assert fm.hasse_symbol(entries, place, base) == fm.hasse_closed_form(n, a, b, place, base)


def test_disc_classes_and_square_products():
    """Test the determinant classes and the square product identities"""
    assert fm.disc_classes_agree(5, 2, 3)
    assert fm.disc_classes_agree(7, 3, 5)
    assert all(fm.square_product_check(n) for n in range(5, 102, 2))


def test_admissibility_of_fixture(fixture_dir):
    """Test the ramification target of J_5^{a,b} over Q(sqrt 2)"""
    fixture, _ = load_form(fixture_dir / "admissible_j5.json")
    verdict = fm.fuchsian_admissibility(fixture.build())
    assert verdict.indefinite_place == "inf"
    assert verdict.parity_even
    assert len(verdict.target) % 2 == 0
    assert "inf'" in verdict.target


def test_admissibility_target_is_ramification_set():
    """Test that the target of J_5^{a,b} is where (a, b) ramifies"""
    base = BaseField(2)
    a, b = ADMISSIBLE_PARAMS[0]
    form = mx.diag(fm.jnab_entries(5, a, b, base), NumberField(base))
    verdict = fm.fuchsian_admissibility(form)
    assert verdict.target == ramification_labels(QuatAlgebra(base, a, b))


def test_admissibility_rejects_definite_form(q):
    """Test that a form definite at every real place has no indefinite place"""
    with pytest.raises(SignatureProfileMismatch, match="indefinite at 0"):
        fm.fuchsian_admissibility(mx.identity(5, q))
    with pytest.raises(SignatureProfileMismatch):
        fm.fuchsian_admissibility(mx.identity(5, NumberField(BaseField(2))))


def test_j7ab_definite_where_parameters_negative():
    """Test that J_7^{a,b} is definite at the place where a, b < 0 and indefinite at the other"""
    base = BaseField(2)
    a, b = (base.coerce(x) for x in ADMISSIBLE_PARAMS[0])
    form = fm.jnab(7, a, b, base)
    assert fm.signature(form, RealPlace(-1)) == (7, 0)
    assert fm.signature(form, RealPlace(1)) == (3, 4)


def test_admissibility_rejects_j7(q):
    """Test that n = 7 is outside the quaternion route"""
    with pytest.raises(SignatureProfileMismatch):
        fm.fuchsian_admissibility(j_form(7, q))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_jstar_identities(n):
    """Test that J* is bar-Hermitian and N diagonalizes it as expected"""
    m, algebra = fm.jstar(n, 2, 3)
    assert fm.is_bar_hermitian(m, algebra)
    got = fm.n_diagonalize(n, 2, 3)
    assert all(x == e for x, e in zip(got, fm.jstar_expected_diagonal(n)))


def test_expected_diagonal_values():
    """Test the closed-form diagonal for n = 2"""
    assert fm.jstar_expected_diagonal(2) == [-8, -8, -24, -24]


def test_sigma_hermitian_equivalence():
    """Test that J_5^{2,3} is equivalent to I_5 over Q(sqrt 5)"""
    field = NumberField(BaseField(), [5])
    form = mx.coerce(fm.jnab(5, 2, 3), field)
    assert fm.hermitian_equiv(form, fm.hermitian_identity(5, "sigma", field), "sigma")


def test_sigma_hermitian_signatures():
    """Test that signatures are compared where d < 0"""
    field = NumberField(BaseField(), [-1])
    lhs = mx.diag([1, 1], field)
    rhs = mx.diag([1, -1], field)
    assert not fm.hermitian_equiv(lhs, rhs, "sigma")
    assert fm.hermitian_invariants(lhs, "sigma").signatures == {"inf": (2, 0)}


@pytest.mark.parametrize("n", [2, 3])
def test_minus_jstar_is_identity(n):
    """Test that -J* is equivalent to I_n as a bar-Hermitian form over (-1, -3)"""
    m, algebra = fm.jstar(n, -1, -3)
    h = fm.negate(fm.quaternion_matrix(m, algebra))
    assert fm.hermitian_equiv(h, fm.hermitian_identity(n, "quaternion", algebra), "quaternion")
