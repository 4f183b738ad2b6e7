# tests for quaternion algebras and Hilbert symbols

import pytest

from arithlab.core.errors import ZeroArgument
from arithlab.services.numfield import BaseField, RealPlace
from arithlab.services.qalg import (
    QuatAlgebra,
    embed_2x2,
    hilbert_symbol,
    is_compact_at,
    is_norm_one,
    order_contains,
    nrd,
    quat_arith,
    quat_conj,
    quat_inverse,
    ramification_labels,
    reciprocity_product,
    sigma_star,
)
from arithlab.utils import matrices as mx


@pytest.fixture(scope="module")
def algebra():
    return QuatAlgebra(BaseField(), 2, 3)


def test_hilbert_symbols_over_q():
    """Test known local symbols"""
    assert hilbert_symbol(-1, -1, RealPlace()) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol(2, 3, 2) == -1
    assert hilbert_symbol(2, 3, RealPlace()) == 1


def test_hilbert_symbol_zero_argument():
    """Test that zero arguments are refused"""
    with pytest.raises(ZeroArgument):
        hilbert_symbol(0, 3, 5)


def test_ramification_of_2_3(algebra):
    """Test that (2, 3 / Q) ramifies exactly at 2 and 3"""
    assert ramification_labels(algebra) == ["2", "3"]
    assert not is_compact_at(algebra, RealPlace())


def test_definite_algebra_is_compact():
    """Test that (-1, -3 / Q) is compact at infinity"""
    assert is_compact_at(QuatAlgebra(BaseField(), -1, -3), RealPlace())


@pytest.mark.parametrize("a,b", [(2, 3), (-1, -1), (5, 7), (-3, 10), (6, -15)])
def test_reciprocity(a, b):
    """Test the product formula over Q"""
    assert reciprocity_product(a, b, BaseField()) == 1


def test_reciprocity_over_quadratic_base():
    """Test the product formula over Q(sqrt 2) with the dyadic symbol inferred"""
    assert reciprocity_product([-1, 1], [3, 3], BaseField(2)) == 1


def test_quaternion_arithmetic(algebra):
    """Test multiplication, conjugation and inverses"""
    x = algebra(3, 2, 0, 0)
    y = algebra(2, 0, 1, 0)
    assert is_norm_one(x) and is_norm_one(y)
    assert is_norm_one(x * y)
    assert x * x.inverse() == algebra.one()
    assert (x * y).conj() == y.conj() * x.conj()
    assert order_contains(x * y)


def test_embedding_is_multiplicative(algebra):
    """Test that the 2x2 splitting respects products and the reduced norm"""
    x = algebra(1, 1, 1, 0)
    y = algebra(0, 2, -1, 1)
    assert mx.equal(embed_2x2(x * y), embed_2x2(x) @ embed_2x2(y))
    assert mx.det(embed_2x2(x)) == mx.field_of(embed_2x2(x))(x.nrd())


def test_function_forms_of_operations(algebra):
    """Test quat_arith, quat_conj, nrd, quat_inverse and the tensor involution"""
    x = algebra(1, 2, -1, 3)
    y = algebra(0, 1, 1, 0)
    assert quat_arith(x, y, "mul") == x * y
    assert quat_arith(x, y, "sub") == x - y
    assert quat_conj(x) == algebra(1, -2, 1, -3)
    assert x * quat_conj(x) == algebra(nrd(x))
    assert quat_arith(x, quat_inverse(x), "mul") == algebra.one()
    assert sigma_star(*sigma_star(x, y)) == (x, y)
