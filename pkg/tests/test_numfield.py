# tests for number field towers, Galois characters, real places and primes

from fractions import Fraction

import pytest

from arithlab.core.errors import DependentRadicands, FieldMismatch, InputError, NotPrime, NotSquarefree
from arithlab.services.numfield import (
    BaseField,
    GaloisChar,
    NumberField,
    RealPlace,
    arith,
    field_new,
    galois_apply,
    galois_group,
    norm_to_base,
    prime_split,
    sign_at,
    sign_selector,
    trace_to_base,
)


def test_base_field_rejects_non_squarefree():
    """Test that Q(sqrt m) needs squarefree m > 1"""
    with pytest.raises(NotSquarefree):
        BaseField(4)
    with pytest.raises(NotSquarefree):
        BaseField(1)


def test_dependent_radicands_rejected():
    """Test that a radicand whose root already lies in the tower is refused"""
    with pytest.raises(DependentRadicands):
        NumberField(BaseField(), [2, 8])


def test_tower_skips_dependent_candidates():
    """Test that tower() keeps only independent radicands"""
    field, roots = NumberField.tower(BaseField(), [2, 2, 3])
    assert field.k == 2
    assert roots[0] == roots[1]


def test_sqrt_inside_tower(q_sqrt2_sqrt3):
    """Test square roots of base elements that live in the tower"""
    f = q_sqrt2_sqrt3
    root6 = f.sqrt(6)
    assert root6 == f.gen(0) * f.gen(1)
    assert root6 * root6 == f(6)
    assert f.sqrt(5) is None


def test_inverse_and_powers(q_sqrt2_sqrt3):
    """Test that inverses and negative powers are exact"""
    f = q_sqrt2_sqrt3
    x = f(1) + f.gen(0) + f.gen(1)
    assert x * x.inverse() == f.one()
    assert x ** -2 * x ** 2 == f.one()


def test_quadratic_base_square_test():
    """Test square detection over Q(sqrt 2)"""
    base = BaseField(2)
    # 3 + 2 sqrt 2 = (1 + sqrt 2)^2
    root = base.is_square([3, 2])
    assert root is not None and root * root == base.coerce([3, 2])
    assert base.is_square([1, 1]) is None


def test_norm_and_trace_to_base():
    """Test norms and traces down to the base"""
    f = NumberField(BaseField(), [2])
    x = f(1) + f.gen(0)
    assert norm_to_base(x) == -1
    assert trace_to_base(x) == 2


def test_galois_group_and_labels(q_sqrt2_sqrt3):
    """Test the character group of a biquadratic tower"""
    group = galois_group(q_sqrt2_sqrt3)
    assert len(group) == 4
    assert group[0].is_identity()
    sigma = GaloisChar.from_label("+-")
    assert sigma.label == "+-"
    assert sigma.apply(q_sqrt2_sqrt3.gen(1)) == -q_sqrt2_sqrt3.gen(1)
    assert sigma.apply(q_sqrt2_sqrt3.gen(0)) == q_sqrt2_sqrt3.gen(0)


def test_exact_signs(q_sqrt2_sqrt3):
    """Test signs at real places, including close cancellations"""
    f = q_sqrt2_sqrt3
    x = f.gen(0) - f(Fraction(7, 5))
    assert sign_at(x, RealPlace(1, (1, 1))) == 1
    assert sign_at(x, RealPlace(1, (-1, 1))) == -1
    # sqrt 2 + sqrt 3 - sqrt 6 - 1/2 > 0 (about 0.697)
    y = f.gen(0) + f.gen(1) - f.gen(0) * f.gen(1) - f(Fraction(1, 2))
    assert sign_at(y, RealPlace(1, (1, 1))) == 1


def test_base_field_signs():
    """Test signs of u + v sqrt m at both real places"""
    base = BaseField(2)
    x = base.coerce([-1, 1])
    assert base.sign(x, 1) == 1
    assert base.sign(x, -1) == -1


def test_prime_splitting():
    """Test split, inert and ramified primes of Q(sqrt 2)"""
    base = BaseField(2)
    split = prime_split(base, 7)
    assert [p.label for p in split] == ["7a", "7b"]
    assert prime_split(base, 3)[0].kind == "inert"
    assert prime_split(base, 2)[0].kind == "ramified"
    with pytest.raises(NotPrime):
        prime_split(base, 9)


def test_field_new_and_arith():
    """Test tower construction and the arithmetic dispatcher"""
    field = field_new(None, [2, 3])
    assert field == NumberField(BaseField(), [2, 3])
    x, y = field.gen(0), field.gen(1)
    assert arith(x, y, "mul") * arith(x, y, "mul") == 6
    assert arith(arith(x, y, "add"), y, "sub") == x
    assert arith(x, x, "div") == 1
    with pytest.raises(InputError):
        arith(x, y, "pow")
    with pytest.raises(FieldMismatch):
        arith(x, field_new(None, [2]).gen(0), "add")


def test_galois_apply_flips_roots():
    """Test that a character negates exactly the roots it moves"""
    field = field_new(None, [2, 3])
    sigma = GaloisChar.from_label("-+")
    x = field.gen(0) + field.gen(1)
    assert galois_apply(sigma, x) == field.gen(1) - field.gen(0)
    assert galois_apply(GaloisChar.from_label("++"), x) == x


def test_sign_selector():
    """Test elements with prescribed signs at the real places of Q(sqrt 2)"""
    base = BaseField(2)
    for chosen in ([], [1], [-1], [1, -1]):
        lam = sign_selector(base, chosen)
        for place in base.places():
            assert base.sign(lam, place) == (-1 if place in chosen else 1)
    with pytest.raises(FieldMismatch):
        sign_selector(BaseField(), [-1])
