# tests for reduction mod primes, finite trace sets and the separation experiment

import pytest

from arithlab.core.config import settings
from arithlab.core.errors import InputError, IrreducibleRadicand
from arithlab.services import redux as rx
from arithlab.services.numfield import BaseField, NumberField
from arithlab.services.suites import SEPARATION_MULTIPLIERS, bend_fixture, surface_rep, tower_bend_fixture
from arithlab.utils import matrices as mx


def test_phi_image_misses_values():
    """Test that Phi_3 = t^2 - 1 is not onto F_5"""
    image = rx.phi_image(3, 5)
    assert image.image == [0, 3, 4]
    assert not image.is_surjective


def test_first_nonsurjective_prime():
    """Test the search for a prime where Phi_3 is not onto"""
    assert rx.first_nonsurjective_prime(3, 50) == 3
    assert rx.phi_surjective_primes(2, 11) == {3: True, 5: True, 7: True, 11: True}


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_sl2_traces_cover_field(q):
    """Test that every element of F_q is a trace in SL(2, q)"""
    assert rx.sl2_trace_set(q) == list(range(q))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("q", [3, 5, 7])
def test_tau_traces_equal_phi_image(n, q):
    """Test {Tr tau_n(M)} = Phi_n(F_q)"""
    assert rx.tau_trace_set(n, q) == rx.phi_image(n, q).image


def test_surface_rep_mod_3_collapses():
    """Test that B reduces to I mod 3, leaving the cyclic group generated by A"""
    fin = rx.reduce_rep(surface_rep(), 3)
    result = rx.trace_set(fin)
    assert result.values == [2]
    assert result.exhaustive
    assert result.elements == 3
    assert rx.order_mod(fin.matrices[0]) == 3


def test_surface_rep_mod_5_is_sl2():
    """Test that the reduction mod 5 generates all of SL(2, 5)"""
    fin = rx.reduce_rep(surface_rep(), 5)
    result = rx.trace_set(fin)
    assert result.elements == 120
    assert result.values == [0, 1, 2, 3, 4]
    assert result.seed is None


def test_trace_set_budget_falls_back_to_sampling():
    """Test the non-exhaustive path and its seed"""
    fin = rx.reduce_rep(surface_rep(), 5)
    result = rx.trace_set(fin, budget=10)
    assert not result.exhaustive
    assert result.seed == settings.SEED
    assert set(result.values) <= set(range(5))
    again = rx.trace_set(fin, budget=10)
    assert again.values == result.values


def test_trace_set_rejects_empty_budget():
    """Test that a budget below 1 is refused"""
    with pytest.raises(InputError):
        rx.trace_set(rx.reduce_rep(surface_rep(), 5), budget=0)


def test_non_residue_radicand_extends_field(monkeypatch):
    """Test reduction of Q(sqrt 2) into F_p or F_{p^2}, and the refusal when extension is off"""
    rep = surface_rep(NumberField(BaseField(), [2]))
    assert rx.reduce_rep(rep, 3).q == 9
    assert rx.reduce_rep(rep, 5).q == 25
    assert rx.reduce_rep(rep, 7).q == 7
    monkeypatch.setattr(settings, "ALLOW_RESIDUE_EXTENSION", False)
    with pytest.raises(IrreducibleRadicand):
        rx.reduce_rep(rep, 3)


def test_adjoint_trace_of_identity(q):
    """Test Tr Ad(I) = n^2 - 1 on SL(2)"""
    assert rx.adjoint_trace(mx.identity(2, q)) == 3


def test_trace_field_of_rational_rep():
    """Test that a representation over Q has trace field Q"""
    result = rx.trace_field(surface_rep(), word_length=2)
    assert result.equals_base
    assert result.label == "Q"
    assert result.stable_from == 1


def test_generated_subfield_over_quadratic_base():
    """Test that sqrt m of the base is a generator of its own over Q"""
    field = NumberField(BaseField(2), [3])
    sqrt6 = rx.generated_subfield(field, [field.sqrt(6)])
    assert sqrt6.label == "Q(sqrt 6)"
    assert not sqrt6.equals_base
    assert rx.generated_subfield(field, [field.base_gen(), field.gen(0)]).label == "Q(sqrt 2, sqrt 3)"
    unit = rx.generated_subfield(field, [field.element([[1, 1], 0])])
    assert unit.equals_base
    assert unit.label == "Q(sqrt 2)"
    assert rx.generated_subfield(field, [5]).label == "Q"


def test_generated_subfield_of_biquadratic_tower():
    """Test that sqrt 2 + sqrt 3 generates all of Q(sqrt 2, sqrt 3)"""
    field = NumberField(BaseField(), [2, 3])
    result = rx.generated_subfield(field, [field.gen(0) + field.gen(1)])
    assert result.label == "Q(sqrt 2, sqrt 3)"
    assert rx.generated_subfield(field, [field.gen(0) * field.gen(1)]).label == "Q(sqrt 6)"


def test_trace_field_of_bent_tower_rep():
    """Test that bending over Q(sqrt 2) brings sqrt 2 into traces of length-2 words"""
    _, _, bent = tower_bend_fixture()
    result = rx.trace_field(bent, word_length=4)
    assert result.history == ["Q", "Q(sqrt 2)", "Q(sqrt 2)", "Q(sqrt 2)"]
    assert result.stable_from == 2
    assert not result.equals_base


def test_trace_field_of_bent_rational_rep():
    """Test that a bending over Q keeps the trace field Q"""
    _, _, bent = bend_fixture(3, SEPARATION_MULTIPLIERS)
    result = rx.trace_field(bent)
    assert result.equals_base
    assert result.stable_from == 1


def test_separation_rows_mod_5():
    """Test that collapsed rows reproduce the Phi_3 pushforward mod 5"""
    lift, datum, _ = bend_fixture(3, SEPARATION_MULTIPLIERS)
    result = rx.separation_experiment(lift, datum, [5], 1, seed=0)
    assert [row.l for row in result.rows] == [0, 1]
    assert all(row.prime == "5" for row in result.rows)
    assert result.rows[0].collapsed
    assert result.collapse_holds
    assert result.rows[0].trace_set == [0, 3, 4]
    assert result.phi_images["5"].image == [0, 3, 4]


def test_separation_needs_fuchsian_lift():
    """Test that a rep without its SL(2) source is refused"""
    lift, datum, bent = bend_fixture(3, SEPARATION_MULTIPLIERS)
    bent.sl2 = None
    with pytest.raises(InputError):
        rx.separation_experiment(bent, datum, [5], 1)


def test_bending_element_is_trivial_mod_3():
    """Test that every multiplier is 1 mod 3, so B reduces to I and every row collapses"""
    lift, datum, _ = bend_fixture(3, SEPARATION_MULTIPLIERS)
    result = rx.separation_experiment(lift, datum, [3], 2, seed=0)
    assert all(row.ord_b == 1 and row.collapsed for row in result.rows)
    assert all(row.trace_set == [0] for row in result.rows)
    assert result.collapse_holds
    assert not result.separation_witnessed
