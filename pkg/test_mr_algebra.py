from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from char_ring import theta
from errors import DomainError, FieldError, ResourceError, SizeMismatchError
from mr_algebra import (
    dimension_table,
    get_context,
    ideal_dimensions,
    is_left_ideal_span,
    is_right_ideal_span,
    left_mult_matrix,
    min_poly,
    multiply,
    structure_constants,
    support_and_saturations,
    theta_compatible_product_check,
    x_element,
    x_prime_element,
)
from signed_compositions import SignedComposition, all_compositions, saturated_family

# Columns: dim Ax, dim xA, dim AxA, dim of the centralizer
DIMS_N2 = {
    "2": (6, 6, 6, 6),
    "-2": (3, 2, 3, 5),
    "1,1": (3, 4, 4, 5),
    "1,-1": (2, 3, 3, 5),
    "-1,1": (2, 3, 3, 5),
    "-1,-1": (1, 1, 1, 6),
}

DIMS_N3 = {
    "3": (18, 18, 18, 18),
    "-3": (7, 4, 9, 13),
    "2,1": (10, 16, 16, 10),
    "1,2": (10, 16, 16, 10),
    "2,-1": (6, 11, 11, 12),
    "-1,2": (6, 11, 11, 12),
    "-2,1": (6, 8, 10, 13),
    "1,-2": (6, 8, 10, 13),
    "-2,-1": (3, 3, 5, 16),
    "-1,-2": (3, 3, 5, 16),
    "1,1,1": (4, 8, 8, 14),
    "1,1,-1": (3, 7, 7, 14),
    "1,-1,1": (3, 7, 7, 14),
    "-1,1,1": (3, 7, 7, 14),
    "1,-1,-1": (2, 4, 4, 16),
    "-1,1,-1": (2, 4, 4, 16),
    "-1,-1,1": (2, 4, 4, 16),
    "-1,-1,-1": (1, 1, 1, 18),
}


def test_structure_constants_shape():
    for n, dim in ((1, 2), (2, 6), (3, 18)):
        mu = structure_constants(n)
        assert mu.shape == (dim, dim, dim)
        assert mu.dtype == np.int64


def test_product_of_11_and_minus_2(q2):
    product = x_element("1,1", q2) * x_element("-2", q2)
    assert product.to_dict() == {"1,-1": "-1", "-1,1": "1", "-1,-1": "1"}


def test_identity_element(q3):
    one = q3.one()
    for C in q3.compositions:
        x = x_element(C, q3)
        assert one * x == x and x * one == x


@pytest.mark.parametrize("n", [2, 3])
def test_group_algebra_path_agrees(n):
    context = get_context(n, 0)
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b = context.random_element(rng), context.random_element(rng)
        assert multiply(a, b, via="group") == multiply(a, b)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_associativity(seed):
    context = get_context(3, 0)
    rng = np.random.default_rng(seed)
    a, b, c = (context.random_element(rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_reduction_modulo_p_is_a_morphism(seed):
    rational, modular = get_context(3, 0), get_context(3, 3)
    rng = np.random.default_rng(seed)
    a, b = rational.random_element(rng), rational.random_element(rng)

    def reduce(x):
        return modular.element(modular.field.array(x.coords))

    assert reduce(a * b) == reduce(a) * reduce(b)


@pytest.mark.parametrize("n", [2, 3])
def test_product_formula(n):
    context = get_context(n, 0)
    for C in context.compositions:
        for D in context.compositions:
            if C.is_parabolic() or D.is_semi_positive():
                assert theta_compatible_product_check(C, D, context)


def test_product_formula_precondition(q2):
    with pytest.raises(DomainError):
        theta_compatible_product_check(SignedComposition((1, 1)), SignedComposition((-2,)), q2)


def test_mixing_contexts_is_rejected(q2, q3):
    with pytest.raises(SizeMismatchError):
        q2.one() + q3.one()
    with pytest.raises(FieldError):
        q2.one() + get_context(2, 3).one()
    with pytest.raises(SizeMismatchError):
        x_element("1,1", q3)


def test_x_prime_basis(q2, f2_2):
    x = x_prime_element("2", q2)
    assert x.to_dict() == {"2": "1", "-2": "-1/2", "1,-1": "-1/2", "-1,-1": "1/4"}
    for C in q2.compositions:
        coords = x_prime_element(C, q2).x_prime_coords()
        assert coords[q2.index[C]] == 1 and sum(v != 0 for v in coords) == 1
    with pytest.raises(FieldError):
        x_prime_element("2", f2_2)


def test_primitive_idempotents_in_the_x_prime_basis(q2):
    half, quarter, eighth = Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)

    def xp(C):
        return x_prime_element(C, q2)

    family = [
        xp("2") - xp("1,1") * half + xp("-1,-1") * eighth,
        xp("-2") * half + (xp("1,-1") - xp("-1,1")) * quarter,
        xp("1,1") * half,
        (xp("1,-1") + xp("-1,1")) * quarter,
        xp("-1,-1") * eighth,
    ]
    total = q2.zero()
    for i, E in enumerate(family):
        assert E * E == E
        for j, F in enumerate(family):
            if i != j:
                assert (E * F).is_zero()
        total = total + E
    assert total == q2.one()


def test_dimension_tables():
    for n, expected in ((2, DIMS_N2), (3, DIMS_N3)):
        table = dimension_table(n)
        assert list(table.index) == [str(C) for C in all_compositions(n)]
        for C, dims in expected.items():
            assert tuple(table.loc[C, ["left", "right", "two_sided", "centralizer"]]) == dims


def test_ideal_dimensions_of_the_identity(q3):
    assert ideal_dimensions(q3.one()) == {"left": 18, "right": 18, "two_sided": 18, "centralizer": 18}


def test_min_poly_of_minus_3_1(q4):
    a = x_element("-3,1", q4)
    f = min_poly(a)
    assert f.format(candidates=list(theta(a).values)) == "T(T-2)(T-4)(T-8)^2(T-32)"


def test_min_poly_of_an_idempotent_multiple(q2):
    f = min_poly(x_element("-1,-1", q2))
    assert f.format([0, 8]) == "T(T-8)"


def test_saturations(q3):
    a = x_element("-1,2", q3)
    sats = support_and_saturations(a)
    assert sats.support == (SignedComposition((-1, 2)),)
    assert SignedComposition((-1, 2)) in sats.sat_left
    assert SignedComposition((-1, -1, -1)) in sats.sat_left
    assert SignedComposition((2, -1)) in sats.sat_right
    assert is_left_ideal_span(q3, sats.sat_left)
    assert is_right_ideal_span(q3, sats.sat_right)
    assert support_and_saturations(q3.zero()).support == ()


def test_saturated_families_are_two_sided_ideals(q3):
    for k in range(4):
        for negative in (False, True):
            family = saturated_family(3, k, negative)
            assert is_left_ideal_span(q3, family) and is_right_ideal_span(q3, family)


def test_left_multiplication_matrix(q3):
    a = x_element("-2,1", q3)
    M = left_mult_matrix(a)
    for C in q3.compositions:
        y = x_element(C, q3)
        assert list(q3.field.dot(M, y.coords)) == list((a * y).coords)
    assert not np.any(min_poly(a).evaluate_matrix(M) != 0)


def test_cached_algebra_data_honours_a_lowered_cap(monkeypatch):
    assert structure_constants(3).shape == (18, 18, 18)
    assert get_context(3).dim == 18
    monkeypatch.setenv("MRW_CAP_N", "2")
    with pytest.raises(ResourceError):
        structure_constants(3)
    with pytest.raises(ResourceError):
        get_context(3)
