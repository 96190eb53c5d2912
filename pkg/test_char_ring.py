import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from char_ring import (
    ClassFunction,
    character_table,
    character_table_matrix,
    filtration_is_multiplicative,
    idempotent_functions,
    irr_filtration_report,
    irr_loewy_length,
    irr_radical_power_dims,
    is_lower_unitriangular_shape,
    ker_theta_basis,
    phi_ring,
    pi_lambda,
    subset_lambda_by_character,
    theta,
)
from errors import DomainError
from exact_linear import PrimeField, matrix_inverse
from mr_algebra import get_context, x_element
from signed_compositions import Bipartition, all_bipartitions, all_compositions, subset_lambda

TABLE_N2 = [
    [1, 0, 0, 0, 0],
    [1, 2, 0, 0, 0],
    [1, 0, 2, 0, 0],
    [1, 0, 2, 2, 0],
    [1, 4, 2, 4, 8],
]

TABLE_N3 = [
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 2, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 2, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 2, 0, 0, 0, 0, 0],
    [1, 4, 1, 2, 2, 4, 0, 0, 0, 0],
    [1, 0, 3, 0, 0, 0, 6, 0, 0, 0],
    [1, 0, 3, 2, 0, 0, 6, 4, 0, 0],
    [1, 0, 3, 4, 4, 0, 6, 8, 8, 0],
    [1, 8, 3, 6, 12, 24, 6, 12, 24, 48],
]


def test_character_tables_over_q():
    for n, expected in ((2, TABLE_N2), (3, TABLE_N3)):
        table = character_table(n)
        assert list(table.index) == [str(lam) for lam in all_bipartitions(n)]
        assert table.to_numpy().tolist() == expected
        assert is_lower_unitriangular_shape(table.to_numpy())
    assert list(np.diag(character_table(2).to_numpy())) == [1, 2, 2, 2, 8]


def test_character_table_n2_p2():
    table = character_table(2, 2)
    assert table.to_numpy().tolist() == [[1]]
    assert list(table.index) == [";1,1"]
    assert list(table.columns) == ["x[2]"]


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3), (3, 5)])
def test_modular_character_tables_are_invertible(n, p):
    rows, cols, entries = character_table_matrix(n, p)
    assert len(rows) == len(cols)
    F = PrimeField(p)
    inverse = matrix_inverse(F.coerce(entries), F)
    assert np.array_equal(F.dot(F.coerce(entries), inverse), F.identity(len(rows)))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.sampled_from((0, 2, 3)))
def test_theta_is_multiplicative(seed, p):
    context = get_context(3, p)
    rng = np.random.default_rng(seed)
    a, b = context.random_element(rng), context.random_element(rng)
    assert theta(a * b) == theta(a) * theta(b)
    assert theta(a + b) == theta(a) + theta(b)


def test_theta_of_the_square_of_x_minus_2(q2):
    x = x_element("-2", q2)
    assert theta(x * x) == theta(x) * theta(x)
    assert x * x != x * 2


def test_kernel_of_theta(q3):
    basis = ker_theta_basis(q3)
    assert len(basis) == len(all_compositions(3)) - len(all_bipartitions(3))
    for a in basis:
        assert not np.any(theta(a).values != 0)


def test_pi_lambda(q2):
    x = x_element("-1,-1", q2)
    assert pi_lambda(Bipartition((), (1, 1)), x) == 8
    with pytest.raises(DomainError):
        pi_lambda(Bipartition((3,), ()), x)


def test_character_criterion_for_conjugate_inclusion():
    comps = all_compositions(3)
    for C in comps:
        for D in comps:
            assert subset_lambda_by_character(C, D) == subset_lambda(C, D)


@pytest.mark.parametrize("n,p", [(3, 0), (3, 2), (3, 3), (4, 3)])
def test_idempotent_functions_partition_unity(n, p):
    functions = idempotent_functions(n, p)
    total = ClassFunction.constant(n, 0)
    for lam, e in functions.items():
        assert e * e == e
        total = total + e
    assert total == ClassFunction.constant(n, 1)


@pytest.mark.parametrize("n,p", [(3, 2), (3, 3), (4, 3)])
def test_modular_idempotents_are_p_integral_in_phi_coordinates(n, p):
    ring = phi_ring(n, p)
    for e in idempotent_functions(n, p).values():
        element = ring.from_class_function(e)
        assert element * element == element


def test_phi_products_match_class_function_products():
    ring = phi_ring(3, 0)
    for lam in ring.labels:
        for mu in ring.labels:
            a, b = ring.basis_element(lam), ring.basis_element(mu)
            assert ring.values(a * b) == ring.values(a) * ring.values(b)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_irr_loewy_lengths(n):
    assert irr_loewy_length(n, 0) == 1
    assert irr_loewy_length(n, 2) == n + 1
    assert irr_loewy_length(n, 3) == n // 3 + 1
    assert irr_loewy_length(n, 5) == 1


def test_irr_radical_dims_end_with_zero():
    dims = irr_radical_power_dims(3, 2)
    assert dims[-1] == 0
    assert dims == sorted(dims, reverse=True)


@pytest.mark.parametrize("n,p", [(3, 2), (4, 2), (4, 3)])
def test_filtration_is_multiplicative(n, p):
    assert filtration_is_multiplicative(n, p)


def test_filtration_report():
    report = irr_filtration_report(3, 2)
    assert list(report.columns) == ["dim_I", "dim_Rad", "equal"]
    assert bool(report.loc[1, "equal"])
