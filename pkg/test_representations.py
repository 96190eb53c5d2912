import math
from fractions import Fraction

import numpy as np
import pytest

from errors import DomainError
from mr_algebra import get_context, x_element, x_prime_element
from representations import (
    Subspace,
    blocks,
    cartan_matrix,
    cartan_properties,
    center,
    center_base_change_report,
    decomposition_matrix,
    lift_idempotent_family,
    loewy_length_algebra,
    lower_bound_element,
    lower_bound_element_check,
    lower_bound_power_formula,
    projective_dims_in_group_algebra,
    radical,
    radical_power_dims,
    simple_characters_vanish_on_radical,
)
from signed_compositions import Bipartition, all_bipartitions, all_compositions, bip_classification

# Off-diagonal entries of the Cartan matrices over Q; the diagonal is all ones
CARTAN_OFF_DIAGONAL = {
    2: {(";2", "1;1"): 1},
    3: {
        ("3;", "2,1;"): 1,
        ("3;", ";2,1"): 1,
        ("3;", "1;1,1"): 1,
        (";2,1", "1;1,1"): 1,
        (";3", "2;1"): 1,
        (";3", "1;2"): 1,
        (";3", "1,1;1"): 1,
        ("1;2", "1,1;1"): 1,
    },
    4: {
        ("4;", "3,1;"): 1,
        ("4;", ";3,1"): 1,
        ("4;", "2,1,1;"): 1,
        ("4;", "2;1,1"): 1,
        ("4;", "1;2,1"): 2,
        ("4;", "1,1;1,1"): 1,
        ("3,1;", "2,1,1;"): 1,
        ("3,1;", "1;2,1"): 1,
        ("3,1;", "1,1;1,1"): 1,
        (";3,1", "2;1,1"): 1,
        (";3,1", "1;2,1"): 1,
        (";3,1", "1,1;1,1"): 1,
        (";2,2", "1;2,1"): 1,
        (";2,2", "1,1;1,1"): 1,
        ("1;2,1", "1,1;1,1"): 1,
        (";4", "3;1"): 1,
        (";4", "1;3"): 1,
        (";4", "2;2"): 1,
        (";4", "2,1;1"): 2,
        (";4", "1,1;2"): 1,
        (";4", ";2,1,1"): 1,
        (";4", "1,1,1;1"): 1,
        (";4", "1;1,1,1"): 1,
        ("3;1", "2,1;1"): 1,
        ("3;1", ";2,1,1"): 1,
        ("3;1", "1;1,1,1"): 1,
        ("1;3", "2,1;1"): 1,
        ("1;3", "1,1;2"): 1,
        ("1;3", "1,1,1;1"): 1,
        ("2;2", "2,1;1"): 1,
        ("1,1;2", "1,1,1;1"): 1,
        (";2,1,1", "1;1,1,1"): 1,
    },
}

CENTER_DIMS = {0: (2, 4, 4, 5), 2: (2, 4, 4, 6), 3: (2, 4, 4, 5)}


def expected_cartan(n):
    labels = [str(lam) for lam in all_bipartitions(n)]
    C = np.eye(len(labels), dtype=np.int64)
    for (row, col), value in CARTAN_OFF_DIAGONAL[n].items():
        C[labels.index(row), labels.index(col)] = value
    return labels, C


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cartan_matrices_over_q(n):
    labels, expected = expected_cartan(n)
    frame = cartan_matrix(n)
    assert list(frame.index) == labels and list(frame.columns) == labels
    assert np.array_equal(frame.to_numpy(), expected)
    assert frame.to_numpy().sum() == len(all_compositions(n))


def test_cartan_matrix_n2_p2():
    frame = cartan_matrix(2, 2)
    assert frame.to_numpy().tolist() == [[6]]
    assert list(frame.index) == [";1,1"]


@pytest.mark.parametrize("n,p", [(3, 2), (3, 3)])
def test_modular_cartan_matrices_sum_to_dimension(n, p):
    frame = cartan_matrix(n, p)
    assert frame.shape[0] == len(bip_classification(n, p).bip_p_prime)
    assert frame.to_numpy().sum() == len(all_compositions(n))


def test_decomposition_matrix():
    D = decomposition_matrix(2, 2)
    assert D.shape == (5, 1)
    assert np.all(D == 1)
    assert np.array_equal(decomposition_matrix(3, 5), np.eye(10, dtype=np.int64))


@pytest.mark.parametrize("n", [2, 3])
def test_cartan_properties(n):
    assert cartan_properties(n) == {
        "diagonal_ones": True,
        "length_condition": True,
        "parity_blocks": True,
        "tau_embedding": True,
    }


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_radical_dimension(n, p):
    expected = len(all_compositions(n)) - len(bip_classification(n, p).bip_p_prime)
    assert radical(n, p).dim == expected


def test_radical_dimension_n2():
    assert radical(2, 0).dim == 1
    assert radical(2, 2).dim == 5


@pytest.mark.parametrize("n,p", [(3, 0), (3, 2), (3, 3)])
def test_radical_is_a_nilpotent_ideal(n, p):
    rad = radical(n, p)
    assert rad.is_two_sided_ideal()
    assert radical_power_dims(n, p)[-1] == 0
    assert simple_characters_vanish_on_radical(n, p)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_loewy_lengths(n):
    for p in (0, 3, 5):
        assert loewy_length_algebra(n, p) == n
    assert loewy_length_algebra(n, 2) == {1: 2, 2: 3, 3: 5, 4: 7}[n]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lower_bound_element(n):
    assert lower_bound_element_check(n)
    formula = lower_bound_power_formula(n)
    for i in range(1, n + 1):
        parts = ",".join("-1" if j == i else "1" for j in range(1, n + 1))
        assert formula.coefficient(parts) == (-1) ** i * math.comb(n - 1, i - 1)
    with pytest.raises(DomainError):
        lower_bound_element(1)


@pytest.mark.parametrize("n,p", [(2, 0), (3, 0), (2, 2), (3, 2), (3, 3)])
def test_lifted_idempotents(n, p):
    family = lift_idempotent_family(n, p)
    assert len(family) == len(bip_classification(n, p).bip_p_prime)
    assert all(family.check().values())


def test_idempotents_of_one_dimensional_blocks(q2):
    family = lift_idempotent_family(2, 0)
    assert family[Bipartition((1, 1), ())] == x_prime_element("1,1", q2) * Fraction(1, 2)
    assert family[Bipartition((), (1, 1))] == x_prime_element("-1,-1", q2) * Fraction(1, 8)


@pytest.mark.parametrize("p", [0, 2, 3])
def test_center_dimensions(p):
    for n, expected in zip(range(1, 5), CENTER_DIMS[p]):
        Z = center(n, p)
        assert Z.dim == expected
        context = get_context(n, p)
        for z in Z.elements():
            for C in context.compositions:
                assert z * x_element(C, context) == x_element(C, context) * z


def test_center_base_change():
    report = center_base_change_report(3, 3)
    assert report["dim_Q"] == report["dim_Fp"] == 4
    assert report["equal"]


@pytest.mark.parametrize("n,count", [(2, 4), (3, 4), (4, 5)])
def test_block_counts(n, count):
    decomposition = blocks(n)
    assert len(decomposition.blocks) == count
    assert sum(len(block) for block in decomposition.blocks) == len(all_bipartitions(n))


def test_block_sizes_n3():
    assert sorted((len(block) for block in blocks(3).blocks), reverse=True) == [4, 4, 1, 1]


def test_central_idempotents_n2(q2):
    def xp(C):
        return x_prime_element(C, q2)

    expected = [
        xp("2") - xp("1,1") * Fraction(1, 2) + xp("-1,-1") * Fraction(1, 8),
        (xp("-2") + xp("1,-1")) * Fraction(1, 2),
        xp("1,1") * Fraction(1, 2),
        xp("-1,-1") * Fraction(1, 8),
    ]
    found = blocks(2).idempotents
    assert len(found) == len(expected)
    for F in expected:
        assert any(F == G for G in found)


def test_central_idempotents_n3_one_dimensional_blocks(q3):
    found = blocks(3).idempotents
    for F in (x_prime_element("1,1,1", q3) * Fraction(1, 6), x_prime_element("-1,-1,-1", q3) * Fraction(1, 48)):
        assert any(F == G for G in found)


def test_blocks_need_p_prime_to_group_order():
    with pytest.raises(DomainError):
        blocks(2, 2)
    assert len(blocks(2, 3).blocks) == center(2, 3).dim


@pytest.mark.parametrize("n,p", [(2, 0), (3, 0), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_projective_dimensions(n, p):
    frame = projective_dims_in_group_algebra(n, p)
    assert frame["match"].all()
    assert frame["dim"].sum() == 2 ** n * math.factorial(n)


def test_projective_dimension_n2_p2():
    frame = projective_dims_in_group_algebra(2, 2)
    assert frame.loc[";1,1", "dim"] == 8


def test_subspace_operations(q2):
    x = x_element("-1,-1", q2)
    line = Subspace.spanned_by(q2, [x])
    assert line.dim == 1
    assert line.contains(x * 3)
    assert not line.contains(q2.one())
    assert line.is_two_sided_ideal()
    assert line.product(line) == line
    assert Subspace(q2, []).dim == 0
    whole = Subspace.spanned_by(q2, [x_element(C, q2) for C in q2.compositions])
    assert whole.dim == 6 and whole.contains(q2.one())


@pytest.mark.slow
@pytest.mark.parametrize("p", [0, 2, 3])
def test_center_dimension_n5(p):
    assert center(5, p).dim == 4


@pytest.mark.slow
def test_lower_bound_element_n5():
    assert lower_bound_element_check(5)
