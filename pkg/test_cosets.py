import pytest

import cosets
from algebra_checks import longest_element_of
from cosets import (
    complement_group,
    coset_reps,
    double_index,
    intersection_composition,
    intersection_order,
    subgroup_order,
)
from errors import SizeMismatchError
from hyperoctahedral import act_on_root, compose, enumerate_group, identity, longest_element, root_is_positive
from signed_compositions import (
    SignedComposition,
    all_compositions,
    equivalent,
    is_subset,
    lambda_of,
    normalizer_order,
    simple_roots,
    subset_lambda,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coset_representatives_are_minimal(n):
    group_size = len(enumerate_group(n))
    for C in all_compositions(n):
        reps = coset_reps(C)
        assert len(reps) * subgroup_order(C) == group_size
        assert identity(n) in reps.reps
        for x in reps.reps:
            assert all(root_is_positive(act_on_root(x, alpha)) for alpha in simple_roots(C))


def test_subgroup_orders():
    assert subgroup_order(SignedComposition((2,))) == 8
    assert subgroup_order(SignedComposition((-2,))) == 2
    assert subgroup_order(SignedComposition((1, -1))) == 2


@pytest.mark.parametrize("n", [2, 3])
def test_double_coset_representatives(n):
    for C in all_compositions(n):
        for D in all_compositions(n):
            index = double_index(C, D)
            left, right = set(coset_reps(C).reps), set(coset_reps(D).reps)
            for d in index.X_CD:
                assert d in right and d.inverse() in left
            assert set(index.equiv) <= set(index.X_CD)
            assert bool(index.subset) == subset_lambda(C, D)


@pytest.mark.parametrize("n", [2, 3])
def test_intersections_lie_inside_d(n):
    for C in all_compositions(n):
        for D in all_compositions(n):
            index = double_index(C, D)
            for d in index.X_CD:
                E = intersection_composition(C, d, D)
                assert is_subset(E, D)
            for d in index.subset:
                assert lambda_of(intersection_composition(C, d, D)) == lambda_of(C)


def test_intersection_examples():
    full = SignedComposition((3,))
    trivial = SignedComposition((-1, -1, -1))
    assert intersection_composition(full, identity(3), full) == full
    D = SignedComposition((2, -1))
    assert intersection_composition(trivial, identity(3), D) == trivial
    assert intersection_composition(full, identity(3), D) == D


@pytest.mark.parametrize("n", [1, 2, 3])
def test_complement_group_order(n):
    for D in all_compositions(n):
        assert len(complement_group(D)) == normalizer_order(D)


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        double_index(SignedComposition((1,)), SignedComposition((2,)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_normalizer_order_divides_the_subset_representatives(n):
    for C in all_compositions(n):
        for D in all_compositions(n):
            index = double_index(C, D)
            assert len(index.subset) % normalizer_order(D) == 0
            if equivalent(C, D):
                assert set(index.equiv) == set(index.subset)
                assert len(index.equiv) == normalizer_order(D)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_longest_element_swaps_sides_of_coset_representatives(n):
    w0 = longest_element(n)
    for C in all_compositions(n):
        reps = coset_reps(C).reps
        wC = longest_element_of(C)
        assert {compose(w0, x) for x in reps} == {compose(x, wC) for x in reps}


@pytest.mark.parametrize("n", [2, 3])
def test_intersection_order_matches_the_composition(n):
    for C in all_compositions(n):
        for D in all_compositions(n):
            for d in double_index(C, D).X_CD:
                E = intersection_composition(C, d, D)
                assert subgroup_order(E) == intersection_order(C, d, D)


def test_undersized_orbit_reconstruction_falls_back_to_search(monkeypatch):
    monkeypatch.setattr(cosets, "_composition_from_atoms", lambda atoms: SignedComposition((-1, -1, -1)))
    full = SignedComposition((3,))
    D = SignedComposition((2, -1))
    assert intersection_composition(full, identity(3), full) == full
    assert intersection_composition(full, identity(3), D) == D
    trivial = SignedComposition((-1, -1, -1))
    assert intersection_composition(trivial, identity(3), D) == trivial
