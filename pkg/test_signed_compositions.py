import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DomainError, SizeMismatchError, UsageError
from hyperoctahedral import conjugacy_type, element_order, enumerate_group
from signed_compositions import (
    Bipartition,
    Generator,
    SignedComposition,
    all_bipartitions,
    all_compositions,
    bip_classification,
    generators,
    is_p_prime,
    is_subset,
    lambda_of,
    lambda_order,
    lambda_p_prime,
    normalizer_order,
    order_relations,
    parse_bipartition,
    parse_composition,
    preceq,
    rank_p,
    saturated_family,
    subset_lambda,
    tau_d,
    tau_n,
)

BIP_COUNTS = {1: 2, 2: 5, 3: 10, 4: 20, 5: 36, 6: 65}


@st.composite
def compositions(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    return draw(st.sampled_from(all_compositions(n)))


def test_composition_counts():
    for n, expected in zip(range(1, 6), (2, 6, 18, 54, 162)):
        assert len(all_compositions(n)) == expected
    for n, expected in BIP_COUNTS.items():
        assert len(all_bipartitions(n)) == expected


def test_sort_order():
    assert [str(C) for C in all_compositions(2)] == ["2", "-2", "1,1", "1,-1", "-1,1", "-1,-1"]
    assert [str(lam) for lam in all_bipartitions(2)] == ["2;", ";2", "1,1;", "1;1", ";1,1"]
    assert [str(lam) for lam in all_bipartitions(3)][2:6] == ["2,1;", "2;1", "1;2", ";2,1"]


def test_zero_parts_are_rejected():
    with pytest.raises(DomainError):
        SignedComposition((1, 0))
    with pytest.raises(DomainError):
        Bipartition((0,), ())


@settings(max_examples=80, deadline=None)
@given(compositions())
def test_lambda_and_hat(C):
    lam = lambda_of(C)
    assert lam.n == C.n
    assert lambda_of(lam.hat()) == lam
    assert lam.hat() in all_compositions(C.n)


def test_generators_follow_the_blocks():
    assert generators(SignedComposition((2, -1))) == [Generator("t", 1), Generator("s", 1)]
    assert generators(SignedComposition((-2, 1))) == [Generator("s", 1), Generator("t", 3)]
    assert generators(SignedComposition((-1, -1))) == []


def test_subset_examples():
    assert is_subset(SignedComposition((1, 1)), SignedComposition((2,)))
    assert is_subset(SignedComposition((-2,)), SignedComposition((2,)))
    assert not is_subset(SignedComposition((2,)), SignedComposition((-2,)))
    assert is_subset(SignedComposition((-1, -1)), SignedComposition((-2,)))
    with pytest.raises(SizeMismatchError):
        is_subset(SignedComposition((1,)), SignedComposition((1, 1)))


def test_preceq_does_not_imply_conjugate_inclusion():
    C, D = SignedComposition((1, -1)), SignedComposition((-2,))
    assert preceq(C, D)
    assert not is_subset(C, D)
    assert not subset_lambda(C, D)


def test_order_relations_report():
    report = order_relations(SignedComposition((-1, 1)), SignedComposition((1, -1)))
    assert report == {"subset": False, "preceq": False, "subset_lambda": True, "equiv": True}


@settings(max_examples=60, deadline=None)
@given(compositions(max_n=3))
def test_relations_are_reflexive(C):
    assert is_subset(C, C)
    assert preceq(C, C)
    assert subset_lambda(C, C)


def test_normalizer_orders():
    assert normalizer_order(SignedComposition((2,))) == 1
    assert normalizer_order(SignedComposition((1, 1))) == 2
    assert normalizer_order(SignedComposition((-1, -1))) == 8
    assert normalizer_order(SignedComposition((1, -1, -1, 1))) == 2 * 8


def test_p_regular_and_p_prime_counts_agree():
    for n in range(1, 7):
        for p in (2, 3, 5):
            classes = bip_classification(n, p)
            assert len(classes.bip_p_prime) == len(classes.bip_p_regular)
    assert len(bip_classification(3, 3).bip_p_prime) == 8
    assert bip_classification(2, 2).bip_p_prime == (Bipartition((), (1, 1)),)
    assert bip_classification(2, 2).bip_p_regular == (Bipartition((2,), ()),)


def test_classification_rejects_composite_characteristic():
    with pytest.raises(DomainError):
        bip_classification(2, 4)


def test_rank_p():
    assert rank_p(Bipartition((), (1, 1)), 2) == 2
    assert rank_p(Bipartition((1, 1, 1), ()), 3) == 1
    assert rank_p(Bipartition((1, 1), (2,)), 2) == 2
    assert rank_p(Bipartition((3,), ()), 0) == 0


def test_lambda_p_prime_examples():
    assert lambda_p_prime(Bipartition((2,), ()), 2) == Bipartition((), (1, 1))
    assert lambda_p_prime(Bipartition((), (3,)), 3) == Bipartition((), (1, 1, 1))
    assert lambda_p_prime(Bipartition((), (3,)), 2) == Bipartition((), (3,))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(all_bipartitions(4)), st.sampled_from((2, 3)))
def test_lambda_p_prime_lands_in_p_prime_classes(lam, p):
    image = lambda_p_prime(lam, p)
    assert is_p_prime(image, p)
    if is_p_prime(lam, p):
        assert image == lam


def test_tau_maps():
    assert tau_n(Bipartition((2,), ())) == Bipartition((2,), (1,))
    D = SignedComposition((1, -1, 2))
    assert tau_d(D, [Bipartition((1,), ()), Bipartition((), (2,))]) == Bipartition((1,), (2, 1))
    with pytest.raises(DomainError):
        tau_d(SignedComposition((-2,)), [])


def test_saturated_families():
    assert len(saturated_family(3, 2)) == 16
    assert all(C.minus_length >= 2 for C in saturated_family(3, 2, negative=True))
    assert saturated_family(2, 0) == list(all_compositions(2))


def test_parsers():
    assert parse_composition("-3,1") == SignedComposition((-3, 1))
    assert parse_composition("(−2, 1)") == SignedComposition((-2, 1))
    assert parse_bipartition("21;1") == Bipartition((2, 1), (1,))
    assert parse_bipartition("2,1;1") == Bipartition((2, 1), (1,))
    assert parse_bipartition(";2") == Bipartition((), (2,))
    assert parse_bipartition("∅;11") == Bipartition((), (1, 1))
    assert str(Bipartition((2, 1), ())) == "2,1;"


@pytest.mark.parametrize("text", ["a,b", "1,0", "1,,2"])
def test_bad_composition_text(text):
    with pytest.raises(UsageError):
        parse_composition(text)


@pytest.mark.parametrize("text", ["2;1;1", "21", "2;x"])
def test_bad_bipartition_text(text):
    with pytest.raises(UsageError):
        parse_bipartition(text)


def test_lambda_order_is_the_element_order():
    for n in (1, 2, 3):
        for w in enumerate_group(n):
            assert lambda_order(conjugacy_type(w)) == element_order(w)
    assert lambda_order(Bipartition((2,), (3,))) == 12
    assert lambda_order(Bipartition((), ())) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_preceq_is_antisymmetric(n):
    comps = all_compositions(n)
    below = {(C, D) for C in comps for D in comps if preceq(C, D)}
    for C, D in below:
        if (D, C) in below:
            assert C == D
