import logging
import math
from itertools import combinations
from typing import Dict, List, Tuple

import numpy as np

from char_ring import ClassFunction, theta, theta_matrix
from config import ENGINE_CONFIG
from errors import ConsistencyError, FieldError
from exact_linear import RATIONALS, Polynomial, char_poly_of_matrix, left_kernel_basis, rank, same_row_space
from hyperoctahedral import SignedPermutation, longest_element
from mr_algebra import (
    AlgebraContext,
    AlgebraElement,
    get_context,
    is_left_ideal_span,
    is_right_ideal_span,
    is_subalgebra_span,
    is_two_sided_ideal_span,
    left_mult_matrix,
    min_poly,
    multiply,
    relation_matrix,
    support_and_saturations,
    x_element,
    x_prime_element,
)
from signed_compositions import (
    SignedComposition,
    all_bipartitions,
    all_compositions,
    bip_classification,
    is_subset,
    lambda_of,
    normalizer_order,
    saturated_family,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _group_indicator(context: AlgebraContext, w: SignedPermutation) -> np.ndarray:
    vector = context.field.zeros(context.table.size)
    vector[context.table.index[w]] = context.field.element(1)
    return vector


def longest_element_of(C: SignedComposition) -> SignedPermutation:
    """w_C: i -> -i on positive blocks, reversal on negative blocks"""
    images = []
    for offset, c in C.blocks():
        if c > 0:
            images.extend(-(offset + i) for i in range(1, c + 1))
        else:
            images.extend(offset + abs(c) + 1 - i for i in range(1, abs(c) + 1))
    return SignedPermutation(tuple(images))


def longest_element_structure(n: int, characteristic: int = 0) -> Dict:
    """e_n^+- = (1 +- w_n)/2, their eigenspaces and the w_n-eigenvectors x'_C"""
    if characteristic == 2:
        raise FieldError("e_n^+ and e_n^- need 2 to be invertible")
    context = get_context(n, characteristic)
    field = context.field
    w = context.from_group_vector(_group_indicator(context, longest_element(n)))
    one = context.one()
    half = field.inverse(field.element(2))
    e_plus = (one + w) * half
    e_minus = (one - w) * half

    central = all(
        x_element(C, context) * e_plus == e_plus * x_element(C, context) for C in context.compositions
    )
    eigen = True
    commutation = True
    for C in context.compositions:
        x_prime = x_prime_element(C, context)
        sign = 1 if (n - C.minus_length) % 2 == 0 else -1
        if w * x_prime != x_prime * sign:
            eigen = False
        x_vec = context.basis_element(C).group_vector
        lhs = context.group_algebra_product(_group_indicator(context, longest_element(n)), x_vec)
        rhs = context.group_algebra_product(x_vec, _group_indicator(context, longest_element_of(C)))
        if not np.array_equal(lhs, rhs):
            commutation = False
    dims = (
        rank(context.right_matrix(e_plus.coords), field),
        rank(context.right_matrix(e_minus.coords), field),
    )
    return {
        "e_plus": e_plus,
        "e_minus": e_minus,
        "idempotent": e_plus * e_plus == e_plus and e_minus * e_minus == e_minus,
        "orthogonal": (e_plus * e_minus).is_zero(),
        "sum_is_one": e_plus + e_minus == one,
        "central": central,
        "dims": dims,
        "expected_dim": 3 ** (n - 1),
        "eigen_check": eigen,
        "longest_commutation": commutation,
    }


def theta_invariants(n: int, characteristic: int = 0) -> Dict[str, bool]:
    """theta(w_n) = eps_n, the theta-matrix diagonal and Ker theta in the x' basis"""
    context = get_context(n, characteristic)
    field = context.field
    bips = all_bipartitions(n)
    comps = all_compositions(n)

    w = context.from_group_vector(_group_indicator(context, longest_element(n)))
    signs = [1 if (n - lam.hat().minus_length) % 2 == 0 else -1 for lam in bips]
    epsilon = ClassFunction(n, field.coerce(np.array(signs, dtype=np.int64)), field)

    M = theta_matrix(n)
    diagonal = [int(M[i, comps.index(lam.hat())]) for i, lam in enumerate(bips)]
    report = {
        "longest_is_sign": theta(w) == epsilon,
        "diagonal_is_normalizer_order": diagonal == [normalizer_order(lam.hat()) for lam in bips],
    }
    if characteristic != 2:
        x_diffs, x_prime_diffs = [], []
        for C in comps:
            hat = lambda_of(C).hat()
            if C != hat:
                x_diffs.append((x_element(hat, context) - x_element(C, context)).coords)
                x_prime_diffs.append((x_prime_element(hat, context) - x_prime_element(C, context)).coords)
        if x_diffs:
            report["kernel_in_x_prime_basis"] = same_row_space(np.array(x_diffs), np.array(x_prime_diffs), field)
        else:
            report["kernel_in_x_prime_basis"] = True
    logger.info(f"Theta invariants for n={n}, p={characteristic}: {report}")
    return report


def composition_of_subset(I: frozenset, n: int) -> SignedComposition:
    """C(I): 1 at the positions in I, -1 elsewhere"""
    return SignedComposition(tuple(1 if i in I else -1 for i in range(1, n + 1)))


def quasi_idempotent_family(n: int, characteristic: int = 0) -> Dict:
    """x'_C(I) x'_C(J) = 2^(n-|I|) |I|! (n-|I|)! x'_C(J) when |I| = |J|, else 0"""
    context = get_context(n, characteristic)
    subsets = [frozenset(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]
    elements = {I: x_prime_element(composition_of_subset(I, n), context) for I in subsets}
    failures = []
    for I in subsets:
        for J in subsets:
            product = elements[I] * elements[J]
            if len(I) == len(J):
                factor = 2 ** (n - len(I)) * math.factorial(len(I)) * math.factorial(n - len(I))
                expected = elements[J] * factor
            else:
                expected = context.zero()
            if product != expected:
                failures.append((sorted(I), sorted(J)))
    full = elements[frozenset(range(1, n + 1))]
    central = all(full * x_element(C, context) == x_element(C, context) * full for C in context.compositions)
    if failures:
        logger.error(f"Quasi-idempotent law failed for n={n} on {len(failures)} pairs")
    return {
        "pairs_checked": len(subsets) ** 2,
        "failures": failures,
        "central": central,
        "passed": not failures and central,
    }


def _sample_elements(context: AlgebraContext, seed: int, samples: int) -> List[AlgebraElement]:
    rng = np.random.default_rng(seed)
    basis = [x_element(C, context) for C in context.compositions]
    return basis + [context.random_element(rng) for _ in range(samples)]


def _kernel_image_direct(matrix: np.ndarray) -> bool:
    """Ker g + Im g is direct iff rank g^2 = rank g"""
    squared = np.dot(matrix, matrix)
    return rank(squared, RATIONALS) == rank(matrix, RATIONALS)


def positivity_suite(n: int, seed: int = None, samples: int = None) -> Dict:
    """Right ideals, invertibility, powers and centralizers of nonnegative elements over Q"""
    seed = ENGINE_CONFIG["SEED"] if seed is None else seed
    samples = ENGINE_CONFIG["RANDOM_SAMPLES"] if samples is None else samples
    context = get_context(n, 0)
    identity_rows = RATIONALS.identity(context.dim)
    top = context.index[SignedComposition((n,))]
    checks = {
        "right_ideal_is_saturated_span": True,
        "invertible_iff_top_coefficient": True,
        "power_ideals_equal": True,
        "kernel_image_direct": True,
        "centralizers_of_powers_equal": True,
        "zero_root_at_most_simple": True,
    }
    failures = []
    for k, a in enumerate(_sample_elements(context, seed, samples)):
        L = context.left_matrix(a.coords)   # rows a x_D
        R = context.right_matrix(a.coords)  # rows x_C a
        sat_right = support_and_saturations(a).sat_right
        expected = identity_rows[[context.index[C] for C in sat_right]]
        results = {
            "right_ideal_is_saturated_span": same_row_space(L, expected, RATIONALS) if sat_right else rank(L, RATIONALS) == 0,
            "invertible_iff_top_coefficient": (rank(L, RATIONALS) == context.dim) == (a.coords[top] > 0),
            "kernel_image_direct": _kernel_image_direct(L) and _kernel_image_direct(R),
        }
        commutator = L - R
        power_ok, centralizer_ok = True, True
        for r in (2, 3):
            power = a ** r
            L_r = context.left_matrix(power.coords)
            power_ok &= same_row_space(L_r, L, RATIONALS)
            kernel = left_kernel_basis(commutator, RATIONALS)
            kernel_r = left_kernel_basis(L_r - context.right_matrix(power.coords), RATIONALS)
            centralizer_ok &= same_row_space(kernel, kernel_r, RATIONALS)
        results["power_ideals_equal"] = power_ok
        results["centralizers_of_powers_equal"] = centralizer_ok
        f = min_poly(a)
        results["zero_root_at_most_simple"] = f.coeffs[0] != 0 or (f.degree >= 1 and f.coeffs[1] != 0)
        for name, ok in results.items():
            if not ok:
                checks[name] = False
                failures.append({"sample": k, "check": name})
    if failures:
        logger.error(f"Positivity suite for n={n} failed {len(failures)} checks")
    return {"n": n, "seed": seed, "samples": samples, "checks": checks, "failures": failures}


def triangularity_check(n: int, characteristic: int = 0, seed: int = None, samples: int = 0) -> bool:
    """xi_D(a x_D) = pi_lambda(D)(a) and xi_E(a x_D) = 0 unless E precedes D"""
    seed = ENGINE_CONFIG["SEED"] if seed is None else seed
    context = get_context(n, characteristic)
    order = relation_matrix(n, "preceq")
    for a in _sample_elements(context, seed, samples):
        L = context.left_matrix(a.coords)
        values = theta(a)
        for j, D in enumerate(context.compositions):
            if L[j, j] != values[lambda_of(D)]:
                return False
            outside = ~order[:, j]
            if np.any(L[j, outside] != 0):
                return False
    return True


def closure_check(n: int, characteristic: int = 0) -> Dict:
    """Every product x_C x_D computed in the group algebra lies in the span and matches the constants"""
    context = get_context(n, characteristic)
    mismatches = []
    for C in context.compositions:
        for D in context.compositions:
            a, b = x_element(C, context), x_element(D, context)
            if multiply(a, b, via="group") != multiply(a, b):
                mismatches.append((str(C), str(D)))
    return {"pairs_checked": context.dim ** 2, "mismatches": mismatches, "passed": not mismatches}


def solomon_subalgebra_check(n: int, characteristic: int = 0) -> Dict[str, bool]:
    """Spans over parabolic and over positive compositions are subalgebras"""
    context = get_context(n, characteristic)
    parabolic = [C for C in context.compositions if C.is_parabolic()]
    positive = [C for C in context.compositions if C.minus_length == 0]
    return {
        "parabolic": is_subalgebra_span(context, parabolic),
        "positive": is_subalgebra_span(context, positive),
    }


def saturation_ideal_check(n: int, characteristic: int = 0) -> Dict[str, bool]:
    """Saturated families span ideals on the matching side"""
    context = get_context(n, characteristic)
    left = all(
        is_left_ideal_span(context, support_and_saturations(x_element(D, context)).sat_left)
        for D in context.compositions
    )
    right = all(
        is_right_ideal_span(context, support_and_saturations(x_element(D, context)).sat_right)
        for D in context.compositions
    )
    two_sided = all(
        is_two_sided_ideal_span(context, saturated_family(n, k, negative))
        for k in range(n + 1)
        for negative in (False, True)
    )
    return {"left": left, "right": right, "two_sided": two_sided}


def char_poly_check(n: int, seed: int = None, samples: int = None) -> bool:
    """char poly of left multiplication equals prod over C of (T - pi_lambda(C)(a))"""
    seed = ENGINE_CONFIG["SEED"] if seed is None else seed
    samples = ENGINE_CONFIG["RANDOM_SAMPLES"] if samples is None else samples
    context = get_context(n, 0)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        a = context.random_element(rng)
        values = theta(a)
        expected = Polynomial.from_roots([values[lambda_of(C)] for C in context.compositions], RATIONALS)
        if char_poly_of_matrix(left_mult_matrix(a), RATIONALS) != expected:
            return False
    return True


def order_relations_check(n: int, primes: Tuple[int, ...] = (2, 3, 5)) -> Dict:
    """subset, preceq and subset_lambda against each other and against theta"""
    comps = all_compositions(n)
    bips = all_bipartitions(n)
    M = theta_matrix(n)
    below = relation_matrix(n, "preceq")
    conjugate_below = relation_matrix(n, "subset_lambda")
    by_character = np.array(
        [[M[bips.index(lambda_of(C)), j] >= 1 for j in range(len(comps))] for C in comps], dtype=bool
    )
    inside = np.array([[is_subset(C, D) for D in comps] for C in comps], dtype=bool)
    same_lambda = np.array([[lambda_of(C) == lambda_of(D) for D in comps] for C in comps], dtype=bool)
    counts = {}
    for p in primes:
        try:
            bip_classification(n, p)
            counts[p] = True
        except ConsistencyError as e:
            logger.error(f"Error classifying bipartitions for n={n}, p={p}: {str(e)}")
            counts[p] = False
    report = {
        "subset_lambda_matches_character": bool(np.array_equal(conjugate_below, by_character)),
        "subset_implies_preceq": not np.any(inside & ~below),
        "subset_implies_subset_lambda": not np.any(inside & ~conjugate_below),
        "preceq_comparison": all(
            is_subset(C.positive(), D.positive()) and C.length >= D.length and C.minus_length >= D.minus_length
            for i, C in enumerate(comps)
            for j, D in enumerate(comps)
            if below[i, j]
        ),
        "equivalence_is_same_lambda": bool(np.array_equal(conjugate_below & conjugate_below.T, same_lambda)),
        "p_regular_count_matches": all(counts.values()),
    }
    report["passed"] = all(report.values())
    return report
