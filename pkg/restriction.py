import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd

from char_ring import theta_matrix
from cosets import double_index, intersection_composition
from errors import DomainError
from exact_linear import RATIONALS, integer_lattice_is_full, rank
from hyperoctahedral import capped_cache, group_table
from mr_algebra import structure_constants
from signed_compositions import (
    SignedComposition,
    all_bipartitions,
    all_compositions,
    coset_rep_mask,
    is_subset,
    subgroup_mask,
    tau_d,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

_TRIVIAL = SignedComposition((-1,))


def _factor_compositions(c: int) -> Tuple[SignedComposition, ...]:
    """Basis of the tensor factor for a part c of D: Comp(c), or the single (-1)"""
    return all_compositions(c) if c > 0 else (_TRIVIAL,)


def _concatenate(pieces) -> SignedComposition:
    total = SignedComposition(())
    for piece in pieces:
        total = total + piece
    return total


@dataclass(frozen=True, eq=False)
class RestrictionMap:
    """Matrix of Res_D: rows Comp(n), columns the tensor basis of the algebra of W_D"""
    D: SignedComposition
    basis: Tuple[SignedComposition, ...]
    matrix: np.ndarray

    @property
    def factors(self) -> Tuple[int, ...]:
        return self.D.parts

    def apply(self, coords) -> np.ndarray:
        """Res_D of an element given by integer or rational x coordinates"""
        return np.dot(np.asarray(coords), self.matrix)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.matrix,
            index=[str(C) for C in all_compositions(self.D.n)],
            columns=["|".join(str(piece) for piece in split_by_parts(E, self.D)) for E in self.basis],
        )


def _check_semi_positive(D: SignedComposition):
    if not D.is_semi_positive():
        raise DomainError(f"Restriction needs a semi-positive composition, got {D}")


def split_by_parts(E: SignedComposition, D: SignedComposition) -> List[SignedComposition]:
    """Cut E into consecutive pieces of sizes |d_1|, |d_2|, ..."""
    pieces, current, size = [], [], 0
    parts = iter(E.parts)
    for d in D.parts:
        while size < abs(d):
            c = next(parts)
            current.append(c)
            size += abs(c)
        if size != abs(d):
            raise DomainError(f"{E} does not refine {D}")
        pieces.append(SignedComposition(tuple(current)))
        current, size = [], 0
    return pieces


@capped_cache
def restriction(D: SignedComposition) -> RestrictionMap:
    """Res_D x_C = sum over d in X_CD of x_E with W_E = d^-1 W_C d ∩ W_D"""
    _check_semi_positive(D)
    basis = tuple(_concatenate(pieces) for pieces in product(*[_factor_compositions(c) for c in D.parts]))
    position = {E: j for j, E in enumerate(basis)}
    comps = all_compositions(D.n)
    matrix = np.zeros((len(comps), len(basis)), dtype=np.int64)
    for i, C in enumerate(comps):
        for d in double_index(C, D).X_CD:
            matrix[i, position[intersection_composition(C, d, D)]] += 1
    logger.info(f"Computed restriction to {D}: {len(comps)} x {len(basis)}")
    return RestrictionMap(D=D, basis=basis, matrix=matrix)


def res_k_n(k: int, n: int) -> RestrictionMap:
    """Res_D for D = (k, -1, ..., -1), a map onto the algebra of W_k"""
    if not 1 <= k <= n:
        raise DomainError(f"Need 1 <= k <= n, got k={k}, n={n}")
    return restriction(SignedComposition((k,) + (-1,) * (n - k)))


def restriction_surjectivity(k: int, n: int, ring: str = "Q") -> Dict:
    """Rank over Q, or whether the rows generate the whole lattice over Z"""
    rmap = res_k_n(k, n)
    target = len(rmap.basis)
    if ring == "Q":
        value = rank(rmap.matrix, RATIONALS)
        surjective = value == target
    elif ring == "Z":
        value = None
        surjective = integer_lattice_is_full(rmap.matrix.tolist(), target)
    else:
        raise DomainError(f"Unknown ring '{ring}', expected Q or Z")
    return {"k": k, "n": n, "ring": ring, "rank": value, "target_dim": target, "surjective": surjective}


@capped_cache
def _tensor_constants(D: SignedComposition) -> np.ndarray:
    """Structure constants of the tensor product of the factor algebras"""
    mu = np.ones((1, 1, 1), dtype=np.int64)
    for c in D.parts:
        factor = structure_constants(c) if c > 0 else np.ones((1, 1, 1), dtype=np.int64)
        size = mu.shape[0] * factor.shape[0]
        mu = np.einsum("abc,def->adbecf", mu, factor).reshape(size, size, size)
    return mu


def restricted_product(D: SignedComposition, a, b) -> np.ndarray:
    """Product in the algebra of W_D on tensor-basis coordinates"""
    _check_semi_positive(D)
    return np.einsum("i,j,ijk->k", np.asarray(a), np.asarray(b), _tensor_constants(D))


def _kron_all(matrices) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.int64)
    for M in matrices:
        out = np.kron(out, M)
    return out


def _law_product(rmap: RestrictionMap) -> bool:
    """x_D Res_D(x_C) = x_C x_D, reading x_D x^D_E as x_E"""
    n = rmap.D.n
    comps = all_compositions(n)
    mu = structure_constants(n)
    columns = [comps.index(E) for E in rmap.basis]
    embedded = np.zeros((len(comps), len(comps)), dtype=np.int64)
    embedded[:, columns] = rmap.matrix
    return bool(np.array_equal(mu[:, comps.index(rmap.D), :], embedded))


def _law_morphism(rmap: RestrictionMap) -> bool:
    """Res_D(x_C x_C') = Res_D(x_C) Res_D(x_C')"""
    mu = structure_constants(rmap.D.n)
    R = rmap.matrix
    lhs = np.einsum("abf,fe->abe", mu, R)
    left = np.einsum("ai,ijk->ajk", R, _tensor_constants(rmap.D))
    rhs = np.einsum("bj,ajk->abk", R, left)
    return bool(np.array_equal(lhs, rhs))


def _law_transitivity(rmap: RestrictionMap) -> Tuple[int, bool]:
    """Res_C^D o Res_D = Res_C for every semi-positive C inside D"""
    D = rmap.D
    checked, ok = 0, True
    for C in all_compositions(D.n):
        if not (C.is_semi_positive() and is_subset(C, D)):
            continue
        inner = []
        for d, piece in zip(D.parts, split_by_parts(C, D)):
            inner.append(restriction(piece).matrix if d > 0 else np.ones((1, 1), dtype=np.int64))
        if not np.array_equal(np.dot(rmap.matrix, _kron_all(inner)), restriction(C).matrix):
            logger.error(f"Transitivity failed for {C} inside {D}")
            ok = False
        checked += 1
    return checked, ok


def _induced_trivial_counts(rows: np.ndarray, E: SignedComposition, w) -> int:
    table = group_table(E.n)
    return int(subgroup_mask(table.conjugates(rows, w), E).sum())


def _law_theta(rmap: RestrictionMap) -> bool:
    """theta_D(Res_D x_C) equals theta(x_C) restricted to W_D, evaluated at every w in W_D"""
    D = rmap.D
    table = group_table(D.n)
    images = table.images
    in_wd = subgroup_mask(images, D)
    members = [table.elements[i] for i in np.nonzero(in_wd)[0]]
    local_rows = {E: images[coset_rep_mask(images, E) & in_wd] for E in rmap.basis}
    global_rows = {C: images[coset_rep_mask(images, C)] for C in all_compositions(D.n)}
    for w in members:
        local = np.array([_induced_trivial_counts(local_rows[E], E, w) for E in rmap.basis], dtype=np.int64)
        for i, C in enumerate(all_compositions(D.n)):
            if int(np.dot(rmap.matrix[i], local)) != _induced_trivial_counts(global_rows[C], C, w):
                logger.error(f"Character compatibility failed for C={C}, D={D}, w={w}")
                return False
    return True


def _law_characters(rmap: RestrictionMap) -> bool:
    """pi_tau_D(lambdas) = (pi_lambda_1 x ... x pi_lambda_k) o Res_D"""
    D = rmap.D
    bips = all_bipartitions(D.n)
    theta_n = theta_matrix(D.n)
    positive = [c for c in D.parts if c > 0]
    for lambdas in product(*[all_bipartitions(c) for c in positive]):
        picks = iter(lambdas)
        factors = []
        for c in D.parts:
            if c > 0:
                factors.append(theta_matrix(c)[all_bipartitions(c).index(next(picks))].reshape(1, -1))
            else:
                factors.append(np.ones((1, 1), dtype=np.int64))
        evaluation = _kron_all(factors).reshape(-1)
        expected = theta_n[bips.index(tau_d(D, lambdas))]
        if not np.array_equal(np.dot(rmap.matrix, evaluation), expected):
            return False
    return True


def restriction_laws(D: SignedComposition) -> Dict:
    rmap = restriction(D)
    transitivity_checked, transitivity = _law_transitivity(rmap)
    report = {
        "D": str(D),
        "product": _law_product(rmap),
        "morphism": _law_morphism(rmap),
        "transitivity": transitivity,
        "transitivity_pairs": transitivity_checked,
        "theta": _law_theta(rmap),
        "characters": _law_characters(rmap),
    }
    report["passed"] = all(report[key] for key in ("product", "morphism", "transitivity", "theta", "characters"))
    if not report["passed"]:
        logger.error(f"Restriction laws failed for {D}: {report}")
    return report
