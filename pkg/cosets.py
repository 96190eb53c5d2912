import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from errors import ConsistencyError, SizeMismatchError
from hyperoctahedral import GroupTable, SignedPermutation, capped_cache, group_table
from signed_compositions import (
    SignedComposition,
    all_compositions,
    block_arrays,
    coset_rep_mask,
    generators,
    is_subset,
    simple_roots,
    subgroup_mask,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def subgroup_order(C: SignedComposition) -> int:
    """|W_C|: type B factor 2^c c! for a positive part, c! for a negative one"""
    result = 1
    for c in C.parts:
        result *= (2 ** c if c > 0 else 1) * math.factorial(abs(c))
    return result


@dataclass(frozen=True)
class CosetTable:
    """Minimal left coset representatives X_C in group enumeration order"""
    C: SignedComposition
    reps: Tuple[SignedPermutation, ...]
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.reps)


@capped_cache
def coset_reps(C: SignedComposition) -> CosetTable:
    table = group_table(C.n)
    indices = np.nonzero(coset_rep_mask(table.images, C))[0]
    expected = table.size // subgroup_order(C)
    if len(indices) != expected:
        raise ConsistencyError(f"X_{C} has {len(indices)} elements, expected {expected}")
    return CosetTable(C=C, reps=tuple(table.elements[i] for i in indices), indices=indices)


def _root_images(table: GroupTable, rows: np.ndarray, coords: Tuple[int, ...]) -> np.ndarray:
    """d(alpha) for every image row d"""
    out = np.zeros(rows.shape, dtype=np.int64)
    positions = np.arange(rows.shape[0])
    for i, c in enumerate(coords):
        if c:
            image = rows[:, i]
            np.add.at(out, (positions, np.abs(image) - 1), np.sign(image) * c)
    return out


@dataclass(frozen=True)
class DoubleCosetIndex:
    """X_CD with its refinements X_CD^subset and X_CD^equiv"""
    C: SignedComposition
    D: SignedComposition
    X_CD: Tuple[SignedPermutation, ...]
    subset: Tuple[SignedPermutation, ...]
    equiv: Tuple[SignedPermutation, ...]


@capped_cache
def double_index(C: SignedComposition, D: SignedComposition) -> DoubleCosetIndex:
    if C.n != D.n:
        raise SizeMismatchError(f"Compositions {C} and {D} have different sizes")
    table = group_table(C.n)
    images = table.images
    in_xcd = coset_rep_mask(images, D) & coset_rep_mask(table.invert(images), C)
    rows = images[in_xcd]

    # d^-1 g d in W_D for every generator g of W_C
    subset_mask = np.ones(rows.shape[0], dtype=bool)
    for g in generators(C):
        subset_mask &= subgroup_mask(table.conjugates(rows, g.as_permutation(C.n)), D)

    # d(Delta_D) = Delta_C
    delta_c = simple_roots(C)
    delta_d = simple_roots(D)
    if len(delta_c) == len(delta_d):
        equiv_mask = np.ones(rows.shape[0], dtype=bool)
        targets = np.array([alpha.coords for alpha in delta_c], dtype=np.int64).reshape(len(delta_c), C.n)
        for alpha in delta_d:
            moved = _root_images(table, rows, alpha.coords)
            equiv_mask &= np.any(np.all(moved[:, None, :] == targets[None, :, :], axis=2), axis=1)
    else:
        equiv_mask = np.zeros(rows.shape[0], dtype=bool)

    selected = np.nonzero(in_xcd)[0]
    elements = table.elements
    return DoubleCosetIndex(
        C=C,
        D=D,
        X_CD=tuple(elements[i] for i in selected),
        subset=tuple(elements[i] for i in selected[subset_mask]),
        equiv=tuple(elements[i] for i in selected[equiv_mask]),
    )


def _labels(point: int, block_of: np.ndarray, negative: np.ndarray) -> Tuple[int, int]:
    k = abs(point) - 1
    return int(block_of[k]), (1 if point > 0 else -1) if negative[k] else 0


def _atoms(C: SignedComposition, d: SignedPermutation, D: SignedComposition) -> List[set]:
    """Common refinement of the blocks of D and the blocks of C pulled back by d, on {+-1..+-n}"""
    c_blocks, c_negative = block_arrays(C)
    d_blocks, d_negative = block_arrays(D)
    groups = defaultdict(set)
    for x in list(range(1, D.n + 1)) + list(range(-D.n, 0)):
        key = (_labels(x, d_blocks, d_negative), _labels(d(x), c_blocks, c_negative))
        groups[key].add(x)
    return list(groups.values())


def _composition_from_atoms(atoms: List[set]) -> SignedComposition:
    """None when the atoms are not the blocks of a standard parabolic-type subgroup"""
    parts = []
    for atom in atoms:
        if not any(x > 0 for x in atom):
            continue
        if all(-x in atom for x in atom):
            support = sorted(x for x in atom if x > 0)
            sign = 1
        elif all(x > 0 for x in atom):
            support = sorted(atom)
            sign = -1
        else:
            return None
        parts.append((support, sign))
    parts.sort(key=lambda item: item[0][0])
    expected = 1
    values = []
    for support, sign in parts:
        if support != list(range(expected, expected + len(support))):
            return None
        expected += len(support)
        values.append(sign * len(support))
    return SignedComposition(tuple(values))


def _conjugate_generators_in(E: SignedComposition, d: SignedPermutation, C: SignedComposition) -> bool:
    d_inv = d.inverse()
    for g in generators(E):
        conjugated = d * g.as_permutation(E.n) * d_inv
        if not subgroup_mask(np.array(conjugated.images)[None, :], C)[0]:
            return False
    return True


def _intersection_mask(C: SignedComposition, d: SignedPermutation, D: SignedComposition) -> np.ndarray:
    """Membership of every group element in d^-1 W_C d ∩ W_D"""
    table = group_table(D.n)
    d_rows = np.array(d.images)[None, :]
    conjugated = table.compose_images(d_rows, table.compose_images(table.images, table.invert(d_rows)))
    return subgroup_mask(table.images, D) & subgroup_mask(conjugated, C)


def intersection_order(C: SignedComposition, d: SignedPermutation, D: SignedComposition) -> int:
    return int(_intersection_mask(C, d, D).sum())


def _exhaustive_intersection(C: SignedComposition, d: SignedPermutation, D: SignedComposition) -> SignedComposition:
    table = group_table(D.n)
    target = _intersection_mask(C, d, D)
    for E in all_compositions(D.n):
        if is_subset(E, D) and np.array_equal(subgroup_mask(table.images, E), target):
            return E
    raise ConsistencyError(f"No composition E with W_E = d^-1 W_{C} d ∩ W_{D} for d={d}")


def intersection_composition(C: SignedComposition, d: SignedPermutation, D: SignedComposition) -> SignedComposition:
    """E inside D with W_E = d^-1 W_C d ∩ W_D, read off the orbit blocks"""
    E = _composition_from_atoms(_atoms(C, d, D))
    if E is not None and is_subset(E, D) and _conjugate_generators_in(E, d, C):
        # W_E lies inside the intersection; equal orders make them equal
        if subgroup_order(E) == intersection_order(C, d, D):
            return E
    logger.warning(f"Orbit reconstruction failed for C={C}, d={d}, D={D}; searching exhaustively")
    return _exhaustive_intersection(C, d, D)


def complement_group(D: SignedComposition) -> Tuple[SignedPermutation, ...]:
    """W(D) realised as X_DD^equiv, the representatives normalising W_D"""
    return double_index(D, D).equiv
