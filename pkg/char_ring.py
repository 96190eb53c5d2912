import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from cosets import coset_reps
from errors import ConsistencyError, DomainError, FieldError, SizeMismatchError
from exact_linear import (
    RATIONALS,
    Field,
    field_for,
    matrix_inverse,
    rank,
    row_space,
)
from hyperoctahedral import capped_cache, coxeter_element, group_table
from mr_algebra import AlgebraContext, AlgebraElement, structure_constants
from signed_compositions import (
    Bipartition,
    SignedComposition,
    all_bipartitions,
    all_compositions,
    bip_classification,
    lambda_of,
    lambda_p_prime,
    rank_p,
    subgroup_mask,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """Values on the conjugacy classes, indexed by Bip(n) in sorted order"""
    n: int
    values: np.ndarray
    field: Field = RATIONALS

    @property
    def labels(self) -> Tuple[Bipartition, ...]:
        return all_bipartitions(self.n)

    def _check(self, other: "ClassFunction"):
        if self.n != other.n:
            raise SizeMismatchError(f"Class functions of W{self.n} and W{other.n}")
        if self.field != other.field:
            raise FieldError(f"Cannot mix {self.field.name} and {other.field.name}")

    def __getitem__(self, lam: Bipartition):
        return self.values[self.labels.index(lam)]

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.n, self.field.normalize(self.values + other.values), self.field)

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.n, self.field.normalize(self.values - other.values), self.field)

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        self._check(other)
        return ClassFunction(self.n, self.field.normalize(self.values * other.values), self.field)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        self._check(other)
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None

    @classmethod
    def constant(cls, n: int, value=1, field: Field = RATIONALS) -> "ClassFunction":
        size = len(all_bipartitions(n))
        return cls(n, field.coerce(np.full(size, value, dtype=np.int64)), field)

    @classmethod
    def indicator(cls, n: int, labels: Sequence[Bipartition], field: Field = RATIONALS) -> "ClassFunction":
        bips = all_bipartitions(n)
        chosen = set(labels)
        return cls(n, field.coerce(np.array([1 if lam in chosen else 0 for lam in bips], dtype=np.int64)), field)

    def to_dict(self) -> Dict[str, str]:
        return {str(lam): str(v) for lam, v in zip(self.labels, self.values)}


@capped_cache
def theta_matrix(n: int) -> np.ndarray:
    """M[lambda, D] = theta(x_D)(lambda) = #{x in X_D : x^-1 cox_lambda x in W_D}"""
    bips = all_bipartitions(n)
    comps = all_compositions(n)
    table = group_table(n)
    M = np.zeros((len(bips), len(comps)), dtype=np.int64)
    for j, D in enumerate(comps):
        rows = table.images[coset_reps(D).indices]
        for i, lam in enumerate(bips):
            M[i, j] = int(subgroup_mask(table.conjugates(rows, coxeter_element(lam.hat())), D).sum())
    logger.info(f"Computed theta matrix for n={n}: {len(bips)} classes x {len(comps)} compositions")
    return M


def theta(a: AlgebraElement) -> ClassFunction:
    context = a.context
    M = context.field.coerce(theta_matrix(context.n))
    values = context.vector_times_matrix(a.coords, M.T)
    return ClassFunction(context.n, values, context.field)


def pi_lambda(lam: Bipartition, a: AlgebraElement):
    """pi_lambda(a) = theta(a)(lambda)"""
    if lam.n != a.context.n:
        raise DomainError(f"Bipartition {lam} has size {lam.n}, expected {a.context.n}")
    return theta(a)[lam]


def subset_lambda_by_character(C: SignedComposition, D: SignedComposition) -> bool:
    """pi_lambda(C)(x_D) >= 1"""
    if C.n != D.n:
        raise SizeMismatchError(f"Compositions {C} and {D} have different sizes")
    bips = all_bipartitions(C.n)
    comps = all_compositions(C.n)
    return bool(theta_matrix(C.n)[bips.index(lambda_of(C)), comps.index(D)] >= 1)


def character_table_matrix(n: int, p: int = 0) -> Tuple[List[Bipartition], List[Bipartition], np.ndarray]:
    """(rows Bip_p', columns Bip_p-reg, entries pi_lambda(x_mu^) reduced into the field)"""
    classes = bip_classification(n, p)
    bips = all_bipartitions(n)
    comps = all_compositions(n)
    M = theta_matrix(n)
    rows = list(classes.bip_p_prime)
    cols = list(classes.bip_p_regular)
    entries = M[np.ix_([bips.index(lam) for lam in rows], [comps.index(mu.hat()) for mu in cols])]
    if p:
        entries = entries % p
    return rows, cols, entries


def character_table(n: int, p: int = 0) -> pd.DataFrame:
    rows, cols, entries = character_table_matrix(n, p)
    return pd.DataFrame(
        entries,
        index=[str(lam) for lam in rows],
        columns=[f"x[{mu.hat()}]" for mu in cols],
    )


def is_lower_unitriangular_shape(entries: np.ndarray) -> bool:
    """Nonzero diagonal and zeros above it"""
    size = entries.shape[0]
    if entries.shape != (size, size):
        return False
    return bool(np.all(np.diag(entries) != 0) and not np.any(np.triu(entries, k=1) != 0))


def ker_theta_basis(context: AlgebraContext) -> List[AlgebraElement]:
    """x_{lambda^} - x_C for every C with lambda(C) = lambda and C != lambda^"""
    basis = []
    for C in context.compositions:
        representative = lambda_of(C).hat()
        if C != representative:
            basis.append(context.basis_element(representative) - context.basis_element(C))
    return basis


def idempotent_functions(n: int, p: int = 0) -> Dict[Bipartition, ClassFunction]:
    """e_lambda (p = 0) or e_{lambda,p'}: indicator of the classes whose p'-part is lambda"""
    classes = bip_classification(n, p)
    if p == 0:
        return {lam: ClassFunction.indicator(n, [lam]) for lam in classes.bip}
    return {
        lam: ClassFunction.indicator(n, [mu for mu in classes.bip if lambda_p_prime(mu, p) == lam])
        for lam in classes.bip_p_prime
    }


@capped_cache
def _phi_values(n: int) -> np.ndarray:
    """Row lambda holds phi_lambda = theta(x_lambda^) on every class"""
    bips = all_bipartitions(n)
    comps = all_compositions(n)
    M = theta_matrix(n)
    return M[:, [comps.index(lam.hat()) for lam in bips]].T.copy()


@capped_cache
def phi_structure_constants(n: int) -> np.ndarray:
    """T[lambda, mu, nu] with phi_lambda phi_mu = sum_nu T[lambda, mu, nu] phi_nu"""
    bips = all_bipartitions(n)
    comps = all_compositions(n)
    mu = structure_constants(n)
    hats = [comps.index(lam.hat()) for lam in bips]
    collapse = np.zeros((len(comps), len(bips)), dtype=np.int64)
    for j, C in enumerate(comps):
        collapse[j, bips.index(lambda_of(C))] = 1
    T = np.einsum("abc,cd->abd", mu[np.ix_(hats, hats)], collapse)
    logger.info(f"Computed phi structure constants for n={n}")
    return T


class PhiBasisRing:
    """K Irr Wn in the basis phi_lambda = theta(x_lambda^)"""

    def __init__(self, n: int, field: Field):
        self.n = n
        self.field = field
        self.labels = all_bipartitions(n)
        self.size = len(self.labels)
        self.constants = field.coerce(phi_structure_constants(n))

    def element(self, coords) -> "PhiElement":
        return PhiElement(self, self.field.coerce(np.asarray(coords)).reshape(self.size))

    def basis_element(self, lam: Bipartition) -> "PhiElement":
        coords = self.field.zeros(self.size)
        coords[self.labels.index(lam)] = self.field.element(1)
        return PhiElement(self, coords)

    def one(self) -> "PhiElement":
        return self.basis_element(Bipartition((self.n,), ()))

    def product_coords(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        flat = self.constants.reshape(self.size, self.size * self.size)
        left = (self.field.dot(a, flat) if self.field.characteristic else np.dot(a, flat)).reshape(self.size, self.size)
        return self.field.dot(b, left) if self.field.characteristic else np.dot(b, left)

    @cached_property
    def _inverse_values(self) -> np.ndarray:
        return matrix_inverse(RATIONALS.coerce(_phi_values(self.n)), RATIONALS)

    def coordinates(self, function: ClassFunction) -> np.ndarray:
        """phi coordinates over Q of a rational class function"""
        if function.field != RATIONALS:
            raise FieldError("phi coordinates are solved over Q")
        return np.dot(RATIONALS.coerce(function.values), self._inverse_values)

    def from_class_function(self, function: ClassFunction) -> "PhiElement":
        """Reduce the rational phi coordinates into the ring's field"""
        coords = self.coordinates(function)
        if self.field.characteristic:
            p = self.field.characteristic
            bad = [str(lam) for lam, c in zip(self.labels, coords) if Fraction(c).denominator % p == 0]
            if bad:
                raise ConsistencyError(f"phi coordinates are not {p}-integral at {', '.join(bad)}")
        return self.element(self.field.array(coords))

    def values(self, element: "PhiElement") -> ClassFunction:
        """Class-function values; faithful only over Q"""
        return ClassFunction(self.n, np.dot(element.coords, RATIONALS.coerce(_phi_values(self.n))), RATIONALS)


@dataclass(frozen=True, eq=False)
class PhiElement:
    ring: PhiBasisRing
    coords: np.ndarray

    def __add__(self, other: "PhiElement") -> "PhiElement":
        return self.ring.element(self.ring.field.normalize(self.coords + other.coords))

    def __sub__(self, other: "PhiElement") -> "PhiElement":
        return self.ring.element(self.ring.field.normalize(self.coords - other.coords))

    def __mul__(self, other: "PhiElement") -> "PhiElement":
        return self.ring.element(self.ring.product_coords(self.coords, other.coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhiElement):
            return NotImplemented
        return bool(np.array_equal(self.coords, other.coords))

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.coords != 0)


@capped_cache
def phi_ring(n: int, characteristic: int = 0) -> PhiBasisRing:
    return PhiBasisRing(n, field_for(characteristic))


def _filtration_rows(ring: PhiBasisRing, p: int, i: int) -> np.ndarray:
    """Coordinates spanning I_i = span{phi_lambda : rank_p(lambda) >= i}"""
    chosen = [k for k, lam in enumerate(ring.labels) if rank_p(lam, p) >= i]
    return ring.field.identity(ring.size)[chosen]


def _product_space(ring: PhiBasisRing, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    if left.shape[0] == 0 or right.shape[0] == 0:
        return ring.field.zeros((0, ring.size))
    rows = [ring.product_coords(a, b) for a in left for b in right]
    basis, _ = row_space(np.stack(rows), ring.field)
    return basis


def irr_radical_power_dims(n: int, p: int = 0) -> List[int]:
    """dim Rad^1, Rad^2, ... of K Irr Wn, ending with the first 0"""
    ring = phi_ring(n, p)
    radical, _ = row_space(_filtration_rows(ring, p, 1), ring.field)
    dims = [radical.shape[0]]
    power = radical
    while power.shape[0]:
        power = _product_space(ring, power, radical)
        dims.append(power.shape[0])
        logger.debug(f"Irr radical power {len(dims)} for n={n}, p={p}: dim {power.shape[0]}")
    return dims


def irr_loewy_length(n: int, p: int = 0) -> int:
    return len(irr_radical_power_dims(n, p))


def filtration_is_multiplicative(n: int, p: int) -> bool:
    """I_i I_j inside I_(i+j) for every i, j"""
    ring = phi_ring(n, p)
    top = max((rank_p(lam, p) for lam in ring.labels), default=0)
    for i in range(1, top + 1):
        for j in range(1, top + 1):
            product = _product_space(ring, _filtration_rows(ring, p, i), _filtration_rows(ring, p, j))
            target = _filtration_rows(ring, p, i + j)
            if product.shape[0] and rank(np.concatenate([target, product]), ring.field) > target.shape[0]:
                return False
    return True


def irr_filtration_report(n: int, p: int) -> pd.DataFrame:
    """dim I_i against dim Rad^i; equality is reported, not assumed"""
    ring = phi_ring(n, p)
    powers = irr_radical_power_dims(n, p)
    rows = []
    for i, rad_dim in enumerate(powers, start=1):
        filtration_dim = sum(1 for lam in ring.labels if rank_p(lam, p) >= i)
        rows.append({"i": i, "dim_I": filtration_dim, "dim_Rad": rad_dim, "equal": filtration_dim == rad_dim})
    return pd.DataFrame(rows).set_index("i")
