import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config import ENGINE_CONFIG
from cosets import coset_reps, double_index, intersection_composition
from errors import ConsistencyError, DomainError, FieldError, SizeMismatchError
from exact_linear import (
    RATIONALS,
    Field,
    Polynomial,
    PrimeField,
    field_for,
    format_scalar,
    integral_lift,
    matrix_inverse,
    max_abs,
    min_poly_from_powers,
    rank,
    row_reduce,
    row_space,
    scale,
)
from hyperoctahedral import capped_cache, check_cap, group_table
from signed_compositions import (
    SignedComposition,
    all_compositions,
    generators,
    lambda_of,
    parse_composition,
    preceq,
    saturated_family,
    subset_lambda,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

__all__ = [
    "AlgebraContext",
    "AlgebraElement",
    "get_context",
    "structure_constants",
    "x_element",
    "x_prime_element",
    "multiply",
    "theta_compatible_product_check",
    "support_and_saturations",
    "ideal_dimensions",
    "dimension_table",
    "left_mult_matrix",
    "min_poly",
    "saturated_family",
    "is_subalgebra_span",
]


@capped_cache
def basis_matrix(n: int) -> np.ndarray:
    """0/1 matrix with the group-algebra vector of x_C in row C"""
    comps = all_compositions(n)
    table = group_table(n)
    B = np.zeros((len(comps), table.size), dtype=np.int64)
    for i, C in enumerate(comps):
        B[i, coset_reps(C).indices] = 1
    return B


def _pivot_columns(B: np.ndarray, modulus: PrimeField) -> List[int]:
    _, pivots = row_reduce(modulus.coerce(B), modulus)
    if len(pivots) != B.shape[0]:
        raise ConsistencyError(f"The x_C vectors have rank {len(pivots)} < {B.shape[0]} over {modulus.name}")
    return pivots


@capped_cache
def structure_constants(n: int) -> np.ndarray:
    """Integer tensor mu with x_C x_D = sum_E mu[C, D, E] x_E"""
    B = basis_matrix(n)
    dim = B.shape[0]
    table = group_table(n)
    pivots = _pivot_columns(B, PrimeField(ENGINE_CONFIG["PIVOT_PRIME"]))

    # (x_C x_D)(g) = #{u in X_C : u^-1 g in X_D}, only needed at the pivot elements g
    Bf = B.astype(np.float64)
    counts = np.empty((dim, dim, dim), dtype=np.int64)
    for j, g in enumerate(pivots):
        Y = Bf[:, table.left_quotient(table.elements[g])]
        counts[:, :, j] = np.rint(Bf @ Y.T).astype(np.int64)

    Bp = B[:, pivots]
    flat = counts.reshape(dim * dim, dim)
    proposal = np.rint(np.linalg.solve(Bp.T.astype(np.float64), flat.T.astype(np.float64)).T).astype(np.int64)
    if np.array_equal(proposal @ Bp, flat):
        mu = proposal
    else:
        logger.warning(f"Floating point proposal rejected for n={n}; solving exactly")
        exact = np.dot(flat.astype(object), matrix_inverse(Bp, RATIONALS))
        if any(v.denominator != 1 for v in exact.flat):
            raise ConsistencyError(f"Structure constants for n={n} are not integral")
        mu = np.array([[int(v) for v in row] for row in exact], dtype=np.int64)
    logger.info(f"Computed structure constants for n={n}: {dim} basis elements, max |mu| = {int(np.abs(mu).max())}")
    return mu.reshape(dim, dim, dim)


class AlgebraContext:
    """The algebra for fixed n and field: x_C vectors, structure constants and coordinate extraction"""

    def __init__(self, n: int, field: Field):
        check_cap(n)
        self.n = n
        self.field = field
        self.compositions = all_compositions(n)
        self.index = {C: i for i, C in enumerate(self.compositions)}
        self.dim = len(self.compositions)
        self.table = group_table(n)
        self.basis = basis_matrix(n)
        constants = structure_constants(n)
        self.constants = constants if field.characteristic == 0 else constants % field.characteristic
        self._mu_bound = max(int(np.abs(self.constants).max()), 1)
        self._left_flat = self.constants.reshape(self.dim, self.dim * self.dim)
        self._right_flat = self.constants.transpose(1, 0, 2).reshape(self.dim, self.dim * self.dim)
        logger.info(f"Built algebra context for n={n} over {field.name} with dimension {self.dim}")

    @property
    def characteristic(self) -> int:
        return self.field.characteristic

    def __repr__(self):
        return f"AlgebraContext(n={self.n}, field={self.field.name})"

    # elements

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, coords)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.field.zeros(self.dim))

    def one(self) -> "AlgebraElement":
        return self.basis_element(SignedComposition((self.n,)))

    def basis_element(self, C: Union[SignedComposition, str]) -> "AlgebraElement":
        C = self.composition(C)
        coords = self.field.zeros(self.dim)
        coords[self.index[C]] = self.field.element(1)
        return AlgebraElement(self, coords)

    def composition(self, C: Union[SignedComposition, str]) -> SignedComposition:
        if isinstance(C, str):
            C = parse_composition(C)
        if C.n != self.n:
            raise SizeMismatchError(f"Composition {C} has size {C.n}, expected {self.n}")
        return C

    def from_dict(self, mapping: Mapping) -> "AlgebraElement":
        coords = self.field.zeros(self.dim)
        for C, value in mapping.items():
            i = self.index[self.composition(C)]
            coords[i] = self.field.normalize(coords[i] + self.field.element(value))
        return AlgebraElement(self, coords)

    def random_element(self, rng: np.random.Generator, high: int = None) -> "AlgebraElement":
        """Nonnegative integer coordinates below ``high``"""
        high = ENGINE_CONFIG["RANDOM_COEFF_MAX"] if high is None else high
        return AlgebraElement(self, self.field.coerce(rng.integers(0, high, size=self.dim)))

    # products

    def _contract(self, coords: np.ndarray, flat: np.ndarray) -> np.ndarray:
        """sum_i coords[i] * flat[i] reshaped to a dim x dim matrix"""
        if self.characteristic:
            return self.field.dot(coords, flat).reshape(self.dim, self.dim)
        ints, denominator = integral_lift(coords)
        if max_abs(ints) * self._mu_bound * self.dim < ENGINE_CONFIG["INT64_SAFE"]:
            out = np.dot(ints.astype(np.int64), flat)
        else:
            out = np.dot(ints.astype(object), flat.astype(object))
        return scale(out, denominator).reshape(self.dim, self.dim)

    def left_matrix(self, coords) -> np.ndarray:
        """Row D holds the coordinates of a x_D"""
        return self._contract(self.field.coerce(coords), self._left_flat)

    def right_matrix(self, coords) -> np.ndarray:
        """Row C holds the coordinates of x_C b"""
        return self._contract(self.field.coerce(coords), self._right_flat)

    def vector_times_matrix(self, coords, matrix) -> np.ndarray:
        if self.characteristic:
            return self.field.dot(self.field.coerce(coords), matrix)
        return np.dot(self.field.coerce(coords), matrix)

    def product_coords(self, a, b) -> np.ndarray:
        return self.vector_times_matrix(b, self.left_matrix(a))

    # group algebra

    def group_vector(self, coords) -> np.ndarray:
        """Coefficients on every group element, in enumeration order"""
        coords = self.field.coerce(coords)
        if self.characteristic:
            return self.field.dot(coords, self.basis)
        ints, denominator = integral_lift(coords)
        if max_abs(ints) * self.dim < ENGINE_CONFIG["INT64_SAFE"]:
            out = np.dot(ints.astype(np.int64), self.basis)
        else:
            out = np.dot(ints.astype(object), self.basis.astype(object))
        return scale(out, denominator)

    @cached_property
    def _extractor(self) -> Tuple[List[int], np.ndarray]:
        modulus = self.field if self.characteristic else PrimeField(ENGINE_CONFIG["PIVOT_PRIME"])
        pivots = _pivot_columns(self.basis, modulus)
        inverse = matrix_inverse(self.field.coerce(self.basis[:, pivots]), self.field)
        logger.info(f"Built coordinate extractor for n={self.n} over {self.field.name}")
        return pivots, inverse

    def coordinates_of(self, vector) -> Optional[np.ndarray]:
        """x coordinates of a group-algebra vector, None when it is outside the span"""
        vector = self.field.coerce(np.asarray(vector))
        pivots, inverse = self._extractor
        coords = self.vector_times_matrix(vector[pivots], inverse)
        if not np.array_equal(self.group_vector(coords), vector):
            return None
        return coords

    def from_group_vector(self, vector) -> "AlgebraElement":
        coords = self.coordinates_of(vector)
        if coords is None:
            raise ConsistencyError(f"Group-algebra vector is not in the span of the x_C for n={self.n}")
        return AlgebraElement(self, coords)

    def group_algebra_product(self, u, v) -> np.ndarray:
        """(u v)(g) = sum_h u(h) v(h^-1 g) on dense group vectors"""
        u = self.field.coerce(np.asarray(u))
        v = self.field.coerce(np.asarray(v))
        out = self.field.zeros(self.table.size)
        for h in np.nonzero(u != 0)[0]:
            targets = self.table.left_translate(self.table.elements[h])
            out[targets] = self.field.normalize(out[targets] + v * u[h])
        return out

    # x' basis

    @cached_property
    def x_prime_matrix(self) -> np.ndarray:
        """Row C holds x'_C = sum over S_D inside S_C of (-1/2)^(|S_C|-|S_D|) x_D"""
        if self.characteristic == 2:
            raise FieldError("The x' basis needs 2 to be invertible")
        half = self.field.element(self.field.inverse(self.field.element(2)))
        minus_half = self.field.normalize(-half) if self.characteristic else -half
        gens = [set(generators(C)) for C in self.compositions]
        M = self.field.zeros((self.dim, self.dim))
        for i, S_C in enumerate(gens):
            for j, S_D in enumerate(gens):
                if S_D <= S_C:
                    M[i, j] = self.field.normalize(self.field.element(minus_half ** (len(S_C) - len(S_D))))
        return M

    @cached_property
    def x_prime_inverse(self) -> np.ndarray:
        return matrix_inverse(self.x_prime_matrix, self.field)


class AlgebraElement:
    """An element by its x coordinates; the group-algebra expansion is computed on demand"""

    def __init__(self, context: AlgebraContext, coords):
        self.context = context
        self.coords = context.field.coerce(np.asarray(coords)).reshape(context.dim)

    @property
    def field(self) -> Field:
        return self.context.field

    def _check_same(self, other: "AlgebraElement"):
        if self.context.n != other.context.n:
            raise SizeMismatchError(f"Elements of n={self.context.n} and n={other.context.n}")
        if self.field != other.field:
            raise FieldError(f"Cannot mix {self.field.name} and {other.field.name}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.context, self.field.normalize(self.coords + other.coords))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.context, self.field.normalize(self.coords - other.coords))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.context, self.field.normalize(-self.coords))

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.context, self.field.normalize(self.coords * self.field.element(other)))

    def __rmul__(self, scalar) -> "AlgebraElement":
        return AlgebraElement(self.context, self.field.normalize(self.coords * self.field.element(scalar)))

    def __pow__(self, k: int) -> "AlgebraElement":
        result = self.context.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same(other)
        return bool(np.array_equal(self.coords, other.coords))

    __hash__ = None

    def is_zero(self) -> bool:
        return not np.any(self.coords != 0)

    def coefficient(self, C: Union[SignedComposition, str]) -> object:
        return self.coords[self.context.index[self.context.composition(C)]]

    def support(self) -> List[SignedComposition]:
        return [self.context.compositions[i] for i in np.nonzero(self.coords != 0)[0]]

    @cached_property
    def group_vector(self) -> np.ndarray:
        return self.context.group_vector(self.coords)

    def group_expansion(self) -> Dict:
        """Sparse view: group element -> nonzero coefficient"""
        elements = self.context.table.elements
        return {elements[i]: self.group_vector[i] for i in np.nonzero(self.group_vector != 0)[0]}

    def x_prime_coords(self) -> np.ndarray:
        return self.context.vector_times_matrix(self.coords, self.context.x_prime_inverse)

    def to_dict(self, basis: str = "x") -> Dict[str, str]:
        coords = self.x_prime_coords() if basis == "x'" else self.coords
        return {
            str(C): format_scalar(coords[i])
            for i, C in enumerate(self.context.compositions)
            if coords[i] != 0
        }

    def __repr__(self):
        terms = " + ".join(f"{value}*x[{C}]" for C, value in self.to_dict().items())
        return f"AlgebraElement(n={self.context.n}, {self.field.name}: {terms or '0'})"


@capped_cache
def _cached_context(n: int, characteristic: int) -> AlgebraContext:
    return AlgebraContext(n, field_for(characteristic))


def get_context(n: int, characteristic: int = 0) -> AlgebraContext:
    return _cached_context(n, characteristic)


def x_element(C: Union[SignedComposition, str], context: AlgebraContext) -> AlgebraElement:
    return context.basis_element(C)


def x_prime_element(C: Union[SignedComposition, str], context: AlgebraContext) -> AlgebraElement:
    C = context.composition(C)
    return AlgebraElement(context, context.x_prime_matrix[context.index[C]])


def multiply(a: AlgebraElement, b: AlgebraElement, via: str = "constants") -> AlgebraElement:
    """a*b from the structure constants, or through the group algebra with ``via="group"``"""
    a._check_same(b)
    context = a.context
    if via == "group":
        product = context.group_algebra_product(a.group_vector, b.group_vector)
        return context.from_group_vector(product)
    return AlgebraElement(context, context.product_coords(a.coords, b.coords))


def theta_compatible_product_check(C: SignedComposition, D: SignedComposition, context: AlgebraContext) -> bool:
    """x_C x_D against the sum of x_E over d in X_CD, E = d^-1 C ∩ D"""
    C, D = context.composition(C), context.composition(D)
    if not (C.is_parabolic() or D.is_semi_positive()):
        raise DomainError(f"Product formula needs {C} parabolic or {D} semi-positive")
    coords = np.zeros(context.dim, dtype=np.int64)
    for d in double_index(C, D).X_CD:
        coords[context.index[intersection_composition(C, d, D)]] += 1
    expected = AlgebraElement(context, context.field.coerce(coords))
    return x_element(C, context) * x_element(D, context) == expected


@capped_cache
def relation_matrix(n: int, relation: str) -> np.ndarray:
    """M[i, j] = relation(C_i, C_j) for 'preceq' or 'subset_lambda'"""
    comps = all_compositions(n)
    if relation == "preceq":
        return np.array([[preceq(C, D) for D in comps] for C in comps], dtype=bool)
    if relation == "subset_lambda":
        cache = {}
        M = np.zeros((len(comps), len(comps)), dtype=bool)
        for i, C in enumerate(comps):
            for j, D in enumerate(comps):
                key = (lambda_of(C), lambda_of(D))
                if key not in cache:
                    cache[key] = subset_lambda(key[0].hat(), key[1].hat())
                M[i, j] = cache[key]
        return M
    raise DomainError(f"Unknown relation '{relation}'")


@dataclass(frozen=True)
class Saturations:
    support: Tuple[SignedComposition, ...]
    sat_left: Tuple[SignedComposition, ...]
    sat_right: Tuple[SignedComposition, ...]


def support_and_saturations(a: AlgebraElement) -> Saturations:
    """Supp(a) with its downward closures under preceq (left) and subset_lambda (right)"""
    comps = a.context.compositions
    support = np.nonzero(a.coords != 0)[0]
    if support.size == 0:
        return Saturations((), (), ())
    left = relation_matrix(a.context.n, "preceq")[:, support].any(axis=1)
    right = relation_matrix(a.context.n, "subset_lambda")[:, support].any(axis=1)
    return Saturations(
        support=tuple(comps[i] for i in support),
        sat_left=tuple(comps[i] for i in np.nonzero(left)[0]),
        sat_right=tuple(comps[i] for i in np.nonzero(right)[0]),
    )


def ideal_dimensions(a: AlgebraElement) -> Dict[str, int]:
    """Dimensions of A a, a A, A a A and the centralizer of a"""
    context, field = a.context, a.field
    left_images = context.right_matrix(a.coords)   # rows x_C a
    right_images = context.left_matrix(a.coords)   # rows a x_D
    left_basis, _ = row_space(left_images, field)
    if left_basis.shape[0]:
        two_sided = np.concatenate([context.left_matrix(y) for y in left_basis], axis=0)
        two_sided_dim = rank(two_sided, field)
    else:
        two_sided_dim = 0
    commutator = field.normalize(right_images - left_images)
    return {
        "left": left_basis.shape[0],
        "right": rank(right_images, field),
        "two_sided": two_sided_dim,
        "centralizer": context.dim - rank(commutator, field),
    }


def dimension_table(n: int, characteristic: int = 0) -> pd.DataFrame:
    """Ideal and centralizer dimensions of every x_C, one row per composition"""
    context = get_context(n, characteristic)
    rows = []
    for C in context.compositions:
        dims = ideal_dimensions(x_element(C, context))
        rows.append({"composition": str(C), **dims})
    logger.info(f"Computed dimension table for n={n}, char={characteristic}")
    return pd.DataFrame(rows).set_index("composition")


def left_mult_matrix(a: AlgebraElement) -> np.ndarray:
    """Matrix of y -> a y in the x basis, acting on column vectors"""
    return a.context.left_matrix(a.coords).T


def min_poly(a: AlgebraElement) -> Polynomial:
    def powers():
        current = a.context.one()
        while True:
            yield current.coords
            current = current * a

    return min_poly_from_powers(powers(), a.field, a.context.dim)


def _family_mask(context: AlgebraContext, family: Iterable[SignedComposition]) -> np.ndarray:
    mask = np.zeros(context.dim, dtype=bool)
    for C in family:
        mask[context.index[context.composition(C)]] = True
    return mask


def is_subalgebra_span(context: AlgebraContext, family: Iterable[SignedComposition]) -> bool:
    """span{x_C : C in family} is closed under multiplication"""
    mask = _family_mask(context, family)
    block = context.constants[mask][:, mask]
    return not np.any(block[:, :, ~mask] != 0)


def is_left_ideal_span(context: AlgebraContext, family: Iterable[SignedComposition]) -> bool:
    mask = _family_mask(context, family)
    return not np.any(context.constants[:, mask][:, :, ~mask] != 0)


def is_right_ideal_span(context: AlgebraContext, family: Iterable[SignedComposition]) -> bool:
    mask = _family_mask(context, family)
    return not np.any(context.constants[mask][:, :, ~mask] != 0)


def is_two_sided_ideal_span(context: AlgebraContext, family: Iterable[SignedComposition]) -> bool:
    return is_left_ideal_span(context, family) and is_right_ideal_span(context, family)
