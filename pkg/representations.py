import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd

from char_ring import ClassFunction, ker_theta_basis, phi_ring, theta
from config import ENGINE_CONFIG
from errors import ConsistencyError, DomainError
from exact_linear import integer_dot, integral_lift, left_kernel_basis, rank, row_space
from hyperoctahedral import capped_cache, class_sizes, identity
from mr_algebra import AlgebraContext, AlgebraElement, get_context, x_element
from signed_compositions import (
    Bipartition,
    SignedComposition,
    all_bipartitions,
    bip_classification,
    lambda_p_prime,
    tau_n,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _product_rows(context: AlgebraContext, left_rows: np.ndarray, right_rows: np.ndarray) -> np.ndarray:
    """Coordinates of r s for r in left_rows and s in right_rows, up to row scaling over Q"""
    field = context.field
    if len(left_rows) == 0 or len(right_rows) == 0:
        return field.zeros((0, context.dim))
    blocks = []
    if field.characteristic:
        for r in left_rows:
            blocks.append(field.dot(right_rows, context.left_matrix(r)))
    else:
        right, _ = integral_lift(right_rows)
        for r in left_rows:
            lifted, _ = integral_lift(context.left_matrix(r))
            blocks.append(integer_dot(right, lifted))
    return np.concatenate(blocks, axis=0)


class Subspace:
    """Echelon-reduced span of algebra elements, kept as x coordinates"""

    def __init__(self, context: AlgebraContext, rows):
        self.context = context
        field = context.field
        rows = field.coerce(np.asarray(rows)).reshape(-1, context.dim) if len(rows) else field.zeros((0, context.dim))
        self.basis, self.pivots = row_space(rows, field)

    @classmethod
    def spanned_by(cls, context: AlgebraContext, elements: Sequence[AlgebraElement]) -> "Subspace":
        return cls(context, [a.coords for a in elements])

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def elements(self) -> List[AlgebraElement]:
        return [AlgebraElement(self.context, row) for row in self.basis]

    def _contains_rows(self, rows: np.ndarray) -> bool:
        if len(rows) == 0:
            return True
        if self.dim == 0:
            return not np.any(rows != 0)
        stacked = np.concatenate([self.basis, self.context.field.coerce(rows)], axis=0)
        return rank(stacked, self.context.field) == self.dim

    def contains(self, a: Union[AlgebraElement, np.ndarray]) -> bool:
        coords = a.coords if isinstance(a, AlgebraElement) else self.context.field.coerce(np.asarray(a))
        return self._contains_rows(coords.reshape(1, -1))

    def product(self, other: "Subspace") -> "Subspace":
        """span{r s : r in self, s in other}"""
        return Subspace(self.context, _product_rows(self.context, self.basis, other.basis))

    def is_left_ideal(self) -> bool:
        return all(self._contains_rows(self.context.right_matrix(r)) for r in self.basis)

    def is_right_ideal(self) -> bool:
        return all(self._contains_rows(self.context.left_matrix(r)) for r in self.basis)

    def is_two_sided_ideal(self) -> bool:
        return self.is_left_ideal() and self.is_right_ideal()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.basis.shape == other.basis.shape and bool(np.all(self.basis == other.basis))

    __hash__ = None

    def __repr__(self):
        return f"Subspace(n={self.context.n}, {self.context.field.name}, dim={self.dim})"


@capped_cache
def radical(n: int, p: int = 0) -> Subspace:
    """Ker theta plus the x_C whose complement group order is divisible by p"""
    classes = bip_classification(n, p)
    context = get_context(n, p)
    rows = [a.coords for a in ker_theta_basis(context)]
    rows += [x_element(C, context).coords for C in classes.comp_p]
    rad = Subspace(context, rows)
    expected = context.dim - len(classes.bip_p_prime)
    if rad.dim != expected:
        raise ConsistencyError(f"dim Rad = {rad.dim} for n={n}, p={p}, expected {expected}")
    logger.info(f"Computed radical for n={n}, p={p}: dim {rad.dim}")
    return rad


@capped_cache
def radical_power_dims(n: int, p: int = 0) -> Tuple[int, ...]:
    """dim Rad, dim Rad^2, ... ending with the first 0"""
    rad = radical(n, p)
    dims = [rad.dim]
    power = rad
    while power.dim:
        power = power.product(rad)
        dims.append(power.dim)
        logger.debug(f"Radical power {len(dims)} for n={n}, p={p}: dim {power.dim}")
    return tuple(dims)


def loewy_length_algebra(n: int, p: int = 0) -> int:
    """Least r with Rad^r = 0"""
    return len(radical_power_dims(n, p))


def simple_characters_vanish_on_radical(n: int, p: int = 0) -> bool:
    """pi_lambda(r) = 0 for every lambda in Bip_p' and every r in a basis of Rad"""
    classes = bip_classification(n, p)
    labels = all_bipartitions(n)
    rows = [labels.index(lam) for lam in classes.bip_p_prime]
    return all(not np.any(theta(r).values[rows] != 0) for r in radical(n, p).elements())


def lower_bound_element(n: int, characteristic: int = 0) -> AlgebraElement:
    """a = x_(n-1,-1) - x_(-1,n-1)"""
    if n < 2:
        raise DomainError(f"The lower-bound element needs n >= 2, got {n}")
    context = get_context(n, characteristic)
    return x_element(SignedComposition((n - 1, -1)), context) - x_element(SignedComposition((-1, n - 1)), context)


def lower_bound_power_formula(n: int, characteristic: int = 0) -> AlgebraElement:
    """sum over i of (-1)^i binom(n-1, i-1) x_C_i, C_i all ones with -1 in position i"""
    context = get_context(n, characteristic)
    terms = {}
    for i in range(1, n + 1):
        parts = tuple(-1 if j == i else 1 for j in range(1, n + 1))
        terms[SignedComposition(parts)] = (-1) ** i * math.comb(n - 1, i - 1)
    return context.from_dict(terms)


def lower_bound_element_check(n: int, characteristic: int = 0) -> bool:
    a = lower_bound_element(n, characteristic)
    in_kernel = not np.any(theta(a).values != 0)
    power_ok = a ** (n - 1) == lower_bound_power_formula(n, characteristic)
    if not (in_kernel and power_ok):
        logger.error(f"Lower-bound identity failed for n={n}, char={characteristic}")
    return in_kernel and power_ok


@dataclass(frozen=True, eq=False)
class IdempotentFamily:
    """Lifted primitive idempotents E_lambda, one per p'-bipartition"""
    context: AlgebraContext
    labels: Tuple[Bipartition, ...]
    elements: Tuple[AlgebraElement, ...]

    def __getitem__(self, lam: Bipartition) -> AlgebraElement:
        return self.elements[self.labels.index(lam)]

    def __len__(self) -> int:
        return len(self.labels)

    def target(self, lam: Bipartition) -> ClassFunction:
        """e_lambda over Q, or the indicator of the classes with p'-part lambda"""
        context = self.context
        p = context.characteristic
        chosen = [mu for mu in all_bipartitions(context.n) if (lambda_p_prime(mu, p) if p else mu) == lam]
        return ClassFunction.indicator(context.n, chosen, context.field)

    def check(self) -> Dict[str, bool]:
        idempotent = all(E * E == E for E in self.elements)
        orthogonal = all(
            (E * F).is_zero()
            for i, E in enumerate(self.elements)
            for j, F in enumerate(self.elements)
            if i != j
        )
        total = self.context.zero()
        for E in self.elements:
            total = total + E
        images = all(theta(E) == self.target(lam) for lam, E in zip(self.labels, self.elements))
        return {
            "idempotent": idempotent,
            "orthogonal": orthogonal,
            "sum_is_one": total == self.context.one(),
            "theta_images": images,
        }


def _theta_preimage(context: AlgebraContext, function: ClassFunction) -> AlgebraElement:
    """sum_mu c_mu x_mu^ with c the phi coordinates of a rational class function"""
    ring = phi_ring(context.n, context.characteristic)
    phi = ring.from_class_function(function)
    coords = context.field.zeros(context.dim)
    for mu, c in zip(ring.labels, phi.coords):
        coords[context.index[mu.hat()]] = c
    return AlgebraElement(context, coords)


def _newton_lift(b: AlgebraElement, label: Bipartition) -> AlgebraElement:
    """Iterate b -> 3b^2 - 2b^3 until b is idempotent"""
    for step in range(ENGINE_CONFIG["NEWTON_MAX_STEPS"]):
        square = b * b
        if square == b:
            logger.debug(f"Idempotent for {label} stabilised after {step} steps")
            return b
        b = square * 3 - square * b * 2
    raise ConsistencyError(
        f"Lifting for {label} did not stabilise within {ENGINE_CONFIG['NEWTON_MAX_STEPS']} steps"
    )


@capped_cache
def lift_idempotent_family(n: int, p: int = 0) -> IdempotentFamily:
    classes = bip_classification(n, p)
    context = get_context(n, p)
    labels = classes.bip_p_prime
    one = context.one()
    lifted = []
    for lam in labels:
        chosen = [mu for mu in classes.bip if (lambda_p_prime(mu, p) if p else mu) == lam]
        a = _theta_preimage(context, ClassFunction.indicator(n, chosen))
        f = one
        for E in lifted:
            f = f - E
        lifted.append(_newton_lift(f * a * f, lam))
    family = IdempotentFamily(context=context, labels=tuple(labels), elements=tuple(lifted))
    report = family.check()
    if not all(report.values()):
        failed = ", ".join(name for name, ok in report.items() if not ok)
        raise ConsistencyError(f"Lifted family for n={n}, p={p} fails: {failed}")
    logger.info(f"Lifted {len(labels)} primitive idempotents for n={n}, p={p}")
    return family


@capped_cache
def _cartan_entries(n: int, p: int) -> np.ndarray:
    """C[lambda, mu] = dim E_mu A E_lambda"""
    family = lift_idempotent_family(n, p)
    context, field = family.context, family.context.field
    size = len(family)
    C = np.zeros((size, size), dtype=np.int64)
    left_matrices = [context.left_matrix(E.coords) for E in family.elements]
    for i, E in enumerate(family.elements):
        projective, _ = row_space(context.right_matrix(E.coords), field)
        for j in range(size):
            C[i, j] = rank(field.dot(projective, left_matrices[j]), field)
    return C


def decomposition_matrix(n: int, p: int) -> np.ndarray:
    """D[lambda, mu] = 1 when lambda_p' = mu, rows Bip(n), columns Bip_p'(n)"""
    classes = bip_classification(n, p)
    D = np.zeros((len(classes.bip), len(classes.bip_p_prime)), dtype=np.int64)
    for i, lam in enumerate(classes.bip):
        D[i, classes.bip_p_prime.index(lambda_p_prime(lam, p))] = 1
    return D


def cartan_matrix(n: int, p: int = 0) -> pd.DataFrame:
    """Rows are the projectives P_lambda and columns the simples D_mu"""
    labels = bip_classification(n, p).bip_p_prime
    C = _cartan_entries(n, p)
    if C.sum() != get_context(n, p).dim:
        raise ConsistencyError(f"Projective dimensions for n={n}, p={p} sum to {C.sum()}")
    if p:
        D = decomposition_matrix(n, p)
        expected = D.T @ _cartan_entries(n, 0) @ D
        if not np.array_equal(C, expected):
            raise ConsistencyError(f"Cartan matrix for n={n}, p={p} differs from the decomposition-matrix product")
    logger.info(f"Computed Cartan matrix for n={n}, p={p}: {len(labels)} x {len(labels)}")
    names = [str(lam) for lam in labels]
    return pd.DataFrame(C, index=names, columns=names)


def cartan_properties(n: int) -> Dict[str, bool]:
    """Unitriangularity by length, parity of minus lengths and the tau_n embedding, over Q"""
    labels = all_bipartitions(n)
    C = _cartan_entries(n, 0)
    diagonal = bool(np.all(np.diag(C) == 1))
    length_ok, parity_ok = True, True
    for i, lam in enumerate(labels):
        for j, mu in enumerate(labels):
            if i != j and C[i, j]:
                length_ok &= mu.length > lam.length
                parity_ok &= (lam.minus_length - mu.minus_length) % 2 == 0
    report = {"diagonal_ones": diagonal, "length_condition": length_ok, "parity_blocks": parity_ok}
    bigger = _cartan_entries(n + 1, 0)
    upper = all_bipartitions(n + 1)
    positions = [upper.index(tau_n(lam)) for lam in labels]
    report["tau_embedding"] = bool(np.array_equal(bigger[np.ix_(positions, positions)], C))
    return report


@capped_cache
def center(n: int, p: int = 0) -> Subspace:
    """Elements commuting with every x_C"""
    context = get_context(n, p)
    mu = context.constants
    commutators = context.field.normalize(mu - mu.transpose(1, 0, 2)).reshape(context.dim, context.dim * context.dim)
    Z = Subspace(context, left_kernel_basis(commutators, context.field))
    logger.info(f"Computed center for n={n}, p={p}: dim {Z.dim}")
    return Z


def center_base_change_report(n: int, p: int) -> Dict[str, int]:
    """dim of the center over F_p against Q"""
    rational, modular = center(n, 0).dim, center(n, p).dim
    return {"n": n, "p": p, "dim_Q": rational, "dim_Fp": modular, "equal": rational == modular}


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Blocks of the Cartan graph with their central idempotents F_b"""
    context: AlgebraContext
    blocks: Tuple[Tuple[Bipartition, ...], ...]
    idempotents: Tuple[AlgebraElement, ...]


@capped_cache
def blocks(n: int, p: int = 0) -> BlockDecomposition:
    group_order = 2 ** n * math.factorial(n)
    if p and group_order % p == 0:
        raise DomainError(f"Block idempotents need p not dividing |W{n}| = {group_order}, got p={p}")
    family = lift_idempotent_family(n, p)
    C = _cartan_entries(n, p)
    graph = nx.Graph()
    graph.add_nodes_from(range(len(family)))
    graph.add_edges_from((i, j) for i, j in zip(*np.nonzero(C)) if i != j)
    components = sorted(sorted(component) for component in nx.connected_components(graph))
    context = family.context
    block_labels, idempotents = [], []
    for component in components:
        F = context.zero()
        for i in component:
            F = F + family.elements[i]
        if not (F * F == F and all(F * x_element(D, context) == x_element(D, context) * F for D in context.compositions)):
            raise ConsistencyError(f"Block idempotent for {[str(family.labels[i]) for i in component]} is not central")
        block_labels.append(tuple(family.labels[i] for i in component))
        idempotents.append(F)
    if len(components) != center(n, p).dim:
        raise ConsistencyError(f"{len(components)} blocks but the center has dimension {center(n, p).dim}")
    logger.info(f"Found {len(components)} blocks for n={n}, p={p}")
    return BlockDecomposition(context=context, blocks=tuple(block_labels), idempotents=tuple(idempotents))


def projective_dims_in_group_algebra(n: int, p: int = 0) -> pd.DataFrame:
    """dim K Wn E_lambda by trace over Q and by rank over F_p, against the class counts"""
    family = lift_idempotent_family(n, p)
    context, field, table = family.context, family.context.field, family.context.table
    sizes = class_sizes(n)
    identity_index = table.index[identity(n)]
    # the identity lies in every X_C, so left multiplication by x_C has trace |Wn|
    trace_ok = bool(np.all(context.basis[:, identity_index] == 1))
    rows = []
    for lam, E in zip(family.labels, family.elements):
        vector = E.group_vector
        if p == 0:
            dim = int(vector[identity_index] * table.size)
            expected = sizes[lam]
        else:
            translates = np.stack([vector[table.left_translate(w.inverse())] for w in table.elements])
            dim = rank(translates, field)
            expected = sum(sizes[mu] for mu in sizes if lambda_p_prime(mu, p) == lam)
        rows.append({"bipartition": str(lam), "dim": dim, "expected": expected, "match": dim == expected})
    frame = pd.DataFrame(rows).set_index("bipartition")
    if frame["dim"].sum() != table.size or not trace_ok:
        raise ConsistencyError(f"Projective dimensions for n={n}, p={p} do not add up to |W{n}|")
    return frame

