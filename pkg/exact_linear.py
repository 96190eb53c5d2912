import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import GF, QQ, ZZ, Matrix, Poly, Rational, Symbol, isprime
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix

from config import ENGINE_CONFIG, OUTPUT_CONFIG
from errors import DomainError, FieldError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def is_prime(p) -> bool:
    return isinstance(p, (int, np.integer)) and bool(isprime(int(p)))


def _elementwise(func, values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if arr.ndim == 0:
        result = np.empty((), dtype=object)
        result[()] = func(arr[()])
        return result
    return np.frompyfunc(func, 1, 1)(arr).astype(object)


class RationalField:
    """Q with Fraction entries in numpy object arrays"""
    characteristic = 0
    dtype = object
    name = "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "RationalField()"

    def element(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (np.integer,)):
            return Fraction(int(x))
        return Fraction(x)

    def array(self, values) -> np.ndarray:
        return _elementwise(self.element, values)

    def coerce(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr)
        return arr if arr.dtype == object else arr.astype(object)

    def zeros(self, shape) -> np.ndarray:
        return self.array(np.zeros(shape, dtype=np.int64))

    def identity(self, k: int) -> np.ndarray:
        return self.array(np.eye(k, dtype=np.int64))

    def normalize(self, arr):
        return arr

    def inverse(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("Zero has no inverse")
        return 1 / Fraction(x)

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.dot(self.coerce(a), self.coerce(b))

    def is_integral_at(self, x, p: int) -> bool:
        return Fraction(x).denominator % p != 0


@dataclass(frozen=True)
class PrimeField:
    """F_p with residues in [0, p); int64 storage below 2^31"""
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.p >= ENGINE_CONFIG["MAX_PRIME"]:
            raise DomainError(f"Prime {self.p} exceeds the supported bound 2^61")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F{self.p}"

    @property
    def dtype(self):
        return np.int64 if self.p < 2 ** 31 else object

    def element(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} is not {self.p}-integral")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self.element(Fraction(x))
        return int(x) % self.p

    def array(self, values) -> np.ndarray:
        arr = _elementwise(self.element, values)
        return arr.astype(self.dtype)

    def coerce(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr)
        if arr.dtype == self.dtype and arr.dtype != object:
            return arr % self.p
        return self.array(arr)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype) if self.dtype != object else self.array(np.zeros(shape, dtype=np.int64))

    def identity(self, k: int) -> np.ndarray:
        return self.array(np.eye(k, dtype=np.int64))

    def normalize(self, arr):
        return arr % self.p

    def inverse(self, x) -> int:
        if int(x) % self.p == 0:
            raise ZeroDivisionError("Zero has no inverse")
        return pow(int(x), -1, self.p)

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.asarray(a), np.asarray(b)
        inner = a.shape[-1] if a.ndim else 1
        if self.dtype != object and inner * (self.p - 1) ** 2 < ENGINE_CONFIG["INT64_SAFE"]:
            return np.dot(a, b) % self.p
        result = np.dot(a.astype(object), b.astype(object)) % self.p
        return result.astype(self.dtype) if isinstance(result, np.ndarray) else result

    def is_integral_at(self, x, p: int) -> bool:
        return True


Field = Union[RationalField, PrimeField]
RATIONALS = RationalField()


@lru_cache(maxsize=None)
def field_for(characteristic: int) -> Field:
    if characteristic == 0:
        return RATIONALS
    return PrimeField(characteristic)


def format_scalar(x) -> str:
    """Rationals as "a/b" with "/1" omitted"""
    x = Fraction(x) if not isinstance(x, Fraction) else x
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def row_reduce(matrix, field: Field) -> Tuple[np.ndarray, List[int]]:
    """Gauss-Jordan with first-nonzero pivoting; returns (RREF, pivot columns)"""
    R = np.array(field.coerce(matrix), copy=True)
    if R.ndim != 2:
        raise DomainError("row_reduce expects a matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.nonzero(R[r:, c] != 0)[0]
        if candidates.size == 0:
            continue
        k = r + int(candidates[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = field.normalize(R[r] * field.inverse(R[r, c]))
        column = R[:, c].copy()
        column[r] = 0
        others = np.nonzero(column != 0)[0]
        if others.size:
            R[others] = field.normalize(R[others] - np.outer(column[others], R[r]))
        pivots.append(c)
        r += 1
    return R, pivots


def _integer_row(row: Sequence) -> List[int]:
    """Scale a rational row to coprime integers"""
    fracs = [Fraction(v) for v in row]
    denominator = math.lcm(*[f.denominator for f in fracs]) if fracs else 1
    ints = [int(f * denominator) for f in fracs]
    g = math.gcd(*ints) if ints else 0
    return [v // g for v in ints] if g > 1 else ints


def _rational_row_space(M: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Independent rows chosen modulo a prime, then certified over Q"""
    scaled = [_integer_row(row) for row in M]
    modulus = PrimeField(ENGINE_CONFIG["PIVOT_PRIME"])
    reduced = modulus.array(np.array(scaled, dtype=object).T)
    _, independent = row_reduce(reduced, modulus)
    R, pivots = row_reduce(M[independent], RATIONALS)
    R = R[:len(pivots)]
    if not pivots:
        if any(any(row) for row in scaled):
            return _full_rational_row_space(M)
        return R, pivots
    denominator = math.lcm(*[Fraction(v).denominator for v in R.flat])
    numerators = [[int(Fraction(v) * denominator) for v in row] for row in R]
    lhs = np.array(scaled, dtype=object) * denominator
    rhs = integer_dot(
        np.array([[row[c] for c in pivots] for row in scaled], dtype=object),
        np.array(numerators, dtype=object),
    )
    if np.all(lhs - rhs == 0):
        return R, pivots
    logger.warning("Modular row selection missed rows; falling back to full rational elimination")
    return _full_rational_row_space(M)


def _full_rational_row_space(M: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    R, pivots = row_reduce(M, RATIONALS)
    return R[:len(pivots)], pivots


def row_space(matrix, field: Field) -> Tuple[np.ndarray, List[int]]:
    """Reduced echelon basis of the row space (nonzero rows only) and its pivot columns"""
    M = field.coerce(matrix)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0), []
    if field.characteristic == 0 and M.shape[0] > 2 * M.shape[1]:
        return _rational_row_space(M)
    R, pivots = row_reduce(M, field)
    return R[:len(pivots)], pivots


def rank(matrix, field: Field) -> int:
    M = field.coerce(matrix)
    if M.size == 0:
        return 0
    return len(row_space(M, field)[1])


def kernel_basis(matrix, field: Field) -> np.ndarray:
    """Basis of {x : M x = 0}, one vector per free column, reduced echelon convention"""
    M = field.coerce(matrix)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return field.identity(cols)
    R, pivots = row_space(M, field)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = field.zeros((len(free), cols))
    for k, f in enumerate(free):
        basis[k, f] = field.element(1)
        for i, c in enumerate(pivots):
            basis[k, c] = field.normalize(-R[i, f])
    return basis


def left_kernel_basis(matrix, field: Field) -> np.ndarray:
    """Basis of {y : y M = 0}"""
    return kernel_basis(field.coerce(matrix).T, field)


def linear_solve(matrix, target, field: Field) -> Optional[np.ndarray]:
    """One solution of M x = target (free variables zero), or None when inconsistent"""
    M = field.coerce(matrix)
    t = field.coerce(np.asarray(target)).reshape(-1, 1)
    augmented = np.concatenate([M, t], axis=1)
    R, pivots = row_reduce(augmented, field)
    cols = M.shape[1]
    if cols in pivots:
        return None
    solution = field.zeros(cols)
    for i, c in enumerate(pivots):
        solution[c] = R[i, cols]
    return solution


def span_membership(basis, vector, field: Field) -> bool:
    basis = field.coerce(basis)
    if basis.shape[0] == 0:
        return not np.any(field.coerce(vector) != 0)
    return linear_solve(basis.T, vector, field) is not None


def same_row_space(a, b, field: Field) -> bool:
    ra, _ = row_space(a, field)
    rb, _ = row_space(b, field)
    return ra.shape == rb.shape and bool(np.all(ra == rb))


def matrix_inverse(matrix, field: Field) -> np.ndarray:
    M = field.coerce(matrix)
    size = M.shape[0]
    if M.ndim != 2 or M.shape[1] != size:
        raise DomainError("Only square matrices can be inverted")
    R, pivots = row_reduce(np.concatenate([M, field.identity(size)], axis=1), field)
    if pivots[:size] != list(range(size)) or len(pivots) < size:
        raise DomainError(f"Matrix of size {size} is singular over {field.name}")
    return R[:, size:]


def integral_lift(values) -> Tuple[np.ndarray, int]:
    """(integers, denominator) with values = integers / denominator"""
    arr = np.asarray(values, dtype=object)
    if arr.size == 0:
        return arr.astype(object), 1
    denominator = math.lcm(*[Fraction(v).denominator for v in arr.flat])
    lifted = _elementwise(lambda v: int(Fraction(v) * denominator), arr)
    return lifted, denominator


def max_abs(arr: np.ndarray) -> int:
    return max((abs(int(v)) for v in np.asarray(arr).flat), default=0)


def integer_dot(a, b) -> np.ndarray:
    """Exact integer product, in int64 when the entries are small enough"""
    a, b = np.asarray(a), np.asarray(b)
    inner = a.shape[-1] if a.ndim else 1
    if max_abs(a) * max_abs(b) * max(inner, 1) < ENGINE_CONFIG["INT64_SAFE"]:
        return np.dot(a.astype(np.int64), b.astype(np.int64)).astype(object)
    return np.dot(a.astype(object), b.astype(object))


def scale(values, denominator: int) -> np.ndarray:
    return _elementwise(lambda v: Fraction(int(v), denominator), values)


VARIABLE = Symbol(OUTPUT_CONFIG["POLY_VARIABLE"])


def sympy_domain(field: Field):
    """QQ, or GF(p) with residues kept in [0, p)"""
    return QQ if field.characteristic == 0 else GF(field.characteristic, symmetric=False)


def _to_sympy(value, field: Field) -> Rational:
    x = Fraction(value) if field.characteristic == 0 else Fraction(int(value))
    return Rational(x.numerator, x.denominator)


def _from_sympy(value, field: Field):
    return field.element(Fraction(int(value.p), int(value.q)))


class Polynomial:
    """Univariate polynomial over a field, held as a sympy Poly over QQ or GF(p)"""

    def __init__(self, coeffs: Iterable, field: Field):
        self.field = field
        values = [_to_sympy(field.element(c), field) for c in coeffs]
        self.poly = Poly(list(reversed(values)) or [0], VARIABLE, domain=sympy_domain(field))

    @classmethod
    def from_poly(cls, poly: Poly, field: Field) -> "Polynomial":
        out = cls.__new__(cls)
        out.field = field
        out.poly = poly.set_domain(sympy_domain(field))
        return out

    @classmethod
    def from_roots(cls, roots: Iterable, field: Field) -> "Polynomial":
        result = cls([1], field)
        for r in roots:
            result = result * cls([-field.element(r), 1], field)
        return result

    @property
    def coeffs(self) -> Tuple:
        """Lowest degree first; () for the zero polynomial"""
        if self.poly.is_zero:
            return ()
        return tuple(_from_sympy(c, self.field) for c in reversed(self.poly.all_coeffs()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _reduce(self, value):
        return self.field.normalize(value) if self.field.characteristic else value

    def _wrap(self, poly: Poly) -> "Polynomial":
        return Polynomial.from_poly(poly, self.field)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return self._wrap(self.poly + other.poly)

    def __neg__(self) -> "Polynomial":
        return self._wrap(-self.poly)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self._wrap(self.poly - other.poly)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial([other], self.field)
        return self._wrap(self.poly * other.poly)

    def __divmod__(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.poly.is_zero:
            raise ZeroDivisionError("Division by the zero polynomial")
        quotient, remainder = self.poly.div(other.poly)
        return self._wrap(quotient), self._wrap(remainder)

    def __call__(self, x):
        value = self.field.element(0)
        for c in reversed(self.coeffs):
            value = self._reduce(value * x + c)
        return value

    def evaluate_matrix(self, M: np.ndarray) -> np.ndarray:
        M = self.field.coerce(M)
        result = self.field.zeros(M.shape)
        for c in reversed(self.coeffs):
            result = self.field.normalize(self.field.dot(result, M) + self.field.identity(M.shape[0]) * c)
        return result

    def root_multiplicities(self, candidates: Optional[Iterable] = None) -> Tuple[Dict, "Polynomial"]:
        """Roots from the linear factors (only the candidates, when given) and the cofactor without them"""
        lead, factors = self.poly.factor_list()
        wanted = None if candidates is None else {self.field.element(c) for c in candidates}
        found = {}
        rest = Poly(lead, VARIABLE, domain=self.poly.domain)
        for factor, mult in factors:
            if factor.degree() == 1:
                constant = factor.monic().all_coeffs()[1]
                root = self.field.element(-Fraction(int(constant.p), int(constant.q)))
                if wanted is None or root in wanted:
                    found[root] = found.get(root, 0) + mult
                    continue
            rest = rest * factor ** mult
        return found, self._wrap(rest)

    def coefficient_strings(self) -> List[str]:
        return [format_scalar(c) for c in self.coeffs]

    def format(self, candidates: Optional[Iterable] = None) -> str:
        """Factored with its linear factors split out, e.g. T(T-2)(T-8)^2"""
        var = OUTPUT_CONFIG["POLY_VARIABLE"]
        if not self.coeffs:
            return "0"
        roots, rest = self.root_multiplicities(candidates)
        parts = []
        if rest.coeffs != (self.field.element(1),):
            parts.append(rest._plain(var))
        for r, mult in sorted(roots.items()):
            if r == 0:
                factor = var
            elif r > 0:
                factor = f"({var}-{format_scalar(r)})"
            else:
                factor = f"({var}+{format_scalar(-r)})"
            parts.append(factor if mult == 1 else f"{factor}^{mult}")
        return "".join(parts) if parts else "1"

    def _plain(self, var: str) -> str:
        if self.degree == 0:
            return format_scalar(self.coeffs[0])
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            coeff = format_scalar(c)
            if mono and c == 1:
                coeff = ""
            elif mono and c == -1:
                coeff = "-"
            terms.append(f"{coeff}{mono}" if coeff else mono)
        return "(" + "+".join(terms).replace("+-", "-") + ")"

    def __repr__(self):
        return f"Polynomial({self.coefficient_strings()}, {self.field.name})"


def min_poly_from_powers(powers: Iterable[np.ndarray], field: Field, max_degree: int) -> Polynomial:
    """First linear dependency in the sequence v_0, v_1, ... (v_k the k-th power) as a monic polynomial"""
    seen = []
    for k, vector in enumerate(powers):
        vector = field.coerce(np.asarray(vector)).reshape(-1)
        if seen:
            coeffs = linear_solve(np.stack(seen, axis=1), vector, field)
            if coeffs is not None:
                return Polynomial([field.normalize(-c) for c in coeffs] + [1], field)
        elif not np.any(vector != 0):
            return Polynomial([1], field)
        seen.append(vector)
        if k > max_degree:
            break
    raise DomainError("No linear dependency found among the powers")


def min_poly_of_matrix(matrix, field: Field) -> Polynomial:
    """Krylov iteration on the powers of M"""
    M = field.coerce(matrix)
    size = M.shape[0]

    def powers():
        current = field.identity(size)
        while True:
            yield current
            current = field.normalize(field.dot(current, M))

    return min_poly_from_powers(powers(), field, size)



def char_poly_of_matrix(matrix, field: Field) -> Polynomial:
    """det(T*I - M) from sympy's DomainMatrix over QQ or GF(p)"""
    M = field.coerce(matrix)
    domain = sympy_domain(field)
    size = M.shape[0]
    dm = DomainMatrix(
        [[domain.from_sympy(_to_sympy(v, field)) for v in row] for row in M.tolist()],
        (size, size),
        domain,
    )
    coeffs = [domain.to_sympy(c) for c in dm.charpoly()]
    return Polynomial.from_poly(Poly(coeffs, VARIABLE, domain=domain), field)


def integer_lattice_is_full(rows: Sequence[Sequence[int]], cols: int) -> bool:
    """True when the rows generate Z^cols (all invariant factors are units)"""
    distinct = {tuple(int(v) for v in row) for row in rows if any(row)}
    if len(distinct) < cols:
        return False
    snf = smith_normal_form(Matrix(sorted(distinct)), domain=ZZ)
    return all(abs(snf[i, i]) == 1 for i in range(cols))
