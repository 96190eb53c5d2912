import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache, wraps
from itertools import permutations, product
from typing import Dict, List, Sequence, Tuple

import numpy as np

from config import group_cap
from errors import DomainError, ResourceError, SizeMismatchError
from exact_linear import is_prime

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignedPermutation:
    """An element of Wn given by the images of 1..n (the image of -i is implicit)"""
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(abs(v) for v in images) != list(range(1, len(images) + 1)):
            raise DomainError(f"Not a signed permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        image = self.images[abs(i) - 1]
        return image if i > 0 else -image

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "SignedPermutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "SignedPermutation":
        inv = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inv[abs(image) - 1] = i if image > 0 else -i
        return SignedPermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(image == i for i, image in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "[" + ",".join(str(v) for v in self.images) + "]"


@dataclass(frozen=True)
class Root:
    """A vector of Z^n in the basis e_1..e_n"""
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def from_terms(cls, n: int, terms: Dict[int, int]) -> "Root":
        coords = [0] * n
        for i, c in terms.items():
            coords[i - 1] += c
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords))

    def is_root(self) -> bool:
        support = [c for c in self.coords if c != 0]
        if len(support) == 1:
            return abs(support[0]) == 2
        if len(support) == 2:
            return all(abs(c) == 1 for c in support)
        return False


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """(a o b)(i) = a(b(i))"""
    if a.n != b.n:
        raise SizeMismatchError(f"Cannot compose elements of W{a.n} and W{b.n}")
    return SignedPermutation(tuple(a(image) for image in b.images))


def inverse(w: SignedPermutation) -> SignedPermutation:
    return w.inverse()


def identity(n: int) -> SignedPermutation:
    return SignedPermutation(tuple(range(1, n + 1)))


def longest_element(n: int) -> SignedPermutation:
    """w_n, the central element sending i to -i"""
    return SignedPermutation(tuple(-i for i in range(1, n + 1)))


def t_generator(i: int, n: int) -> SignedPermutation:
    """t_i = (i, -i)"""
    if not 1 <= i <= n:
        raise DomainError(f"t_{i} is not defined in W{n}")
    return SignedPermutation(tuple(-j if j == i else j for j in range(1, n + 1)))


def s_generator(i: int, n: int) -> SignedPermutation:
    """s_i = (i, i+1)(-i, -i-1)"""
    if not 1 <= i < n:
        raise DomainError(f"s_{i} is not defined in W{n}")
    images = list(range(1, n + 1))
    images[i - 1], images[i] = images[i], images[i - 1]
    return SignedPermutation(tuple(images))


def _check_root(alpha: Root):
    if not alpha.is_root():
        raise DomainError(f"{alpha.coords} is not a root of Phi_{alpha.n}")


def act_on_root(w: SignedPermutation, alpha: Root) -> Root:
    """w sends e_i to sign(w(i)) e_|w(i)|"""
    _check_root(alpha)
    if w.n != alpha.n:
        raise SizeMismatchError(f"W{w.n} does not act on roots of rank {alpha.n}")
    coords = [0] * w.n
    for i, c in enumerate(alpha.coords):
        if c:
            image = w.images[i]
            coords[abs(image) - 1] += c if image > 0 else -c
    return Root(tuple(coords))


def root_is_positive(alpha: Root) -> bool:
    """Sign of the highest-index nonzero coordinate"""
    _check_root(alpha)
    for c in reversed(alpha.coords):
        if c:
            return c > 0
    return False


def positive_roots(n: int) -> List[Root]:
    roots = [Root.from_terms(n, {i: 2}) for i in range(1, n + 1)]
    for j in range(2, n + 1):
        for i in range(1, j):
            roots.append(Root.from_terms(n, {j: 1, i: -1}))
            roots.append(Root.from_terms(n, {j: 1, i: 1}))
    return roots


def length(w: SignedPermutation) -> int:
    """Number of positive roots sent to negative roots"""
    return sum(1 for alpha in positive_roots(w.n) if not root_is_positive(act_on_root(w, alpha)))


def check_cap(n: int):
    cap = group_cap()
    if n > cap:
        raise ResourceError(n, cap)


def capped_cache(func):
    """lru_cache whose wrapper re-checks the group cap on every call, hits included"""
    cached = lru_cache(maxsize=None)(func)

    @wraps(func)
    def wrapper(first, *args, **kwargs):
        check_cap(first if isinstance(first, int) else first.n)
        return cached(first, *args, **kwargs)

    wrapper.cache_clear = cached.cache_clear
    wrapper.cache_info = cached.cache_info
    return wrapper


@capped_cache
def enumerate_group(n: int) -> Tuple[SignedPermutation, ...]:
    """All 2^n n! elements: identity first, then lexicographic on image sequences"""
    images = sorted(
        tuple(sign * v for sign, v in zip(signs, perm))
        for perm in permutations(range(1, n + 1))
        for signs in product((1, -1), repeat=n)
    )
    ident = tuple(range(1, n + 1))
    images.remove(ident)
    return tuple(SignedPermutation(images) for images in [ident] + images)


def signed_cycles(w: SignedPermutation) -> List[Tuple[int, int]]:
    """(length, sign product) of the cycles of |w| on {1..n}"""
    seen = set()
    cycles = []
    for start in range(1, w.n + 1):
        if start in seen:
            continue
        size, sign, i = 0, 1, start
        while i not in seen:
            seen.add(i)
            image = w.images[i - 1]
            if image < 0:
                sign = -sign
            i = abs(image)
            size += 1
        cycles.append((size, sign))
    return cycles


def conjugacy_type(w: SignedPermutation):
    """The bipartition of w: cycles with sign product -1 go to the plus side"""
    from signed_compositions import Bipartition

    plus, minus = [], []
    for size, sign in signed_cycles(w):
        (plus if sign < 0 else minus).append(size)
    return Bipartition(tuple(sorted(plus, reverse=True)), tuple(sorted(minus, reverse=True)))


def coxeter_element(C) -> SignedPermutation:
    """Product of S_C block by block, t before the s's, s's ascending"""
    from signed_compositions import generators

    result = identity(C.n)
    for gen in generators(C):
        result = result * gen.as_permutation(C.n)
    return result


def element_order(w: SignedPermutation) -> int:
    orders = [2 * size if sign < 0 else size for size, sign in signed_cycles(w)]
    return math.lcm(*orders) if orders else 1


def p_prime_part(w: SignedPermutation, p: int) -> SignedPermutation:
    """The power of w of order prime to p that agrees with w on its p'-component"""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    order = element_order(w)
    p_power = 1
    while order % (p_power * p) == 0:
        p_power *= p
    m = order // p_power
    if m == 1:
        return identity(w.n)
    exponent = p_power * pow(p_power, -1, m)
    return w ** (exponent % order)


class GroupTable:
    """Wn as numpy arrays: images, integer codes and vectorised composition"""

    def __init__(self, n: int):
        self.n = n
        self.elements = enumerate_group(n)
        self.size = len(self.elements)
        self.images = np.array([w.images for w in self.elements], dtype=np.int64).reshape(self.size, n)
        self._weights = (2 * n + 1) ** np.arange(n, dtype=np.int64)
        self.codes = self.encode(self.images)
        self._order = np.argsort(self.codes)
        self._sorted_codes = self.codes[self._order]
        self.index = {w: i for i, w in enumerate(self.elements)}
        self.inverse_indices = self.lookup(self.invert(self.images))
        logger.info(f"Built group table for W{n} with {self.size} elements")

    def encode(self, images: np.ndarray) -> np.ndarray:
        return ((images + self.n) * self._weights).sum(axis=-1)

    def lookup(self, images: np.ndarray) -> np.ndarray:
        """Indices of the elements with the given image rows"""
        codes = self.encode(images)
        positions = np.searchsorted(self._sorted_codes, codes)
        positions = np.minimum(positions, self.size - 1)
        if not np.array_equal(self._sorted_codes[positions], codes):
            raise DomainError("Image rows are not elements of the group")
        return self._order[positions]

    @staticmethod
    def compose_images(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-wise a o b for image arrays of shape (m, n); either side may have one row"""
        a, b = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
        rows = np.arange(a.shape[0])[:, None]
        return a[rows, np.abs(b) - 1] * np.sign(b)

    @staticmethod
    def invert(images: np.ndarray) -> np.ndarray:
        images = np.atleast_2d(images)
        inv = np.empty_like(images)
        rows = np.arange(images.shape[0])[:, None]
        inv[rows, np.abs(images) - 1] = np.sign(images) * np.arange(1, images.shape[1] + 1)[None, :]
        return inv

    def indices_of(self, elements: Sequence[SignedPermutation]) -> np.ndarray:
        return np.array([self.index[w] for w in elements], dtype=np.int64)

    def left_translate(self, u: SignedPermutation) -> np.ndarray:
        """Indices of u o w for every w, in enumeration order"""
        return self.lookup(self.compose_images(np.array(u.images)[None, :], self.images))

    def left_quotient(self, g: SignedPermutation) -> np.ndarray:
        """Indices of w^-1 o g for every w, in enumeration order"""
        return self.lookup(self.compose_images(self.invert(self.images), np.array(g.images)[None, :]))

    def conjugates(self, rows: np.ndarray, c: SignedPermutation) -> np.ndarray:
        """Image rows of x^-1 c x for every x in the image array ``rows``"""
        c_rows = np.array(c.images)[None, :]
        return self.compose_images(self.invert(rows), self.compose_images(c_rows, rows))

    @property
    def class_labels(self) -> List:
        if not hasattr(self, "_class_labels"):
            self._class_labels = [conjugacy_type(w) for w in self.elements]
        return self._class_labels


@capped_cache
def group_table(n: int) -> GroupTable:
    return GroupTable(n)


def class_sizes(n: int) -> Dict:
    return dict(Counter(group_table(n).class_labels))


def class_size(lam, n: int) -> int:
    """|C(lambda)| by enumeration"""
    if lam.n != n:
        raise DomainError(f"Bipartition {lam} has size {lam.n}, expected {n}")
    return class_sizes(n).get(lam, 0)
