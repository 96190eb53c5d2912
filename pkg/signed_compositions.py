import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from errors import ConsistencyError, DomainError, SizeMismatchError, UsageError
from exact_linear import is_prime
from hyperoctahedral import (
    Root,
    SignedPermutation,
    conjugacy_type,
    coxeter_element,
    group_table,
    p_prime_part,
    s_generator,
    t_generator,
)

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignedComposition:
    """A sequence of nonzero integers; indexes W_C, x_C and X_C"""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(c) for c in self.parts)
        if any(c == 0 for c in parts):
            raise DomainError(f"Signed compositions have no zero parts: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(abs(c) for c in self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def plus_length(self) -> int:
        return sum(1 for c in self.parts if c > 0)

    @property
    def minus_length(self) -> int:
        return sum(1 for c in self.parts if c < 0)

    def positive(self) -> "SignedComposition":
        """C+ : every part made positive"""
        return SignedComposition(tuple(abs(c) for c in self.parts))

    def negative(self) -> "SignedComposition":
        """C- : every part made negative"""
        return SignedComposition(tuple(-abs(c) for c in self.parts))

    def __add__(self, other: "SignedComposition") -> "SignedComposition":
        return SignedComposition(self.parts + other.parts)

    def r_plus(self, i: int) -> int:
        return self.parts.count(i)

    def r_minus(self, i: int) -> int:
        return self.parts.count(-i)

    def blocks(self) -> List[Tuple[int, int]]:
        """(offset, part) for each part"""
        out, offset = [], 0
        for c in self.parts:
            out.append((offset, c))
            offset += abs(c)
        return out

    def is_parabolic(self) -> bool:
        return all(c < 0 for c in self.parts[1:])

    def is_semi_positive(self) -> bool:
        return all(c >= -1 for c in self.parts)

    def sort_key(self) -> Tuple:
        return (len(self.parts), tuple(-c for c in self.parts))

    def __lt__(self, other: "SignedComposition") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.parts)


@dataclass(frozen=True)
class Bipartition:
    """Pair of partitions (plus; minus); indexes classes and simple modules"""
    plus: Tuple[int, ...]
    minus: Tuple[int, ...]

    def __post_init__(self):
        plus = tuple(sorted((int(c) for c in self.plus), reverse=True))
        minus = tuple(sorted((int(c) for c in self.minus), reverse=True))
        if any(c <= 0 for c in plus + minus):
            raise DomainError(f"Bipartition parts must be positive: {plus};{minus}")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @property
    def n(self) -> int:
        return sum(self.plus) + sum(self.minus)

    @property
    def length(self) -> int:
        return len(self.plus) + len(self.minus)

    @property
    def minus_length(self) -> int:
        return len(self.minus)

    def r_plus(self, i: int) -> int:
        return self.plus.count(i)

    def r_minus(self, i: int) -> int:
        return self.minus.count(i)

    def hat(self) -> SignedComposition:
        return SignedComposition(self.plus + tuple(-c for c in self.minus))

    def order(self) -> int:
        """o(lambda) = lcm of 2*plus parts and minus parts"""
        values = [2 * c for c in self.plus] + list(self.minus)
        return math.lcm(*values) if values else 1

    def sort_key(self) -> Tuple:
        return self.hat().sort_key()

    def __lt__(self, other: "Bipartition") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return ",".join(map(str, self.plus)) + ";" + ",".join(map(str, self.minus))


class Generator(NamedTuple):
    """Element of S'_n: ('t', i) for t_i or ('s', i) for s_i"""
    kind: str
    index: int

    def as_permutation(self, n: int) -> SignedPermutation:
        if self.kind == "t":
            return t_generator(self.index, n)
        return s_generator(self.index, n)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def _positive_compositions(n: int) -> Iterator[Tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _positive_compositions(n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def all_compositions(n: int) -> Tuple[SignedComposition, ...]:
    """Comp(n), 2*3^(n-1) compositions sorted by (length, negated parts)"""
    comps = [
        SignedComposition(tuple(s * c for s, c in zip(signs, parts)))
        for parts in _positive_compositions(n)
        for signs in product((1, -1), repeat=len(parts))
    ]
    return tuple(sorted(comps, key=SignedComposition.sort_key))


def _partitions(n: int, largest: int = None) -> Iterator[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def all_bipartitions(n: int) -> Tuple[Bipartition, ...]:
    """Bip(n) in the order of their hats"""
    bips = [
        Bipartition(plus, minus)
        for k in range(n + 1)
        for plus in _partitions(k)
        for minus in _partitions(n - k)
    ]
    return tuple(sorted(bips, key=Bipartition.sort_key))


def lambda_of(C: SignedComposition) -> Bipartition:
    return Bipartition(
        tuple(c for c in C.parts if c > 0),
        tuple(-c for c in C.parts if c < 0),
    )


def hat(lam: Bipartition) -> SignedComposition:
    return lam.hat()


def generators(C: SignedComposition) -> List[Generator]:
    """S_C: t_{a+1} and the inner s's for a positive part at offset a; inner s's only for a negative part"""
    gens = []
    for offset, c in C.blocks():
        if c > 0:
            gens.append(Generator("t", offset + 1))
        gens.extend(Generator("s", offset + i) for i in range(1, abs(c)))
    return gens


def simple_roots(C: SignedComposition) -> List[Root]:
    """Delta_C: 2e_{a+1} for positive parts and e_{a+i+1} - e_{a+i}"""
    n = C.n
    roots = []
    for offset, c in C.blocks():
        if c > 0:
            roots.append(Root.from_terms(n, {offset + 1: 2}))
        roots.extend(Root.from_terms(n, {offset + i + 1: 1, offset + i: -1}) for i in range(1, abs(c)))
    return roots


def block_arrays(C: SignedComposition) -> Tuple[np.ndarray, np.ndarray]:
    """Block number of each position 1..n and whether that block is a negative part"""
    block_of = np.empty(C.n, dtype=np.int64)
    negative = np.empty(C.n, dtype=bool)
    for b, (offset, c) in enumerate(C.blocks()):
        block_of[offset:offset + abs(c)] = b
        negative[offset:offset + abs(c)] = c < 0
    return block_of, negative


def in_reflection_subgroup(w: SignedPermutation, C: SignedComposition) -> bool:
    """w stabilises every I_C^(i)"""
    return bool(subgroup_mask(np.array(w.images, dtype=np.int64).reshape(1, -1), C)[0])


def subgroup_mask(images: np.ndarray, C: SignedComposition) -> np.ndarray:
    """Row-wise membership in W_C for an image array"""
    images = np.atleast_2d(images)
    if C.n == 0:
        return np.ones(images.shape[0], dtype=bool)
    block_of, negative = block_arrays(C)
    same_block = block_of[np.abs(images) - 1] == block_of[None, :]
    sign_ok = ~negative[None, :] | (images > 0)
    return np.all(same_block & sign_ok, axis=1)


def coset_rep_mask(images: np.ndarray, C: SignedComposition) -> np.ndarray:
    """Row-wise w(alpha) > 0 for all alpha in Delta_C: images increase inside blocks, positive blocks start positive"""
    images = np.atleast_2d(images)
    mask = np.ones(images.shape[0], dtype=bool)
    for offset, c in C.blocks():
        if c > 0:
            mask &= images[:, offset] > 0
        for i in range(offset, offset + abs(c) - 1):
            mask &= images[:, i] < images[:, i + 1]
    return mask


def _check_sizes(C: SignedComposition, D: SignedComposition):
    if C.n != D.n:
        raise SizeMismatchError(f"Compositions {C} and {D} have different sizes")


def is_subset(C: SignedComposition, D: SignedComposition) -> bool:
    """C is contained in D: W_C inside W_D"""
    _check_sizes(C, D)
    return all(in_reflection_subgroup(g.as_permutation(C.n), D) for g in generators(C))


def preceq(C: SignedComposition, D: SignedComposition) -> bool:
    if is_subset(C, D):
        return True
    return is_subset(C, D.positive()) and C.length > D.length and C.minus_length >= D.minus_length


def subset_lambda(C: SignedComposition, D: SignedComposition) -> bool:
    """Some conjugate of W_C lies in W_D, by exhaustive conjugation of the generators of W_C"""
    _check_sizes(C, D)
    table = group_table(C.n)
    mask = np.ones(table.size, dtype=bool)
    for g in generators(C):
        mask &= subgroup_mask(table.conjugates(table.images, g.as_permutation(C.n)), D)
        if not mask.any():
            return False
    return bool(mask.any())


def equivalent(C: SignedComposition, D: SignedComposition) -> bool:
    return lambda_of(C) == lambda_of(D)


def order_relations(C: SignedComposition, D: SignedComposition) -> Dict[str, bool]:
    _check_sizes(C, D)
    return {
        "subset": is_subset(C, D),
        "preceq": preceq(C, D),
        "subset_lambda": subset_lambda(C, D),
        "equiv": equivalent(C, D),
    }


def normalizer_order(D: SignedComposition) -> int:
    """|W(D)| = prod r_i^+! * prod 2^(r_i^-) r_i^-!"""
    result = 1
    for i in range(1, D.n + 1):
        result *= math.factorial(D.r_plus(i))
        r = D.r_minus(i)
        result *= 2 ** r * math.factorial(r)
    return result


def _check_characteristic(p: int):
    if p != 0 and not is_prime(p):
        raise DomainError(f"Characteristic must be 0 or prime, got {p}")


def is_p_regular(lam: Bipartition, p: int) -> bool:
    if p == 0:
        return True
    if p == 2:
        return not lam.minus and all(lam.r_plus(i) <= 1 for i in set(lam.plus))
    return all(lam.r_plus(i) <= p - 1 for i in set(lam.plus)) and all(lam.r_minus(i) <= p - 1 for i in set(lam.minus))


def is_p_prime(lam: Bipartition, p: int) -> bool:
    if p == 0:
        return True
    if p == 2:
        return not lam.plus and all(c % 2 for c in lam.minus)
    return all(c % p for c in lam.plus + lam.minus)


@dataclass(frozen=True)
class BipClassification:
    n: int
    p: int
    bip: Tuple[Bipartition, ...]
    bip_p_prime: Tuple[Bipartition, ...]
    bip_p_regular: Tuple[Bipartition, ...]
    comp_p: Tuple[SignedComposition, ...]


@lru_cache(maxsize=None)
def bip_classification(n: int, p: int) -> BipClassification:
    _check_characteristic(p)
    bip = all_bipartitions(n)
    result = BipClassification(
        n=n,
        p=p,
        bip=bip,
        bip_p_prime=tuple(lam for lam in bip if is_p_prime(lam, p)),
        bip_p_regular=tuple(lam for lam in bip if is_p_regular(lam, p)),
        comp_p=tuple(C for C in all_compositions(n) if p and normalizer_order(C) % p == 0),
    )
    if len(result.bip_p_prime) != len(result.bip_p_regular):
        raise ConsistencyError(
            f"|Bip_p'| = {len(result.bip_p_prime)} differs from |Bip_p-reg| = {len(result.bip_p_regular)} for n={n}, p={p}"
        )
    return result


@lru_cache(maxsize=None)
def lambda_p_prime(lam: Bipartition, p: int) -> Bipartition:
    """Class of the p'-part of cox_lambda"""
    return conjugacy_type(p_prime_part(coxeter_element(lam.hat()), p))


def lambda_order(lam: Bipartition) -> int:
    return lam.order()


def tau_n(lam: Bipartition) -> Bipartition:
    """Bip(n) -> Bip(n+1): append a part 1 to the minus side"""
    return Bipartition(lam.plus, lam.minus + (1,))


def tau_d(D: SignedComposition, lambdas: Sequence[Bipartition]) -> Bipartition:
    """lambda of the concatenation of the hats, with (-1) for every part -1 of D"""
    if not D.is_semi_positive():
        raise DomainError(f"{D} is not semi-positive")
    pieces = iter(lambdas)
    total = SignedComposition(())
    for c in D.parts:
        total = total + (next(pieces).hat() if c > 0 else SignedComposition((-1,)))
    return lambda_of(total)


def rank_p(lam: Bipartition, p: int) -> int:
    if p == 0:
        return 0
    sizes = set(lam.plus) | set(lam.minus)
    if p == 2:
        return sum(lam.r_plus(i) // 2 + lam.r_minus(i) for i in sizes)
    return sum(lam.r_plus(i) // p + lam.r_minus(i) // p for i in sizes)


def saturated_family(n: int, k: int, negative: bool = False) -> List[SignedComposition]:
    """F_k(n) = {C : l(C) >= k}, or F_k^-(n) = {C : l^-(C) >= k}"""
    if negative:
        return [C for C in all_compositions(n) if C.minus_length >= k]
    return [C for C in all_compositions(n) if C.length >= k]


def _clean(text: str) -> str:
    return text.strip().replace("−", "-").replace(" ", "")


def parse_composition(text: str) -> SignedComposition:
    """"-3,1" -> (-3, 1)"""
    cleaned = _clean(text).strip("()")
    if not cleaned:
        return SignedComposition(())
    try:
        return SignedComposition(tuple(int(token) for token in cleaned.split(",")))
    except (ValueError, DomainError) as e:
        raise UsageError(f"Invalid signed composition '{text}': {str(e)}")


def _parse_side(side: str, text: str) -> Tuple[int, ...]:
    if side in ("", "∅"):
        return ()
    tokens = side.split(",") if "," in side else list(side)
    try:
        values = tuple(int(token) for token in tokens)
    except ValueError:
        raise UsageError(f"Invalid bipartition '{text}': bad token in '{side}'")
    if any(v <= 0 for v in values):
        raise UsageError(f"Invalid bipartition '{text}': parts must be positive")
    return values


def parse_bipartition(text: str) -> Bipartition:
    """"2,1;1", "21;1" and ";2" are accepted"""
    cleaned = _clean(text)
    if cleaned.count(";") != 1:
        raise UsageError(f"Invalid bipartition '{text}': expected exactly one ';'")
    plus, minus = cleaned.split(";")
    return Bipartition(_parse_side(plus, text), _parse_side(minus, text))
